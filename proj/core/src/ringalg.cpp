#include "khbn/ringalg.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

#include "khbn/errors.hpp"

namespace khbn {

namespace {

std::uint64_t truncation_mask(int k) {
  return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
}

void check_order(int k) {
  if (k < 1 || k > kMaxOrder)
    throw Error(ErrorKind::DimensionMismatch,
                "truncation order " + std::to_string(k) + " outside 1.." + std::to_string(kMaxOrder));
}

}  // namespace

RingElem::RingElem(int k, std::uint64_t bits) : k_(k), bits_(bits & truncation_mask(k)) {
  check_order(k);
}

RingElem RingElem::u_power(int k, int e) {
  if (e >= k) return zero(k);
  return RingElem(k, std::uint64_t{1} << e);
}

RingElem operator+(RingElem a, RingElem b) {
  if (a.k_ != b.k_) throw Error(ErrorKind::DimensionMismatch, "ring orders differ");
  return RingElem(a.k_, a.bits_ ^ b.bits_);
}

RingElem operator*(RingElem a, RingElem b) {
  if (a.k_ != b.k_) throw Error(ErrorKind::DimensionMismatch, "ring orders differ");
  std::uint64_t out = 0;
  for (std::uint64_t x = a.bits_; x; x &= x - 1) out ^= b.bits_ << std::countr_zero(x);
  return RingElem(a.k_, out);
}

std::string RingElem::to_string() const {
  if (bits_ == 0) return "0";
  std::string s;
  for (int i = 0; i < k_; ++i) {
    if (!coeff(i)) continue;
    if (!s.empty()) s += " + ";
    s += i == 0 ? "1" : (i == 1 ? "u" : "u^" + std::to_string(i));
  }
  return s;
}

SparseMat::SparseMat(int rows, int cols, int k) : rows_(rows), cols_(cols), k_(k), data_(rows) {
  check_order(k);
}

std::size_t SparseMat::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

RingElem SparseMat::get(int r, int c) const {
  const auto& row = data_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, int col) { return e.col < col; });
  if (it == row.end() || it->col != c) return RingElem::zero(k_);
  return RingElem(k_, it->bits);
}

void SparseMat::add(int r, int c, RingElem v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw Error(ErrorKind::DimensionMismatch, "entry outside matrix bounds");
  if (v.is_zero()) return;
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, int col) { return e.col < col; });
  if (it != row.end() && it->col == c) {
    it->bits ^= v.bits();
    if (it->bits == 0) row.erase(it);
  } else {
    row.insert(it, Entry{c, v.bits()});
  }
}

void SparseMat::set(int r, int c, RingElem v) {
  add(r, c, get(r, c) + v);
}

SparseMat operator*(const SparseMat& a, const SparseMat& b) {
  if (a.cols_ != b.rows_ || a.k_ != b.k_)
    throw Error(ErrorKind::DimensionMismatch,
                "cannot compose " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                    " with " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  SparseMat out(a.rows_, b.cols_, a.k_);
  for (int r = 0; r < a.rows_; ++r)
    for (const auto& ea : a.data_[r])
      for (const auto& eb : b.data_[ea.col])
        out.add(r, eb.col, RingElem(a.k_, ea.bits) * RingElem(a.k_, eb.bits));
  return out;
}

bool BitVec::any() const {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::size_t BitVec::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t BitVec::first() const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
  return size_;
}

void BitVec::resize(std::size_t bits) {
  if (bits <= size_) return;
  size_ = bits;
  words_.resize((bits + 63) / 64, 0);
}

BitVec& BitVec::operator^=(const BitVec& o) {
  if (o.size_ > size_) resize(o.size_);
  for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

F2Mat::F2Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(rows, BitVec(cols)) {}

F2Mat F2Mat::identity(int n) {
  F2Mat m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i);
  return m;
}

void F2Mat::set(int r, int c, bool v) {
  if (v)
    data_[r].set(c);
  else
    data_[r].reset(c);
}

BitVec F2Mat::column(int c) const {
  BitVec v(rows_);
  for (int r = 0; r < rows_; ++r)
    if (data_[r].test(c)) v.set(r);
  return v;
}

bool F2Mat::is_zero() const {
  return std::none_of(data_.begin(), data_.end(), [](const BitVec& r) { return r.any(); });
}

BitVec F2Mat::apply(const BitVec& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw Error(ErrorKind::DimensionMismatch, "vector length does not match column count");
  BitVec out(rows_);
  const auto vw = v.words();
  for (int r = 0; r < rows_; ++r) {
    const auto rw = data_[r].words();
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < rw.size(); ++i) acc ^= rw[i] & vw[i];
    if (std::popcount(acc) & 1) out.set(r);
  }
  return out;
}

F2Mat F2Mat::transposed() const {
  F2Mat t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (std::size_t c = data_[r].first(); c < static_cast<std::size_t>(cols_); ++c)
      if (data_[r].test(c)) t.set(static_cast<int>(c), r);
  return t;
}

F2Mat operator*(const F2Mat& a, const F2Mat& b) {
  if (a.cols_ != b.rows_)
    throw Error(ErrorKind::DimensionMismatch,
                "cannot multiply " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                    " by " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  F2Mat out(a.rows_, b.cols_);
  for (int r = 0; r < a.rows_; ++r)
    for (int c = 0; c < a.cols_; ++c)
      if (a.get(r, c)) out.data_[r] ^= b.data_[c];
  return out;
}

F2Mat flatten(const SparseMat& m) {
  const int k = m.order();
  F2Mat out(m.rows() * k, m.cols() * k);
  for (int r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row(r))
      for (std::uint64_t bits = e.bits; bits; bits &= bits - 1) {
        const int shift = std::countr_zero(bits);
        for (int p = 0; p + shift < k; ++p) out.flip(r * k + p + shift, e.col * k + p);
      }
  return out;
}

RankResult f2_rank(const F2Mat& m) {
  RankResult res;
  res.rref = m;
  F2Mat& a = res.rref;
  int next_row = 0;
  for (int c = 0; c < m.cols() && next_row < m.rows(); ++c) {
    int pivot = -1;
    for (int r = next_row; r < m.rows(); ++r)
      if (a.get(r, c)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a.row(pivot), a.row(next_row));
    for (int r = 0; r < m.rows(); ++r)
      if (r != next_row && a.get(r, c)) a.row(r) ^= a.row(next_row);
    res.pivot_cols.push_back(c);
    ++next_row;
  }
  res.rank = next_row;

  std::vector<int> pivot_row_of(m.cols(), -1);
  for (int i = 0; i < res.rank; ++i) pivot_row_of[res.pivot_cols[i]] = i;
  for (int f = 0; f < m.cols(); ++f) {
    if (pivot_row_of[f] >= 0) continue;
    BitVec v(m.cols());
    v.set(f);
    for (int i = 0; i < res.rank; ++i)
      if (a.get(i, f)) v.set(res.pivot_cols[i]);
    res.kernel_basis.push_back(std::move(v));
  }
  for (int c : res.pivot_cols) res.image_basis.push_back(m.column(c));
  assert(res.rank + static_cast<int>(res.kernel_basis.size()) == m.cols());
  return res;
}

int rank_of(std::span<const BitVec> vectors, std::size_t length) {
  std::vector<BitVec> basis;
  std::vector<std::size_t> pivots;
  for (BitVec v : vectors) {
    v.resize(length);
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (v.test(pivots[i])) v ^= basis[i];
    const std::size_t p = v.first();
    if (p >= length) continue;
    pivots.push_back(p);
    basis.push_back(std::move(v));
  }
  return static_cast<int>(basis.size());
}

std::vector<int> nilpotent_block_multiplicities(const F2Mat& n, int k) {
  if (n.rows() != n.cols()) throw Error(ErrorKind::DimensionMismatch, "operator must be square");
  const int d = n.rows();
  std::vector<int> ranks{d};
  F2Mat power = F2Mat::identity(d);
  for (int j = 1; j <= k + 1; ++j) {
    power = power * n;
    ranks.push_back(j >= k ? 0 : f2_rank(power).rank);
    if (j == k && !power.is_zero())
      throw Error(ErrorKind::NotNilpotentAtOrderK,
                  "operator power " + std::to_string(k) + " is nonzero");
  }
  std::vector<int> m(k + 1, 0);
  int dim = 0;
  for (int j = 1; j <= k; ++j) {
    m[j] = ranks[j - 1] - 2 * ranks[j] + ranks[j + 1];
    dim += j * m[j];
  }
  assert(dim == d);
  return m;
}

BitVec QuotientBasis::reduce(BitVec& v) const {
  BitVec combo;
  for (const auto& row : rows_)
    if (v.test(row.pivot)) {
      v ^= row.vec;
      combo ^= row.combo;
    }
  return combo;
}

bool QuotientBasis::add_relation(BitVec v) {
  v.resize(dim_);
  BitVec combo = reduce(v);
  const std::size_t p = v.first();
  if (p >= dim_) return false;
  rows_.push_back(Row{std::move(v), std::move(combo), p});
  ++relation_rank_;
  return true;
}

bool QuotientBasis::add_representative(BitVec v) {
  v.resize(dim_);
  BitVec original = v;
  BitVec combo = reduce(v);
  const std::size_t p = v.first();
  if (p >= dim_) return false;
  // row = original - (reduction), expressed as e_new + combo
  combo.resize(reps_.size() + 1);
  combo.flip(reps_.size());
  rows_.push_back(Row{std::move(v), std::move(combo), p});
  reps_.push_back(std::move(original));
  return true;
}

std::optional<BitVec> QuotientBasis::coordinates(BitVec v) const {
  v.resize(dim_);
  BitVec combo = reduce(v);
  if (v.any()) return std::nullopt;
  combo.resize(reps_.size());
  return combo;
}

}  // namespace khbn
