#pragma once

// Arithmetic in F2[u]/u^k and linear algebra over F2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace khbn {

inline constexpr int kMaxOrder = 64;

/// Element of F2[u]/u^k; bit i is the coefficient of u^i.
class RingElem {
 public:
  RingElem() = default;
  RingElem(int k, std::uint64_t bits);

  static RingElem zero(int k) { return RingElem(k, 0); }
  static RingElem one(int k) { return RingElem(k, 1); }
  /// u^e, which is zero once e >= k.
  static RingElem u_power(int k, int e);

  int order() const { return k_; }
  std::uint64_t bits() const { return bits_; }
  bool coeff(int i) const { return (bits_ >> i) & 1U; }
  bool is_zero() const { return bits_ == 0; }
  bool is_unit() const { return bits_ & 1U; }

  friend RingElem operator+(RingElem a, RingElem b);
  friend RingElem operator*(RingElem a, RingElem b);
  RingElem& operator+=(RingElem o) { return *this = *this + o; }
  friend bool operator==(const RingElem&, const RingElem&) = default;

  std::string to_string() const;

 private:
  int k_ = 1;
  std::uint64_t bits_ = 0;
};

/// Sparse matrix over F2[u]/u^k, stored by rows with sorted columns.
class SparseMat {
 public:
  struct Entry {
    int col;
    std::uint64_t bits;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  SparseMat() = default;
  SparseMat(int rows, int cols, int k);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int order() const { return k_; }
  std::size_t nonzeros() const;
  bool is_zero() const { return nonzeros() == 0; }

  RingElem get(int r, int c) const;
  /// Adds (in the ring) `v` to entry (r, c); entries cancelling to zero are dropped.
  void add(int r, int c, RingElem v);
  void set(int r, int c, RingElem v);
  std::span<const Entry> row(int r) const { return data_[r]; }

  friend SparseMat operator*(const SparseMat& a, const SparseMat& b);
  friend bool operator==(const SparseMat&, const SparseMat&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  int k_ = 1;
  std::vector<std::vector<Entry>> data_;
};

/// Fixed-length bit vector with 64-bit words.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t bits) : size_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  bool any() const;
  std::size_t count() const;
  /// Index of the lowest set bit, or size() when none.
  std::size_t first() const;
  /// Grows (zero-filled) if `bits` exceeds the current size.
  void resize(std::size_t bits);

  BitVec& operator^=(const BitVec& o);
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend bool operator==(const BitVec&, const BitVec&) = default;

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Dense bit-packed matrix over F2.
class F2Mat {
 public:
  F2Mat() = default;
  F2Mat(int rows, int cols);
  static F2Mat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool get(int r, int c) const { return data_[r].test(c); }
  void set(int r, int c, bool v = true);
  void flip(int r, int c) { data_[r].flip(c); }
  const BitVec& row(int r) const { return data_[r]; }
  BitVec& row(int r) { return data_[r]; }
  BitVec column(int c) const;
  bool is_zero() const;

  /// Image of a column vector of length cols().
  BitVec apply(const BitVec& v) const;
  F2Mat transposed() const;

  friend F2Mat operator*(const F2Mat& a, const F2Mat& b);
  friend bool operator==(const F2Mat&, const F2Mat&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<BitVec> data_;
};

/// Each ring entry becomes the k x k lower-triangular Toeplitz block of
/// multiplication by that element on the basis 1, u, ..., u^{k-1}. Row
/// r*k + t of the result is the u^t coefficient of output r.
F2Mat flatten(const SparseMat& m);

struct RankResult {
  int rank = 0;
  std::vector<int> pivot_cols;
  /// Vectors of length cols() spanning the null space, one per free column.
  std::vector<BitVec> kernel_basis;
  /// The original columns at the pivot positions.
  std::vector<BitVec> image_basis;
  F2Mat rref;
};

/// Gauss-Jordan elimination; columns scanned left to right, the pivot is the
/// lowest-index remaining row with a one.
RankResult f2_rank(const F2Mat& m);

/// Rank of a list of equal-length vectors.
int rank_of(std::span<const BitVec> vectors, std::size_t length);

/// Multiplicities m[1..k] of Jordan blocks of size j of a nilpotent operator
/// with N^k = 0. m[0] is unused. Throws NotNilpotentAtOrderK.
std::vector<int> nilpotent_block_multiplicities(const F2Mat& n, int k);

/// Quotient Z/B of a subspace by relations, with explicit representatives and
/// coordinates. Insertion order fixes the representative choice.
class QuotientBasis {
 public:
  explicit QuotientBasis(std::size_t dim) : dim_(dim) {}

  /// Adds a relation (boundary). Returns false if it was already dependent.
  bool add_relation(BitVec v);
  /// Adds v as the next representative if it is independent of everything
  /// added so far; returns whether it was kept.
  bool add_representative(BitVec v);

  int representative_count() const { return static_cast<int>(reps_.size()); }
  int relation_rank() const { return relation_rank_; }
  const std::vector<BitVec>& representatives() const { return reps_; }

  /// Coordinates of v over the representatives modulo the relations, or
  /// nullopt when v is not in their span.
  std::optional<BitVec> coordinates(BitVec v) const;

 private:
  struct Row {
    BitVec vec;
    BitVec combo;
    std::size_t pivot;
  };
  // Reduces v in place; returns accumulated combination.
  BitVec reduce(BitVec& v) const;

  std::size_t dim_;
  std::vector<Row> rows_;
  std::vector<BitVec> reps_;
  int relation_rank_ = 0;
};

}  // namespace khbn
