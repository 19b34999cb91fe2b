#include "khbn/sseq.hpp"

#include <algorithm>
#include <bit>
#include <climits>

#include "khbn/errors.hpp"

namespace khbn {

int FilteredComplex::min_level() const {
  int m = INT_MAX;
  for (const auto& [key, b] : blocks)
    for (int l : b.level) m = std::min(m, l);
  return m == INT_MAX ? 0 : m;
}

int FilteredComplex::max_level() const {
  int m = INT_MIN;
  for (const auto& [key, b] : blocks)
    for (int l : b.level) m = std::max(m, l);
  return m == INT_MIN ? 0 : m;
}

void FilteredComplex::validate() const {
  for (const auto& [key, b] : blocks) {
    const auto [n, w] = key;
    if (b.d.cols() != static_cast<int>(b.level.size()))
      throw Error(ErrorKind::DimensionMismatch, "differential width differs from block size");
    auto next = blocks.find({n + 1, w});
    const int rows = next == blocks.end() ? 0 : static_cast<int>(next->second.level.size());
    if (b.d.rows() != rows)
      throw Error(ErrorKind::DimensionMismatch, "differential height differs from next block");
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < b.d.cols(); ++c)
        if (b.d.get(r, c) && next->second.level[r] > b.level[c])
          throw Error(ErrorKind::FiltrationViolation,
                      "d raises level " + std::to_string(b.level[c]) + " to " +
                          std::to_string(next->second.level[r]) + " in degree " +
                          std::to_string(n) + ", weight " + std::to_string(w));
  }
}

FilteredComplex u_adic_filtration(const FreeComplex& c) {
  const FlatComplex flat(c);
  FilteredComplex f;
  for (const Bidegree b : flat.bidegrees()) {
    FilteredComplex::Block blk;
    for (const auto& cell : flat.cells(b)) blk.level.push_back(c.k - 1 - cell.power);
    blk.d = flat.differential(b);
    f.blocks.emplace(std::make_pair(b.i, b.j), std::move(blk));
  }
  return f;
}

std::string to_string(const PagePosition& pos) {
  return "(p=" + std::to_string(pos.p) + ", n=" + std::to_string(pos.n) +
         ", w=" + std::to_string(pos.weight) + ")";
}

int PageTable::total(int r) const {
  int t = 0;
  for (const auto& [pos, d] : pages.at(r)) t += d;
  return t;
}

namespace {

using Block = FilteredComplex::Block;

std::size_t last_set(const BitVec& v) {
  const auto w = v.words();
  for (std::size_t i = w.size(); i-- > 0;)
    if (w[i]) return i * 64 + 63 - static_cast<std::size_t>(std::countl_zero(w[i]));
  return v.size();
}

// Positions of the basis sorted by (level, index).
std::vector<int> level_order(const Block& b) {
  std::vector<int> order(b.level.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return b.level[x] < b.level[y]; });
  return order;
}

// Filtration-preserving column reduction of d : b -> next. A surviving
// column c with lowest row y pairs c with y; both get gap level(c) - level(y).
void pair_up(const Block& b, const Block& next, std::vector<std::optional<int>>& gap_b,
             std::vector<std::optional<int>>& gap_next) {
  const std::vector<int> rows = level_order(next);
  std::vector<int> row_pos(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = static_cast<int>(i);

  const F2Mat dt = b.d.transposed();
  std::vector<BitVec> reduced;
  std::vector<int> owner(rows.size(), -1);
  for (int c : level_order(b)) {
    BitVec col(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (dt.get(c, static_cast<int>(r))) col.set(row_pos[r]);
    std::size_t low = last_set(col);
    while (low < col.size() && owner[low] >= 0) {
      col ^= reduced[owner[low]];
      low = last_set(col);
    }
    if (low == col.size()) continue;
    owner[low] = static_cast<int>(reduced.size());
    reduced.push_back(std::move(col));
    const int y = rows[low];
    gap_b[c] = gap_next[y] = b.level[c] - next.level[y];
  }
}

}  // namespace

PageTable filtration_pages(const FilteredComplex& f, std::optional<int> r_max) {
  f.validate();
  const int lo = f.min_level();
  const int hi = f.max_level();
  const int last = r_max.value_or(hi - lo + 1);
  if (last < 0) throw Error(ErrorKind::DimensionMismatch, "negative page index");

  // Every basis element ends up essential or in a pair x -> y with
  // level(x) - level(y) = g; such a pair lives on E_0 .. E_g.
  std::map<std::pair<int, int>, std::vector<std::optional<int>>> gap;
  for (const auto& [key, b] : f.blocks) gap[key].assign(b.level.size(), std::nullopt);
  for (const auto& [key, b] : f.blocks) {
    auto next = f.blocks.find({key.first + 1, key.second});
    if (next != f.blocks.end()) pair_up(b, next->second, gap[key], gap[next->first]);
  }

  PageTable t;
  t.pages.resize(last + 1);
  for (const auto& [key, b] : f.blocks) {
    const auto [n, w] = key;
    const auto& g = gap.at(key);
    for (std::size_t x = 0; x < b.level.size(); ++x) {
      const int until = g[x] ? std::min(*g[x], last) : last;
      for (int r = 0; r <= until; ++r) t.pages[r][{b.level[x], n, w}] += 1;
    }
  }
  t.r_stab = last;
  while (t.r_stab > 0 && t.pages[t.r_stab - 1] == t.pages[last]) --t.r_stab;
  return t;
}

EInftyReport verify_einfty_gr(const PageTable& pages, const ModuleDecomp& m) {
  EInftyReport rep;
  std::map<PagePosition, int> gr;
  for (const auto& [key, d] : m.filtration_dims) {
    const auto [p, i, j] = key;
    if (d > 0) gr[{p, i, j}] = d;
  }
  const auto& einf = pages.e_infinity();
  auto a = einf.begin();
  auto b = gr.begin();
  while (a != einf.end() || b != gr.end()) {
    if (a != einf.end() && b != gr.end() && a->first == b->first && a->second == b->second) {
      ++a;
      ++b;
      continue;
    }
    PagePosition at;
    if (b == gr.end() || (a != einf.end() && a->first <= b->first))
      at = a->first;
    else
      at = b->first;
    auto ea = einf.find(at);
    auto gb = gr.find(at);
    rep.ok = false;
    rep.mismatch = at;
    rep.message = "E_inf has dimension " + std::to_string(ea == einf.end() ? 0 : ea->second) +
                  " but the associated graded has " +
                  std::to_string(gb == gr.end() ? 0 : gb->second) + " at " + to_string(at);
    return rep;
  }
  return rep;
}

EInftyReport verify_einfty_gr(const FilteredComplex& f, const ModuleDecomp& m) {
  return verify_einfty_gr(filtration_pages(f), m);
}

}  // namespace khbn
