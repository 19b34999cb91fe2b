#include "khbn/homology.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "khbn/errors.hpp"

namespace khbn {

std::string to_string(Bidegree b) {
  return "(" + std::to_string(b.i) + "," + std::to_string(b.j) + ")";
}

int ModuleDecomp::total_dim() const {
  int n = 0;
  for (const auto& [b, h] : groups) n += h.dim;
  return n;
}

int ModuleDecomp::summand_count(int length) const {
  int n = 0;
  for (const auto& [b, h] : groups)
    if (length < static_cast<int>(h.summands.size())) n += h.summands[length];
  return n;
}

int ModuleDecomp::u_rank() const {
  // a summand F2[u]/u^l contributes l-1 to the rank of u
  int n = 0;
  for (const auto& [b, h] : groups)
    for (std::size_t l = 1; l < h.summands.size(); ++l)
      n += static_cast<int>(l - 1) * h.summands[l];
  return n;
}

ModuleDecomp shifted(const ModuleDecomp& m, int di, int dj) {
  ModuleDecomp out;
  out.k = m.k;
  for (const auto& [b, h] : m.groups) out.groups[{b.i + di, b.j + dj}] = h;
  for (const auto& [key, n] : m.filtration_dims) {
    auto [p, i, j] = key;
    out.filtration_dims[{p, i + di, j + dj}] = n;
  }
  return out;
}

ModuleDecomp direct_sum(const ModuleDecomp& a, const ModuleDecomp& b) {
  if (a.k != b.k) throw Error(ErrorKind::DimensionMismatch, "direct sum of different orders");
  ModuleDecomp out = a;
  for (const auto& [bd, h] : b.groups) {
    auto& dst = out.groups[bd];
    if (dst.summands.empty()) dst.summands.assign(a.k + 1, 0);
    dst.dim += h.dim;
    for (std::size_t l = 0; l < h.summands.size(); ++l) dst.summands[l] += h.summands[l];
  }
  for (const auto& [key, n] : b.filtration_dims) out.filtration_dims[key] += n;
  return out;
}

LaurentPoly euler_characteristic(const ModuleDecomp& m) {
  LaurentPoly p;
  for (const auto& [b, h] : m.groups) p.add_term(b.j, (b.i % 2 == 0 ? 1 : -1) * h.dim);
  return p;
}

// ---------------------------------------------------------------------------

FlatComplex::FlatComplex(const FreeComplex& c) : k_(c.k), quantum_(c.quantum) {
  std::map<int, std::vector<int>> local;
  for (const auto& [i, qs] : c.quantum) {
    auto& loc = local[i];
    loc.assign(qs.size() * k_, -1);
    for (int g = 0; g < static_cast<int>(qs.size()); ++g)
      for (int p = 0; p < k_; ++p) {
        auto& cells = cells_[{i, qs[g] - 2 * p}];
        loc[g * k_ + p] = static_cast<int>(cells.size());
        cells.push_back({g, p});
      }
  }

  // column lists of each differential
  std::map<int, std::vector<std::vector<std::pair<int, std::uint64_t>>>> by_col;
  for (const auto& [i, d] : c.differential) {
    auto& cols = by_col[i];
    cols.resize(d.cols());
    for (int r = 0; r < d.rows(); ++r)
      for (const auto& e : d.row(r)) cols[e.col].emplace_back(r, e.bits);
  }

  for (const auto& [b, cells] : cells_) {
    const Bidegree target{b.i + 1, b.j};
    auto tc = cells_.find(target);
    const int rows = tc == cells_.end() ? 0 : static_cast<int>(tc->second.size());
    F2Mat m(rows, static_cast<int>(cells.size()));
    auto dc = by_col.find(b.i);
    if (dc != by_col.end() && rows > 0) {
      const auto& tq = c.quantum.at(b.i + 1);
      const auto& tloc = local.at(b.i + 1);
      for (int col = 0; col < static_cast<int>(cells.size()); ++col) {
        const auto [g, p] = cells[col];
        for (const auto& [h, bits] : dc->second[g])
          for (std::uint64_t x = bits; x; x &= x - 1) {
            const int e = std::countr_zero(x);
            if (p + e >= k_) continue;
            if (tq[h] - 2 * (p + e) != b.j)
              throw Error(ErrorKind::DimensionMismatch,
                          "differential entry is not quantum homogeneous at " + to_string(b));
            m.flip(tloc[h * k_ + p + e], col);
          }
      }
    }
    blocks_.emplace(b, std::move(m));
  }
}

std::vector<Bidegree> FlatComplex::bidegrees() const {
  std::vector<Bidegree> out;
  for (const auto& [b, cells] : cells_) out.push_back(b);
  return out;
}

int FlatComplex::block_dim(Bidegree b) const {
  auto it = cells_.find(b);
  return it == cells_.end() ? 0 : static_cast<int>(it->second.size());
}

std::span<const FlatComplex::Cell> FlatComplex::cells(Bidegree b) const {
  auto it = cells_.find(b);
  if (it == cells_.end()) return {};
  return it->second;
}

int FlatComplex::quantum_of(int i, int gen, int power) const {
  return quantum_.at(i).at(gen) - 2 * power;
}

int FlatComplex::local_index(int i, int gen, int power) const {
  if (power < 0 || power >= k_) return -1;
  const auto cs = cells({i, quantum_of(i, gen, power)});
  // cells of a block are appended in increasing (gen, power) order
  auto it = std::lower_bound(cs.begin(), cs.end(), Cell{gen, power}, [](Cell a, Cell b) {
    return a.gen != b.gen ? a.gen < b.gen : a.power < b.power;
  });
  if (it == cs.end() || it->gen != gen || it->power != power) return -1;
  return static_cast<int>(it - cs.begin());
}

const F2Mat& FlatComplex::differential(Bidegree b) const {
  auto it = blocks_.find(b);
  return it == blocks_.end() ? empty_ : it->second;
}

BitVec FlatComplex::u_shift(Bidegree from, const BitVec& v, int times) const {
  const Bidegree to{from.i, from.j - 2 * times};
  BitVec out(block_dim(to));
  const auto cs = cells(from);
  for (std::size_t x = v.first(); x < v.size(); ++x) {
    if (!v.test(x)) continue;
    const int idx = local_index(from.i, cs[x].gen, cs[x].power + times);
    if (idx >= 0) out.flip(idx);
  }
  return out;
}

// ---------------------------------------------------------------------------

HomologyComputation::HomologyComputation(const FreeComplex& c) : flat_(c) {
  for (const Bidegree b : flat_.bidegrees()) {
    Block blk;
    const int n = flat_.block_dim(b);
    blk.quotient = QuotientBasis(n);
    blk.cycles = f2_rank(flat_.differential(b)).kernel_basis;
    const Bidegree prev{b.i - 1, b.j};
    if (flat_.block_dim(prev) > 0) blk.boundaries = f2_rank(flat_.differential(prev)).image_basis;
    for (const auto& v : blk.boundaries) blk.quotient.add_relation(v);
    for (const auto& v : blk.cycles) blk.quotient.add_representative(v);
    blocks_.emplace(b, std::move(blk));
  }
}

const HomologyComputation::Block* HomologyComputation::block(Bidegree b) const {
  auto it = blocks_.find(b);
  return it == blocks_.end() ? nullptr : &it->second;
}

std::vector<Bidegree> HomologyComputation::support() const {
  std::vector<Bidegree> out;
  for (const auto& [b, blk] : blocks_)
    if (blk.quotient.representative_count() > 0) out.push_back(b);
  return out;
}

int HomologyComputation::dim(Bidegree b) const {
  const Block* blk = block(b);
  return blk ? blk->quotient.representative_count() : 0;
}

const std::vector<BitVec>& HomologyComputation::representatives(Bidegree b) const {
  static const std::vector<BitVec> none;
  const Block* blk = block(b);
  return blk ? blk->quotient.representatives() : none;
}

BitVec HomologyComputation::coordinates(Bidegree b, const BitVec& v) const {
  const Block* blk = block(b);
  if (!blk) {
    if (v.any()) throw Error(ErrorKind::LiftFailure, "nonzero chain in empty block " + to_string(b));
    return BitVec(0);
  }
  auto c = blk->quotient.coordinates(v);
  if (!c) throw Error(ErrorKind::LiftFailure, "chain at " + to_string(b) + " is not a cycle");
  return *c;
}

F2Mat HomologyComputation::u_action(Bidegree b) const {
  const Bidegree t{b.i, b.j - 2};
  const auto& reps = representatives(b);
  F2Mat m(dim(t), static_cast<int>(reps.size()));
  for (int c = 0; c < static_cast<int>(reps.size()); ++c) {
    const BitVec coords = coordinates(t, flat_.u_shift(b, reps[c], 1));
    for (std::size_t r = coords.first(); r < coords.size(); ++r)
      if (coords.test(r)) m.set(static_cast<int>(r), c);
  }
  return m;
}

int HomologyComputation::filtered_dim(Bidegree b, int level) const {
  const Block* blk = block(b);
  if (!blk) return 0;
  const int min_power = order() - 1 - level;
  if (min_power <= 0) return blk->quotient.representative_count();
  if (min_power >= order()) return 0;
  const auto cs = flat_.cells(b);
  std::vector<int> cols;
  for (int x = 0; x < static_cast<int>(cs.size()); ++x)
    if (cs[x].power >= min_power) cols.push_back(x);
  const F2Mat& d = flat_.differential(b);
  F2Mat sub(d.rows(), static_cast<int>(cols.size()));
  for (int r = 0; r < d.rows(); ++r)
    for (int c = 0; c < static_cast<int>(cols.size()); ++c)
      if (d.get(r, cols[c])) sub.set(r, c);
  std::vector<BitVec> span = blk->boundaries;
  const int base = rank_of(span, cs.size());
  for (const auto& z : f2_rank(sub).kernel_basis) {
    BitVec full(cs.size());
    for (std::size_t c = z.first(); c < z.size(); ++c)
      if (z.test(c)) full.set(static_cast<std::size_t>(cols[c]));
    span.push_back(std::move(full));
  }
  return rank_of(span, cs.size()) - base;
}

ModuleDecomp HomologyComputation::decomposition() const {
  const int k = order();
  ModuleDecomp out;
  out.k = k;
  const auto supp = support();
  if (supp.empty()) return out;

  std::map<Bidegree, F2Mat> u;
  for (const Bidegree b : supp) u.emplace(b, u_action(b));

  // r[m] at b: rank of u^m restricted to H_b, m = 0..k
  std::map<Bidegree, std::vector<int>> ranks;
  auto rank_at = [&](Bidegree b, int m) -> int {
    auto it = ranks.find(b);
    if (it == ranks.end()) return 0;
    return m < static_cast<int>(it->second.size()) ? it->second[m] : 0;
  };
  for (const Bidegree b : supp) {
    std::vector<int> r{dim(b)};
    F2Mat power = F2Mat::identity(dim(b));
    Bidegree at = b;
    for (int m = 1; m <= k; ++m) {
      auto it = u.find(at);
      if (it == u.end() || power.rows() == 0) {
        r.push_back(0);
        power = F2Mat(0, dim(b));
      } else {
        power = it->second * power;
        r.push_back(f2_rank(power).rank);
      }
      at.j -= 2;
    }
    if (r[k] != 0)
      throw Error(ErrorKind::NotNilpotentAtOrderK, "u^k acts nontrivially at " + to_string(b));
    ranks.emplace(b, std::move(r));
  }

  for (const Bidegree b : supp) {
    BidegreeHomology h;
    h.dim = dim(b);
    h.summands.assign(k + 1, 0);
    const Bidegree up{b.i, b.j + 2};
    for (int l = 1; l <= k; ++l) {
      const int at_least_l = rank_at(b, l - 1) - rank_at(up, l);
      const int at_least_next = rank_at(b, l) - rank_at(up, l + 1);
      h.summands[l] = at_least_l - at_least_next;
      if (h.summands[l] < 0)
        throw Error(ErrorKind::ModuleMismatch, "negative summand count at " + to_string(b));
    }
    out.groups.emplace(b, std::move(h));
  }

  // Cross-check against the Jordan type of u on each homological degree.
  std::map<int, std::vector<Bidegree>> by_degree;
  for (const Bidegree b : supp) by_degree[b.i].push_back(b);
  for (const auto& [i, bs] : by_degree) {
    std::map<Bidegree, int> start;
    int total = 0;
    for (const Bidegree b : bs) {
      start[b] = total;
      total += dim(b);
    }
    F2Mat n(total, total);
    for (const Bidegree b : bs) {
      const auto& ub = u.at(b);
      const Bidegree t{b.i, b.j - 2};
      if (ub.rows() == 0) continue;
      for (int r = 0; r < ub.rows(); ++r)
        for (int c = 0; c < ub.cols(); ++c)
          if (ub.get(r, c)) n.set(start.at(t) + r, start.at(b) + c);
    }
    const auto jordan = nilpotent_block_multiplicities(n, k);
    for (int l = 1; l <= k; ++l) {
      int sum = 0;
      for (const Bidegree b : bs) sum += out.groups.at(b).summands[l];
      if (sum != jordan[l])
        throw Error(ErrorKind::ModuleMismatch,
                    "graded and ungraded block counts disagree in degree " + std::to_string(i));
    }
  }

  for (const Bidegree b : supp) {
    int prev = 0;
    for (int p = 0; p < k; ++p) {
      const int f = filtered_dim(b, p);
      if (f - prev > 0) out.filtration_dims[{p, b.i, b.j}] = f - prev;
      prev = f;
    }
  }
  return out;
}

ModuleDecomp bigraded_homology(const FreeComplex& c) {
  const DSquaredReport sq = verify_d_squared(c);
  if (!sq.ok) throw Error(ErrorKind::DSquaredFailure, sq.message);
  return HomologyComputation(c).decomposition();
}

namespace {

BuildOptions options_for(const Diagram& d, int k, bool reduced, std::optional<int> basepoint,
                         bool force) {
  BuildOptions o;
  o.k = k;
  o.reduced = reduced;
  o.force = force;
  if (reduced) o.basepoint = basepoint.value_or(d.effective_basepoint());
  return o;
}

// Moves a chain between flattened complexes of one underlying complex at
// different truncation orders, sending (g, p) to (g, p + shift). Terms landing
// outside 0..k-1 raise LiftFailure when strict, and are dropped otherwise.
BitVec transfer(const FlatComplex& src, Bidegree sb, const BitVec& v, const FlatComplex& dst,
                Bidegree db, int shift, bool strict) {
  BitVec out(dst.block_dim(db));
  const auto cs = src.cells(sb);
  for (std::size_t x = v.first(); x < v.size(); ++x) {
    if (!v.test(x)) continue;
    const int p = cs[x].power + shift;
    const int idx = dst.local_index(db.i, cs[x].gen, p);
    if (idx < 0) {
      if (strict)
        throw Error(ErrorKind::LiftFailure,
                    "term u^" + std::to_string(cs[x].power) + " cannot be shifted by " +
                        std::to_string(shift));
      continue;
    }
    out.flip(idx);
  }
  return out;
}

F2Mat matrix_of(const HomologyComputation& target, Bidegree tb,
                const std::vector<BitVec>& images) {
  F2Mat m(target.dim(tb), static_cast<int>(images.size()));
  for (int c = 0; c < static_cast<int>(images.size()); ++c) {
    const BitVec coords = target.coordinates(tb, images[c]);
    for (std::size_t r = coords.first(); r < coords.size(); ++r)
      if (coords.test(r)) m.set(static_cast<int>(r), c);
  }
  return m;
}

struct Triangle {
  int a, b;
  HomologyComputation ha, hab, hb;

  Triangle(const FreeComplex& big, int a_, int b_)
      : a(a_), b(b_), ha(truncated(big, a_)), hab(big), hb(truncated(big, b_)) {}

  // H_{i,j}(C_a) -> H_{i,j-2b}(C_{a+b})
  F2Mat iota(Bidegree x) const {
    const Bidegree y{x.i, x.j - 2 * b};
    std::vector<BitVec> imgs;
    for (const auto& z : ha.representatives(x))
      imgs.push_back(transfer(ha.flat(), x, z, hab.flat(), y, b, true));
    return matrix_of(hab, y, imgs);
  }

  // H_{i,j}(C_{a+b}) -> H_{i,j}(C_b)
  F2Mat pi(Bidegree y) const {
    std::vector<BitVec> imgs;
    for (const auto& z : hab.representatives(y))
      imgs.push_back(transfer(hab.flat(), y, z, hb.flat(), y, 0, false));
    return matrix_of(hb, y, imgs);
  }

  // H_{i,j}(C_b) -> H_{i+1,j+2b}(C_a)
  F2Mat delta(Bidegree z) const {
    const Bidegree lifted_target{z.i + 1, z.j};
    const Bidegree x{z.i + 1, z.j + 2 * b};
    std::vector<BitVec> imgs;
    const F2Mat& d = hab.flat().differential(z);
    for (const auto& rep : hb.representatives(z)) {
      const BitVec lift = transfer(hb.flat(), z, rep, hab.flat(), z, 0, true);
      BitVec dl = d.rows() > 0 ? d.apply(lift) : BitVec(0);
      imgs.push_back(transfer(hab.flat(), lifted_target, dl, ha.flat(), x, -b, true));
    }
    return matrix_of(ha, x, imgs);
  }
};

}  // namespace

ModuleDecomp homology_of(const Diagram& d, int k, bool reduced, std::optional<int> basepoint,
                         bool force) {
  return bigraded_homology(build_complex(d, options_for(d, k, reduced, basepoint, force)));
}

std::map<Bidegree, F2Mat> connecting_map(const FreeComplex& big, int a, int b) {
  if (a < 1 || b < 1 || a + b != big.k)
    throw Error(ErrorKind::DimensionMismatch, "connecting map needs a, b >= 1 with a + b = k");
  const Triangle t(big, a, b);
  std::map<Bidegree, F2Mat> out;
  for (const Bidegree z : t.hb.support()) out.emplace(z, t.delta(z));
  return out;
}

TriangleReport verify_triangle(const FreeComplex& big, int a, int b) {
  if (a < 1 || b < 1 || a + b != big.k)
    throw Error(ErrorKind::DimensionMismatch, "triangle needs a, b >= 1 with a + b = k");
  const Triangle t(big, a, b);
  TriangleReport rep;
  rep.a = a;
  rep.b = b;
  for (const Bidegree x : t.ha.support()) rep.dim_a += t.ha.dim(x);
  for (const Bidegree x : t.hab.support()) rep.dim_ab += t.hab.dim(x);
  for (const Bidegree x : t.hb.support()) rep.dim_b += t.hb.dim(x);

  auto check = [&](const std::string& name, Bidegree at, int dim, const F2Mat& in,
                   const F2Mat& out) {
    TriangleNode node{name, at, dim, f2_rank(in).rank, f2_rank(out).rank, true};
    const bool composes_to_zero = in.cols() == 0 || out.rows() == 0 || (out * in).is_zero();
    node.exact = composes_to_zero && node.rank_in == dim - node.rank_out;
    if (!node.exact && rep.ok) {
      rep.ok = false;
      rep.message = "not exact at " + name + " " + to_string(at) + ": dim " +
                    std::to_string(dim) + ", incoming rank " + std::to_string(node.rank_in) +
                    ", outgoing rank " + std::to_string(node.rank_out);
    }
    rep.nodes.push_back(node);
  };

  const int sb = 2 * b;
  for (const Bidegree x : t.ha.support())
    check("H(C_a)", x, t.ha.dim(x), t.delta({x.i - 1, x.j - sb}), t.iota(x));
  for (const Bidegree y : t.hab.support())
    check("H(C_a+b)", y, t.hab.dim(y), t.iota({y.i, y.j + sb}), t.pi(y));
  for (const Bidegree z : t.hb.support())
    check("H(C_b)", z, t.hb.dim(z), t.pi(z), t.delta(z));
  return rep;
}

TriangleReport verify_triangle(const Diagram& d, bool reduced, std::optional<int> basepoint,
                               int a, int b) {
  const GradedComplex c = build_complex(d, options_for(d, a + b, reduced, basepoint, false));
  return verify_triangle(c.chains, a, b);
}

}  // namespace khbn
