#include "khbn/khcube.hpp"

#include <algorithm>
#include <bit>

#include "khbn/errors.hpp"

namespace khbn {

int FreeComplex::dim(int i) const {
  auto it = quantum.find(i);
  return it == quantum.end() ? 0 : static_cast<int>(it->second.size());
}

const SparseMat* FreeComplex::d(int i) const {
  auto it = differential.find(i);
  return it == differential.end() ? nullptr : &it->second;
}

FreeComplex truncated(const FreeComplex& c, int k) {
  if (k < 1 || k > c.k)
    throw Error(ErrorKind::DimensionMismatch,
                "cannot truncate order " + std::to_string(c.k) + " to " + std::to_string(k));
  FreeComplex out;
  out.k = k;
  out.quantum = c.quantum;
  for (const auto& [i, m] : c.differential) {
    SparseMat t(m.rows(), m.cols(), k);
    for (int r = 0; r < m.rows(); ++r)
      for (const auto& e : m.row(r)) t.add(r, e.col, RingElem(k, e.bits));
    out.differential.emplace(i, std::move(t));
  }
  return out;
}

std::optional<int> GradedComplex::index_of(int degree, const Generator& g) const {
  auto it = generators.find(degree);
  if (it == generators.end()) return std::nullopt;
  const auto& v = it->second;
  auto pos = std::lower_bound(v.begin(), v.end(), g, [](const Generator& a, const Generator& b) {
    return a.state != b.state ? a.state < b.state : a.minus_mask < b.minus_mask;
  });
  if (pos == v.end() || !(*pos == g)) return std::nullopt;
  return static_cast<int>(pos - v.begin());
}

std::vector<MergeTerm> merge_map(bool a_minus, bool b_minus, int k) {
  if (a_minus && b_minus) {
    if (k < 2) return {};
    return {{true, RingElem::u_power(k, 1)}};
  }
  return {{a_minus || b_minus, RingElem::one(k)}};
}

std::vector<SplitTerm> split_map(bool minus, int k) {
  if (minus) return {{true, true, RingElem::one(k)}};
  std::vector<SplitTerm> out{{false, true, RingElem::one(k)}, {true, false, RingElem::one(k)}};
  if (k >= 2) out.push_back({false, false, RingElem::u_power(k, 1)});
  return out;
}

std::vector<LabelTerm> apply_edge_map(const EdgeTransition& t, const Resolution& from,
                                      const Resolution& to, std::uint64_t minus_mask, int k) {
  auto bit = [](int idx) { return std::uint64_t{1} << idx; };
  std::uint64_t carried = 0;
  for (const auto& [src, dst] : t.bystander_map) {
    const int si = from.circle_index(src);
    if (minus_mask & bit(si)) carried |= bit(to.circle_index(dst));
  }
  std::vector<LabelTerm> out;
  if (const auto* m = std::get_if<Merge>(&t.kind)) {
    const bool a = minus_mask & bit(from.circle_index(m->src_a));
    const bool b = minus_mask & bit(from.circle_index(m->src_b));
    const std::uint64_t dst = bit(to.circle_index(m->dst));
    for (const auto& term : merge_map(a, b, k))
      out.push_back({carried | (term.minus ? dst : 0), term.coeff});
  } else {
    const auto& s = std::get<Split>(t.kind);
    const bool x = minus_mask & bit(from.circle_index(s.src));
    const std::uint64_t da = bit(to.circle_index(s.dst_a));
    const std::uint64_t db = bit(to.circle_index(s.dst_b));
    for (const auto& term : split_map(x, k))
      out.push_back(
          {carried | (term.minus_a ? da : 0) | (term.minus_b ? db : 0), term.coeff});
  }
  return out;
}

int generator_quantum(int circles, std::uint64_t minus_mask, StateMask state, int n_plus,
                      int n_minus) {
  const int minus = std::popcount(minus_mask);
  return (circles - 2 * minus) + std::popcount(state) + n_plus - 2 * n_minus;
}

namespace {

// Index of a labeling among the labelings of its state that survive in the
// complex. In the reduced complex the pointed bit is always clear and is
// squeezed out.
std::uint64_t compact(std::uint64_t mask, int pointed) {
  if (pointed < 0) return mask;
  const std::uint64_t low = mask & ((std::uint64_t{1} << pointed) - 1);
  return low | ((mask >> (pointed + 1)) << pointed);
}

}  // namespace

GradedComplex build_complex(const Diagram& d, const BuildOptions& opts) {
  if (opts.k < 1 || opts.k > kMaxOrder)
    throw Error(ErrorKind::DimensionMismatch, "order k must be in 1.." + std::to_string(kMaxOrder));
  const int n = d.crossing_count();
  if (n > kCrossingLimit && !opts.force)
    throw Error(ErrorKind::ResourceLimit, std::to_string(n) + " crossings exceeds the limit of " +
                                              std::to_string(kCrossingLimit));
  if (opts.reduced && !opts.basepoint)
    throw Error(ErrorKind::BasepointMissing, "reduced complex needs a basepoint");

  const Diagram diag = opts.reduced ? d.with_basepoint(opts.basepoint) : d;
  const int k = opts.k;

  GradedComplex gc;
  gc.reduced = opts.reduced;
  gc.basepoint = opts.reduced ? opts.basepoint : std::nullopt;
  gc.crossings = n;
  gc.n_plus = diag.n_plus();
  gc.n_minus = diag.n_minus();
  gc.chains.k = k;

  const StateMask states = StateMask{1} << n;
  std::vector<Resolution> res;
  res.reserve(states);
  for (StateMask s = 0; s < states; ++s) res.push_back(resolve(diag, s));

  // offset of each state's block within its homological degree
  std::vector<int> offset(states, 0);
  for (int i = -gc.n_minus; i <= n - gc.n_minus; ++i) {
    gc.chains.quantum[i];
    gc.generators[i];
  }
  for (StateMask s = 0; s < states; ++s) {
    const Resolution& r = res[s];
    const int deg = std::popcount(s) - gc.n_minus;
    auto& gens = gc.generators[deg];
    auto& qs = gc.chains.quantum[deg];
    offset[s] = static_cast<int>(gens.size());
    const std::uint64_t count = std::uint64_t{1} << r.circle_count();
    for (std::uint64_t m = 0; m < count; ++m) {
      if (opts.reduced && ((m >> r.pointed_circle) & 1U)) continue;
      gens.push_back({s, m});
      qs.push_back(generator_quantum(r.circle_count(), m, s, gc.n_plus, gc.n_minus));
    }
  }
  for (int i = -gc.n_minus; i < n - gc.n_minus; ++i)
    gc.chains.differential.emplace(
        i, SparseMat(gc.chains.dim(i + 1), gc.chains.dim(i), k));

  for (StateMask s = 0; s < states; ++s) {
    const Resolution& from = res[s];
    const int deg = std::popcount(s) - gc.n_minus;
    if (std::popcount(s) == n) continue;
    auto& mat = gc.chains.differential.at(deg);
    const int pf = opts.reduced ? from.pointed_circle : -1;
    const std::uint64_t count = std::uint64_t{1} << from.circle_count();
    for (int c = 0; c < n; ++c) {
      if ((s >> c) & 1U) continue;
      const StateMask t = s | (StateMask{1} << c);
      const Resolution& to = res[t];
      const EdgeTransition tr = edge_transition(diag, from, to, c);
      const int pt = opts.reduced ? to.pointed_circle : -1;
      for (std::uint64_t m = 0; m < count; ++m) {
        const bool killed = pf >= 0 && ((m >> pf) & 1U);
        for (const auto& term : apply_edge_map(tr, from, to, m, k)) {
          const bool target_killed = pt >= 0 && ((term.minus_mask >> pt) & 1U);
          if (killed) {
            if (!target_killed)
              throw Error(ErrorKind::SubcomplexViolation,
                          "edge at crossing " + std::to_string(c) + " from state " +
                              std::to_string(s) + " leaves the v- subcomplex");
            continue;
          }
          if (target_killed) continue;
          const int row = offset[t] + static_cast<int>(compact(term.minus_mask, pt));
          const int col = offset[s] + static_cast<int>(compact(m, pf));
          mat.add(row, col, term.coeff);
        }
      }
    }
  }

  const DSquaredReport sq = verify_d_squared(gc.chains);
  if (!sq.ok) throw Error(ErrorKind::DSquaredFailure, sq.message);
  return gc;
}

DSquaredReport verify_d_squared(const FreeComplex& c) {
  DSquaredReport rep;
  for (const auto& [i, d0] : c.differential) {
    const SparseMat* d1 = c.d(i + 1);
    if (!d1) continue;
    const SparseMat sq = *d1 * d0;
    for (int r = 0; r < sq.rows(); ++r) {
      const auto row = sq.row(r);
      if (row.empty()) continue;
      const int col = row.front().col;
      const int q = c.quantum.at(i).at(col);
      rep.ok = false;
      rep.bidegree = std::make_pair(i, q);
      rep.message = "d^2 nonzero from degree " + std::to_string(i) + ", generator " +
                    std::to_string(col) + " at quantum " + std::to_string(q) + " (entry " +
                    RingElem(c.k, row.front().bits).to_string() + ")";
      return rep;
    }
  }
  return rep;
}

DSquaredReport verify_quantum_homogeneity(const FreeComplex& c) {
  DSquaredReport rep;
  for (const auto& [i, m] : c.differential) {
    const auto& qs = c.quantum.at(i);
    const auto& qt = c.quantum.at(i + 1);
    for (int r = 0; r < m.rows(); ++r)
      for (const auto& e : m.row(r))
        for (std::uint64_t bits = e.bits; bits; bits &= bits - 1) {
          const int p = std::countr_zero(bits);
          if (qt[r] - 2 * p == qs[e.col]) continue;
          rep.ok = false;
          rep.bidegree = std::make_pair(i, qs[e.col]);
          rep.message = "entry u^" + std::to_string(p) + " from generator " +
                        std::to_string(e.col) + " in degree " + std::to_string(i) +
                        " changes quantum degree";
          return rep;
        }
  }
  return rep;
}

}  // namespace khbn
