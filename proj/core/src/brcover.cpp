#include "khbn/brcover.hpp"

#include <algorithm>
#include <bit>

namespace khbn {

namespace {

std::uint64_t bit(int idx) { return std::uint64_t{1} << idx; }

void check_states(const EdgeTransition& t, const VertexGroup& from, const VertexGroup& to) {
  if (t.from_state != from.state || t.to_state != to.state)
    throw Error(ErrorKind::StateMismatch, "edge states do not match the vertex groups");
}

int require_gamma(const VertexGroup& v, int id) {
  const int g = v.gamma_index(id);
  if (g < 0)
    throw Error(ErrorKind::UnclassifiedEdge,
                "circle " + std::to_string(id) + " is not a non-pointed circle of state " +
                    std::to_string(v.state));
  return g;
}

// Bystander classes of `mono` moved to the target numbering.
std::uint64_t transport(const EdgeTransition& t, const VertexGroup& from, const VertexGroup& to,
                        std::uint64_t mono) {
  std::uint64_t out = 0;
  for (const auto& [src, dst] : t.bystander_map) {
    const int s = from.gamma_index(src);
    if (s < 0) continue;
    if (mono & bit(s)) out |= bit(require_gamma(to, dst));
  }
  return out;
}

// The split target that is not pointed, for a pointed split.
int new_circle(const Split& s, const VertexGroup& to) {
  const bool a = s.dst_a == to.pointed;
  const bool b = s.dst_b == to.pointed;
  if (a == b) throw Error(ErrorKind::UnclassifiedEdge, "pointed split must keep one pointed circle");
  return a ? s.dst_b : s.dst_a;
}

}  // namespace

int VertexGroup::gamma_index(int id) const {
  auto it = std::lower_bound(nonpointed_circles.begin(), nonpointed_circles.end(), id);
  if (it == nonpointed_circles.end() || *it != id) return -1;
  return static_cast<int>(it - nonpointed_circles.begin());
}

VertexGroup vertex_group(const Resolution& r) {
  VertexGroup v;
  v.state = r.state;
  v.pointed = r.circle_ids.at(r.pointed_circle);
  v.circle_count = r.circle_count();
  for (int id : r.circle_ids)
    if (id != v.pointed) v.nonpointed_circles.push_back(id);
  return v;
}

int e1_quantum(const VertexGroup& v, std::uint64_t monomial) {
  return v.circle_count - 2 * std::popcount(monomial) + std::popcount(v.state);
}

EdgeCase classify_edge(const EdgeTransition& t, const VertexGroup& from) {
  if (t.from_state != from.state)
    throw Error(ErrorKind::StateMismatch, "edge source differs from the vertex group");
  if (const auto* m = std::get_if<Merge>(&t.kind)) {
    if (m->src_a == m->src_b) throw Error(ErrorKind::UnclassifiedEdge, "merge of a circle with itself");
    return (m->src_a == from.pointed || m->src_b == from.pointed) ? EdgeCase::M2 : EdgeCase::M1;
  }
  return std::get<Split>(t.kind).src == from.pointed ? EdgeCase::S2 : EdgeCase::S1;
}

SparseMat edge_map_brcover(const EdgeTransition& t, const VertexGroup& from, const VertexGroup& to) {
  check_states(t, from, to);
  const RingElem one = RingElem::one(2);
  const RingElem q = RingElem::u_power(2, 1);
  SparseMat m(to.rank(), from.rank(), 2);
  const EdgeCase kind = classify_edge(t, from);

  for (std::uint64_t mono = 0; mono < static_cast<std::uint64_t>(from.rank()); ++mono) {
    const std::uint64_t rest = transport(t, from, to, mono);
    const int col = static_cast<int>(mono);
    switch (kind) {
      case EdgeCase::M1: {
        const auto& mg = std::get<Merge>(t.kind);
        const bool ha = mono & bit(require_gamma(from, mg.src_a));
        const bool hb = mono & bit(require_gamma(from, mg.src_b));
        const std::uint64_t gc = bit(require_gamma(to, mg.dst));
        if (!ha && !hb)
          m.add(static_cast<int>(rest), col, one);
        else if (ha != hb)
          m.add(static_cast<int>(rest | gc), col, one);
        else
          m.add(static_cast<int>(rest | gc), col, q);
        break;
      }
      case EdgeCase::M2: {
        const auto& mg = std::get<Merge>(t.kind);
        if (mg.dst != to.pointed)
          throw Error(ErrorKind::UnclassifiedEdge, "merge with the pointed circle must stay pointed");
        const int other = mg.src_a == from.pointed ? mg.src_b : mg.src_a;
        if (!(mono & bit(require_gamma(from, other)))) m.add(static_cast<int>(rest), col, one);
        break;
      }
      case EdgeCase::S1: {
        const auto& sp = std::get<Split>(t.kind);
        const bool ha = mono & bit(require_gamma(from, sp.src));
        const std::uint64_t da = bit(require_gamma(to, sp.dst_a));
        const std::uint64_t db = bit(require_gamma(to, sp.dst_b));
        if (ha) {
          m.add(static_cast<int>(rest | da | db), col, one);
        } else {
          m.add(static_cast<int>(rest | da), col, one);
          m.add(static_cast<int>(rest | db), col, one);
          m.add(static_cast<int>(rest), col, q);
        }
        break;
      }
      case EdgeCase::S2: {
        const auto& sp = std::get<Split>(t.kind);
        const std::uint64_t gn = bit(require_gamma(to, new_circle(sp, to)));
        m.add(static_cast<int>(rest | gn), col, one);
        m.add(static_cast<int>(rest), col, q);
        break;
      }
    }
  }
  return m;
}

SparseMat raw_split_map(const EdgeTransition& t, const VertexGroup& from, const VertexGroup& to) {
  check_states(t, from, to);
  const auto* sp = std::get_if<Split>(&t.kind);
  if (!sp) throw Error(ErrorKind::UnclassifiedEdge, "raw split map requested for a merge");
  const bool pointed = classify_edge(t, from) == EdgeCase::S2;
  const int gamma_new = require_gamma(to, pointed ? new_circle(*sp, to) : sp->dst_b);
  SparseMat m(to.rank(), from.rank(), 2);
  for (std::uint64_t mono = 0; mono < static_cast<std::uint64_t>(from.rank()); ++mono) {
    std::uint64_t img = transport(t, from, to, mono) | bit(gamma_new);
    if (!pointed && (mono & bit(require_gamma(from, sp->src))))
      img |= bit(require_gamma(to, sp->dst_a));
    m.add(static_cast<int>(img), static_cast<int>(mono), RingElem::one(2));
  }
  return m;
}

SparseMat split_change_of_basis(const EdgeTransition& t, const VertexGroup& from,
                                const VertexGroup& to) {
  check_states(t, from, to);
  const auto* sp = std::get_if<Split>(&t.kind);
  if (!sp) throw Error(ErrorKind::UnclassifiedEdge, "change of basis requested for a merge");
  const bool pointed = classify_edge(t, from) == EdgeCase::S2;
  const RingElem one = RingElem::one(2);
  const RingElem q = RingElem::u_power(2, 1);
  SparseMat m(to.rank(), to.rank(), 2);
  const std::uint64_t gn = bit(require_gamma(to, pointed ? new_circle(*sp, to) : sp->dst_b));
  const std::uint64_t ga = pointed ? 0 : bit(require_gamma(to, sp->dst_a));
  for (std::uint64_t mono = 0; mono < static_cast<std::uint64_t>(to.rank()); ++mono) {
    const int col = static_cast<int>(mono);
    m.add(col, col, one);
    if (!(mono & gn) || (mono & ga)) continue;
    const std::uint64_t base = mono & ~gn;
    if (!pointed) m.add(static_cast<int>(base | ga), col, one);
    m.add(static_cast<int>(base), col, q);
  }
  return m;
}

E1Complex build_e1_complex(const Diagram& d, int basepoint, bool force) {
  const int n = d.crossing_count();
  if (n > kCrossingLimit && !force)
    throw Error(ErrorKind::ResourceLimit, std::to_string(n) + " crossings exceeds the limit of " +
                                              std::to_string(kCrossingLimit));
  const Diagram diag = d.with_basepoint(basepoint);
  E1Complex e;
  e.crossings = n;
  e.basepoint = basepoint;
  e.total.k = 2;
  const StateMask states = StateMask{1} << n;
  std::vector<Resolution> res;
  res.reserve(states);
  e.offset.assign(states, 0);
  for (int i = 0; i <= n; ++i) {
    e.total.quantum[i];
    e.basis[i];
  }
  for (StateMask s = 0; s < states; ++s) {
    res.push_back(resolve(diag, s));
    e.vertices.push_back(vertex_group(res.back()));
    const VertexGroup& v = e.vertices.back();
    const int deg = std::popcount(s);
    e.offset[s] = static_cast<int>(e.basis[deg].size());
    for (std::uint64_t mono = 0; mono < static_cast<std::uint64_t>(v.rank()); ++mono) {
      e.basis[deg].emplace_back(s, mono);
      e.total.quantum[deg].push_back(e1_quantum(v, mono));
    }
  }
  for (int i = 0; i < n; ++i)
    e.total.differential.emplace(i, SparseMat(e.total.dim(i + 1), e.total.dim(i), 2));

  for (StateMask s = 0; s < states; ++s)
    for (int c = 0; c < n; ++c) {
      if ((s >> c) & 1U) continue;
      const StateMask t = s | (StateMask{1} << c);
      const EdgeTransition tr = edge_transition(diag, res[s], res[t], c);
      SparseMat m = edge_map_brcover(tr, e.vertices[s], e.vertices[t]);
      auto& total = e.total.differential.at(std::popcount(s));
      for (int r = 0; r < m.rows(); ++r)
        for (const auto& entry : m.row(r))
          total.add(e.offset[t] + r, e.offset[s] + entry.col, RingElem(2, entry.bits));
      e.edges.emplace(std::make_pair(s, c), std::move(m));
    }

  const DSquaredReport sq = verify_d_squared(e.total);
  if (!sq.ok) throw Error(ErrorKind::DSquaredFailure, "E1 differential: " + sq.message);
  return e;
}

PhiImage phi(const VertexGroup& v, const Resolution& r, std::uint64_t monomial, int q_power) {
  if (r.state != v.state || r.circle_ids.at(r.pointed_circle) != v.pointed ||
      r.circle_count() != v.circle_count)
    throw Error(ErrorKind::StateMismatch, "resolution does not match the vertex group");
  if (monomial >= static_cast<std::uint64_t>(v.rank()))
    throw Error(ErrorKind::DimensionMismatch, "monomial outside the vertex group");
  PhiImage img;
  img.generator.state = v.state;
  img.u_power = q_power;
  for (std::size_t t = 0; t < v.nonpointed_circles.size(); ++t)
    if (monomial & bit(static_cast<int>(t)))
      img.generator.minus_mask |= bit(r.circle_index(v.nonpointed_circles[t]));
  return img;
}

TheoremReport verify_theorem_main(const Diagram& d, int basepoint) {
  TheoremReport rep;
  const Diagram diag = d.with_basepoint(basepoint);
  const E1Complex e1 = build_e1_complex(diag, basepoint);
  BuildOptions opts;
  opts.k = 2;
  opts.reduced = true;
  opts.basepoint = basepoint;
  const GradedComplex bn = build_complex(diag, opts);
  const int n = diag.crossing_count();
  const StateMask states = StateMask{1} << n;

  std::vector<Resolution> res;
  res.reserve(states);
  for (StateMask s = 0; s < states; ++s) res.push_back(resolve(diag, s));

  auto fail_edge = [&](StateMask s, int c, const std::string& why) {
    if (!rep.chain_map_ok) return;
    rep.ok = rep.chain_map_ok = false;
    rep.failure = ErrorKind::ChainMapFailure;
    rep.edge = std::make_pair(s, c);
    rep.message = "edge from state " + std::to_string(s) + " at crossing " + std::to_string(c) +
                  ": " + why;
  };

  // Edge by edge: phi(d1 x) against the Bar-Natan edge map applied to phi(x).
  for (StateMask s = 0; s < states && rep.chain_map_ok; ++s)
    for (int c = 0; c < n && rep.chain_map_ok; ++c) {
      if ((s >> c) & 1U) continue;
      const StateMask t = s | (StateMask{1} << c);
      const EdgeTransition tr = edge_transition(diag, res[s], res[t], c);
      const VertexGroup& vf = e1.vertices[s];
      const VertexGroup& vt = e1.vertices[t];
      const SparseMat& m = e1.edges.at({s, c});
      std::vector<std::map<std::uint64_t, std::uint64_t>> via_e1(vf.rank());
      for (int r = 0; r < m.rows(); ++r)
        for (const auto& entry : m.row(r)) {
          const PhiImage img = phi(vt, res[t], static_cast<std::uint64_t>(r), 0);
          via_e1[entry.col][img.generator.minus_mask] ^= entry.bits;
        }
      for (std::uint64_t mono = 0; mono < static_cast<std::uint64_t>(vf.rank()); ++mono) {
        const PhiImage src = phi(vf, res[s], mono, 0);
        std::map<std::uint64_t, std::uint64_t> via_bn;
        for (const auto& term : apply_edge_map(tr, res[s], res[t], src.generator.minus_mask, 2)) {
          if ((term.minus_mask >> res[t].pointed_circle) & 1U) continue;
          via_bn[term.minus_mask] ^= term.coeff.bits();
        }
        std::erase_if(via_bn, [](const auto& kv) { return kv.second == 0; });
        auto& lhs = via_e1[mono];
        std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
        if (lhs != via_bn) {
          fail_edge(s, c, "phi does not intertwine the differentials on monomial " +
                              std::to_string(mono));
          break;
        }
      }
    }

  // Assembled matrices, entry by entry through phi.
  for (const auto& [deg, m] : e1.total.differential) {
    if (!rep.chain_map_ok) break;
    const int bdeg = deg - diag.n_minus();
    const SparseMat* bm = bn.chains.d(bdeg);
    std::size_t seen = 0;
    for (int r = 0; r < m.rows() && rep.chain_map_ok; ++r)
      for (const auto& entry : m.row(r)) {
        const auto [rs, rmono] = e1.basis.at(deg + 1)[r];
        const auto [cs, cmono] = e1.basis.at(deg)[entry.col];
        const auto row = bn.index_of(bdeg + 1, phi(e1.vertices[rs], res[rs], rmono, 0).generator);
        const auto col = bn.index_of(bdeg, phi(e1.vertices[cs], res[cs], cmono, 0).generator);
        if (!row || !col || !bm || bm->get(*row, *col).bits() != entry.bits) {
          fail_edge(cs, std::countr_zero(rs ^ cs), "assembled differentials differ");
          break;
        }
        ++seen;
      }
    if (rep.chain_map_ok && (!bm ? seen != 0 : seen != bm->nonzeros()))
      fail_edge(0, 0, "Bar-Natan differential in degree " + std::to_string(bdeg) +
                          " has entries outside the image of phi");
  }

  rep.e1_homology = shifted(bigraded_homology(e1.total), -diag.n_minus(),
                            diag.n_plus() - 2 * diag.n_minus());
  rep.bn_homology = bigraded_homology(bn);
  if (!(rep.e1_homology == rep.bn_homology)) {
    rep.ok = false;
    rep.module_ok = false;
    if (!rep.failure) rep.failure = ErrorKind::ModuleMismatch;
    std::map<Bidegree, BidegreeHomology> all = rep.e1_homology.groups;
    for (const auto& [b, h] : rep.bn_homology.groups) all.emplace(b, h);
    for (const auto& [b, h] : all) {
      auto a = rep.e1_homology.groups.find(b);
      auto c = rep.bn_homology.groups.find(b);
      if (a == rep.e1_homology.groups.end() || c == rep.bn_homology.groups.end() ||
          !(a->second == c->second)) {
        rep.bidegree = b;
        break;
      }
    }
    if (rep.message.empty())
      rep.message = "homology modules differ at " +
                    (rep.bidegree ? to_string(*rep.bidegree) : std::string("?"));
  }
  return rep;
}

}  // namespace khbn
