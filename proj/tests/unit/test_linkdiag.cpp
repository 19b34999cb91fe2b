#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "khbn/linkdiag.hpp"
#include "support.hpp"

using namespace khbn;
using testsupport::error_kind_of;
using testsupport::named;
using testsupport::table;

namespace {

// Bracket state sum with its own union-find, for comparison with kauffman_jones.
LaurentPoly bracket_oracle(const Diagram& d) {
  const int n = d.crossing_count();
  const LaurentPoly loop = LaurentPoly::monomial(1) + LaurentPoly::monomial(-1);
  LaurentPoly sum;
  for (unsigned s = 0; s < (1u << n); ++s) {
    std::vector<int> parent(d.arc_count() + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    for (int c = 0; c < n; ++c) {
      const auto q = d.crossings()[c];
      if ((s >> c) & 1) {
        parent[root(q[0])] = root(q[3]);
        parent[root(q[1])] = root(q[2]);
      } else {
        parent[root(q[0])] = root(q[1]);
        parent[root(q[2])] = root(q[3]);
      }
    }
    int circles = 0;
    for (int a = 1; a <= d.arc_count(); ++a) circles += root(a) == a;
    LaurentPoly term = LaurentPoly::monomial(std::popcount(s), (std::popcount(s) % 2) ? -1 : 1);
    for (int c = 0; c < circles; ++c) term = term * loop;
    sum += term;
  }
  const int sign = d.n_minus() % 2 ? -1 : 1;
  return sum * LaurentPoly::monomial(d.n_plus() - 2 * d.n_minus(), sign);
}

Diagram relabeled(const Diagram& d, std::mt19937& rng) {
  std::vector<int> perm(d.arc_count() + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin() + 1, perm.end(), rng);
  std::vector<Quad> quads;
  for (auto q : d.crossings()) {
    for (int& a : q) a = perm[a];
    quads.push_back(q);
  }
  std::shuffle(quads.begin(), quads.end(), rng);
  return Diagram::from_quads(quads);
}

}  // namespace

TEST_CASE("parse the unknot literal") {
  const Diagram u = parse_pd("U");
  CHECK(u.crossing_count() == 0);
  CHECK(u.component_count() == 1);
  CHECK(u.n_plus() == 0);
  CHECK(u.n_minus() == 0);
  CHECK(u.is_unknot_literal());
}

TEST_CASE("one-kink unknot") {
  // X(1,4,2,3) uses four labels once each, which no one-crossing diagram can.
  CHECK(error_kind_of([] { parse_pd("PD[X(1,4,2,3)]"); }) == ErrorKind::ArcMultiplicity);
  const Diagram kink = parse_pd("PD[X(1,2,2,1)]");
  CHECK(kink.crossing_count() == 1);
  CHECK(kink.component_count() == 1);
  const int c0 = resolve(kink, StateMask{0}).circle_count();
  const int c1 = resolve(kink, StateMask{1}).circle_count();
  CHECK(std::abs(c0 - c1) == 1);
  CHECK(std::set<int>{c0, c1} == std::set<int>{1, 2});
}

TEST_CASE("parse errors") {
  CHECK(error_kind_of([] { parse_pd("PD[X(1,2,2,1)"); }) == ErrorKind::MalformedSyntax);
  CHECK(error_kind_of([] { parse_pd("X(1,2,2,1)"); }) == ErrorKind::MalformedSyntax);
  CHECK(error_kind_of([] { parse_pd("PD[X(1,2,2)]"); }) == ErrorKind::MalformedSyntax);
  CHECK(error_kind_of([] { parse_pd("PD[X(1,1,1,1)]"); }) == ErrorKind::ArcMultiplicity);
  // the cyclic-order version of the trefoil is not a planar orientation
  CHECK(error_kind_of([] { parse_pd("PD[X(1,4,2,3), X(3,6,4,5), X(5,2,6,1)]"); }) ==
        ErrorKind::NonPlanarOrInconsistentOrientation);
}

TEST_CASE("labels are renumbered preserving order") {
  const Diagram a = parse_pd("PD[X(10,20,20,10)]");
  CHECK(a == parse_pd("PD[X(1,2,2,1)]"));
}

TEST_CASE("trefoil chirality and bracket") {
  const Diagram r = named("trefoil_R");
  const Diagram l = named("trefoil_L");
  CHECK(r.writhe() == 3);
  CHECK(l.writhe() == -3);
  CHECK(r.component_count() == 1);
  // 8-state expansion of the right trefoil by hand: q + q^3 + q^5 - q^9
  LaurentPoly expected;
  expected.add_term(1, 1);
  expected.add_term(3, 1);
  expected.add_term(5, 1);
  expected.add_term(9, -1);
  CHECK(kauffman_jones(r) == expected);
  CHECK(kauffman_jones(r) == bracket_oracle(r));
  CHECK(kauffman_jones(l) == expected.reflected());
}

TEST_CASE("kauffman_jones small cases") {
  const LaurentPoly loop = LaurentPoly::monomial(1) + LaurentPoly::monomial(-1);
  CHECK(kauffman_jones(Diagram::unknot()) == loop);
  // the closure of s1 s1^-1 is a split two-component unlink
  const std::vector<int> w{1, -1};
  const Diagram unlink = from_braid(w, 2);
  CHECK(unlink.component_count() == 2);
  CHECK(kauffman_jones(unlink) == loop * loop);
}

TEST_CASE("kauffman_jones matches the bracket oracle on the table") {
  for (const auto& e : table()) {
    if (e.diagram.crossing_count() > 9) continue;
    INFO(e.name);
    CHECK(kauffman_jones(e.diagram) == bracket_oracle(e.diagram));
  }
}

TEST_CASE("from_braid") {
  const std::vector<int> trefoil{1, 1, 1};
  const Diagram t = from_braid(trefoil, 2);
  CHECK(t.crossing_count() == 3);
  CHECK(t.component_count() == 1);
  CHECK(kauffman_jones(t) == kauffman_jones(named("trefoil_R")));

  const std::vector<int> hopf{1, 1};
  CHECK(from_braid(hopf, 2).component_count() == 2);

  const std::vector<int> empty;
  CHECK(from_braid(empty, 1).is_unknot_literal());
  CHECK(error_kind_of([&] { from_braid(empty, 2); }) == ErrorKind::EmptyWord);
  const std::vector<int> bad{1, 3};
  CHECK(error_kind_of([&] { from_braid(bad, 3); }) == ErrorKind::LetterOutOfRange);
  const std::vector<int> zero{0};
  CHECK(error_kind_of([&] { from_braid(zero, 2); }) == ErrorKind::LetterOutOfRange);
}

TEST_CASE("resolve") {
  const Diagram u = Diagram::unknot();
  CHECK(resolve(u, StateMask{0}).circle_count() == 1);
  CHECK(resolve(u, std::vector<bool>{}).circle_count() == 1);
  const Diagram t = named("trefoil_L");
  CHECK(error_kind_of([&] { resolve(t, std::vector<bool>{false, true}); }) ==
        ErrorKind::StateLengthMismatch);
  const int all0 = resolve(t, StateMask{0}).circle_count();
  const int all1 = resolve(t, StateMask{7}).circle_count();
  // three single flips, each changing the count by one
  CHECK((all0 - all1) % 2 != 0);
  const auto r = resolve(t, std::vector<bool>{true, false, true});
  CHECK(r.state == 5);
}

TEST_CASE("circles partition the arcs and ids are minimal labels") {
  for (const auto& e : table()) {
    const Diagram& d = e.diagram;
    if (d.crossing_count() > 7) continue;
    for (StateMask s = 0; s < (StateMask{1} << d.crossing_count()); ++s) {
      const auto r = resolve(d, s);
      std::vector<int> seen;
      for (int c = 0; c < r.circle_count(); ++c) {
        REQUIRE(r.circle_ids[c] == r.circles[c].front());
        for (int a : r.circles[c]) {
          seen.push_back(a);
          REQUIRE(r.circle_of_arc[a] == c);
        }
      }
      std::sort(seen.begin(), seen.end());
      std::vector<int> all(d.arc_count());
      std::iota(all.begin(), all.end(), 1);
      REQUIRE(seen == all);
      REQUIRE(std::is_sorted(r.circle_ids.begin(), r.circle_ids.end()));
    }
  }
}

TEST_CASE("single bit flips change the circle count by one") {
  for (const auto& e : table()) {
    const Diagram& d = e.diagram;
    const int n = d.crossing_count();
    if (n > 8) continue;
    for (StateMask s = 0; s < (StateMask{1} << n); ++s) {
      const int c = resolve(d, s).circle_count();
      for (int x = 0; x < n; ++x) {
        if ((s >> x) & 1) continue;
        const auto t = edge_transition(d, s, x);
        const int c2 = resolve(d, s | (StateMask{1} << x)).circle_count();
        REQUIRE(std::abs(c - c2) == 1);
        REQUIRE(t.is_merge() == (c2 < c));
        REQUIRE(static_cast<int>(t.bystander_map.size()) == (t.is_merge() ? c - 2 : c - 1));
      }
    }
  }
}

TEST_CASE("edge_transition") {
  const Diagram t = named("trefoil_L");
  const auto e = edge_transition(t, 0, 0);
  CHECK(e.is_merge() ==
        (resolve(t, StateMask{0}).circle_count() > resolve(t, StateMask{1}).circle_count()));
  CHECK(e.from_state == 0);
  CHECK(e.to_state == 1);
  CHECK(error_kind_of([&] { edge_transition(t, 1, 0); }) == ErrorKind::CrossingAlreadyOne);

  const Diagram hopf = named("hopf");
  for (int x = 0; x < 2; ++x) {
    const auto h = edge_transition(hopf, 0, x);
    const auto from = resolve(hopf, StateMask{0});
    const auto to = resolve(hopf, StateMask{1} << x);
    CHECK(h.is_merge() == (to.circle_count() < from.circle_count()));
    // bystanders keep their member arcs
    std::set<int> src;
    std::set<int> dst;
    for (auto [a, b] : h.bystander_map) {
      src.insert(a);
      dst.insert(b);
      const auto& arcs = from.circles[from.circle_index(a)];
      CHECK(to.circles[to.circle_index(b)] == arcs);
    }
    CHECK(src.size() == h.bystander_map.size());
    CHECK(dst.size() == h.bystander_map.size());
  }
}

TEST_CASE("mirror") {
  CHECK(mirror(Diagram::unknot()) == Diagram::unknot());
  for (const auto& e : table()) {
    INFO(e.name);
    const Diagram m = mirror(e.diagram);
    CHECK(mirror(m) == e.diagram);
    CHECK(m.writhe() == -e.diagram.writhe());
    CHECK(m.n_plus() == e.diagram.n_minus());
    if (e.diagram.crossing_count() <= 8)
      CHECK(kauffman_jones(m) == kauffman_jones(e.diagram).reflected());
  }
  CHECK(mirror(named("trefoil_L")).writhe() == 3);
}

TEST_CASE("render round trip and canonical form") {
  std::mt19937 rng(7);
  for (const auto& e : table()) {
    INFO(e.name);
    const Diagram& d = e.diagram;
    CHECK(parse_pd(render_pd(d)) == d.with_basepoint(std::nullopt));
    if (d.is_unknot_literal()) continue;
    for (int trial = 0; trial < 3; ++trial) {
      const Diagram r = relabeled(d, rng);
      CHECK(canonical_form(r) == canonical_form(d));
      CHECK(diagram_hash(r) == diagram_hash(d));
    }
  }
  CHECK(canonical_form(named("trefoil_L")) != canonical_form(named("trefoil_R")));
}

TEST_CASE("Reidemeister partners share the Jones polynomial") {
  int pairs = 0;
  for (const auto& e : table()) {
    const auto at = e.name.find('@');
    if (at == std::string::npos) continue;
    const std::string base = e.name.substr(0, at);
    INFO(e.name);
    CHECK(kauffman_jones(e.diagram) == kauffman_jones(named(base)));
    ++pairs;
  }
  CHECK(pairs >= 20);
}

TEST_CASE("link table parsing") {
  std::istringstream in(
      "# comment\n"
      "\n"
      "a\tU\t1\n"
      "h\tPD[X(3,2,4,1), X(1,4,2,3)]\t2\n");
  const auto t = parse_link_table(in);
  REQUIRE(t.size() == 2);
  CHECK(t[1].components == 2);
  CHECK(t[1].diagram.component_count() == 2);
  CHECK(find_entry(t, "a") != nullptr);
  CHECK(find_entry(t, "zz") == nullptr);

  for (const auto& e : table()) {
    INFO(e.name);
    CHECK(e.components == e.diagram.component_count());
  }
  CHECK(table().size() > 100);
}

TEST_CASE("basepoint validation") {
  const Diagram t = named("trefoil_L");
  CHECK(t.effective_basepoint() == 1);
  CHECK(t.with_basepoint(4).effective_basepoint() == 4);
  CHECK(error_kind_of([&] { t.with_basepoint(7); }) == ErrorKind::InvalidBasepoint);
  CHECK(error_kind_of([&] { t.with_basepoint(0); }) == ErrorKind::InvalidBasepoint);
}
