#include "khbn/linkdiag.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <deque>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "khbn/errors.hpp"

namespace khbn {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

struct Slot {
  int crossing;
  int slot;
};

// For each label 1..2n, its two occurrences.
std::vector<std::array<Slot, 2>> occurrences(const std::vector<Quad>& quads) {
  const int arcs = 2 * static_cast<int>(quads.size());
  std::vector<std::array<Slot, 2>> occ(arcs + 1);
  std::vector<int> seen(arcs + 1, 0);
  for (int i = 0; i < static_cast<int>(quads.size()); ++i) {
    for (int s = 0; s < 4; ++s) {
      const int label = quads[i][s];
      if (label < 1 || label > arcs)
        throw Error(ErrorKind::ArcMultiplicity,
                    "arc label " + std::to_string(label) + " outside 1.." + std::to_string(arcs));
      if (seen[label] == 2)
        throw Error(ErrorKind::ArcMultiplicity,
                    "arc label " + std::to_string(label) + " appears more than twice");
      occ[label][seen[label]++] = Slot{i, s};
    }
  }
  for (int label = 1; label <= arcs; ++label)
    if (seen[label] != 2)
      throw Error(ErrorKind::ArcMultiplicity,
                  "arc label " + std::to_string(label) + " appears " +
                      std::to_string(seen[label]) + " time(s)");
  return occ;
}

void check_planar(const std::vector<Quad>& quads, const std::vector<std::array<Slot, 2>>& occ) {
  const int n = static_cast<int>(quads.size());
  auto mate = [&](int c, int s) {
    const auto& o = occ[quads[c][s]];
    return (o[0].crossing == c && o[0].slot == s) ? o[1] : o[0];
  };
  std::vector<char> used(4 * n, 0);
  int faces = 0;
  for (int start = 0; start < 4 * n; ++start) {
    if (used[start]) continue;
    ++faces;
    int dart = start;
    while (!used[dart]) {
      used[dart] = 1;
      const Slot m = mate(dart / 4, dart % 4);
      dart = 4 * m.crossing + (m.slot + 1) % 4;
    }
  }
  UnionFind uf(n);
  for (const auto& o : occ) uf.unite(o[0].crossing, o[1].crossing);
  int pieces = 0;
  for (int i = 0; i < n; ++i) pieces += uf.find(i) == i;
  if (faces != n + 2 * pieces)
    throw Error(ErrorKind::NonPlanarOrInconsistentOrientation,
                "diagram is not planar: " + std::to_string(faces) + " faces for " +
                    std::to_string(n) + " crossings in " + std::to_string(pieces) + " piece(s)");
}

// Solves for the over-strand direction of every crossing (true: b -> d).
std::vector<bool> orient(const std::vector<Quad>& quads, const std::vector<std::array<Slot, 2>>& occ) {
  const int n = static_cast<int>(quads.size());
  const int arcs = 2 * n;
  // A slot is "incoming" either always (a), never (c), or depending on the
  // crossing's direction variable: b is incoming iff b -> d, d iff d -> b.
  struct Lit {
    int var;      // -1 when fixed
    bool value;   // fixed incoming flag, or negation flag for a variable
  };
  auto lit = [&](Slot s) -> Lit {
    switch (s.slot) {
      case 0: return {-1, true};
      case 2: return {-1, false};
      case 1: return {s.crossing, false};
      default: return {s.crossing, true};
    }
  };

  std::vector<int> value(n, -1);
  // parity edges: x_i ^ x_j = p
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  std::deque<int> queue;
  auto assign = [&](int var, int v, int arc) {
    if (value[var] == -1) {
      value[var] = v;
      queue.push_back(var);
    } else if (value[var] != v) {
      throw Error(ErrorKind::NonPlanarOrInconsistentOrientation,
                  "orientation conflict along arc " + std::to_string(arc));
    }
  };

  for (int label = 1; label <= arcs; ++label) {
    const Lit l0 = lit(occ[label][0]);
    const Lit l1 = lit(occ[label][1]);
    if (l0.var < 0 && l1.var < 0) {
      if (l0.value == l1.value)
        throw Error(ErrorKind::NonPlanarOrInconsistentOrientation,
                    "arc " + std::to_string(label) + " is both " +
                        (l0.value ? "incoming" : "outgoing") + " under-strand ends");
    } else if (l0.var < 0 || l1.var < 0) {
      const Lit fixed = l0.var < 0 ? l0 : l1;
      const Lit free = l0.var < 0 ? l1 : l0;
      // incoming(free) must equal !fixed.value, incoming(free) = x ^ neg
      assign(free.var, static_cast<int>(!fixed.value) ^ static_cast<int>(free.value), label);
    } else if (l0.var == l1.var) {
      if (l0.value == l1.value)
        throw Error(ErrorKind::NonPlanarOrInconsistentOrientation,
                    "arc " + std::to_string(label) + " occupies one slot twice");
    } else {
      const int parity = 1 ^ static_cast<int>(l0.value) ^ static_cast<int>(l1.value);
      adj[l0.var].emplace_back(l1.var, parity);
      adj[l1.var].emplace_back(l0.var, parity);
    }
  }

  auto propagate = [&] {
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (auto [w, p] : adj[v]) assign(w, value[v] ^ p, 0);
    }
  };
  propagate();
  for (int i = 0; i < n; ++i) {
    if (value[i] != -1) continue;
    // Component passing over everything: orient by label succession.
    const int b = quads[i][1];
    const int d = quads[i][3];
    assign(i, (d == b % arcs + 1) ? 1 : 0, b);
    propagate();
  }
  std::vector<bool> b_to_d(n);
  for (int i = 0; i < n; ++i) b_to_d[i] = value[i] == 1;
  return b_to_d;
}

std::string render_quads(const std::vector<Quad>& quads) {
  if (quads.empty()) return "U";
  std::string out = "PD[";
  for (std::size_t i = 0; i < quads.size(); ++i) {
    if (i) out += ", ";
    const auto& q = quads[i];
    out += "X(" + std::to_string(q[0]) + "," + std::to_string(q[1]) + "," +
           std::to_string(q[2]) + "," + std::to_string(q[3]) + ")";
  }
  return out + "]";
}

}  // namespace

Diagram Diagram::unknot() {
  Diagram d;
  d.arc_component_ = {-1, 0};
  return d;
}

Diagram Diagram::with_basepoint(std::optional<int> arc) const {
  if (arc && (*arc < 1 || *arc > arc_count()))
    throw Error(ErrorKind::InvalidBasepoint,
                "basepoint arc " + std::to_string(*arc) + " outside 1.." + std::to_string(arc_count()));
  Diagram d = *this;
  d.basepoint_ = arc;
  return d;
}

Diagram Diagram::from_quads(std::vector<Quad> quads, std::optional<int> basepoint) {
  if (quads.empty()) return unknot().with_basepoint(basepoint);
  if (static_cast<int>(quads.size()) > kMaxCrossings)
    throw Error(ErrorKind::ResourceLimit,
                std::to_string(quads.size()) + " crossings exceeds the supported maximum of " +
                    std::to_string(kMaxCrossings));
  const auto occ = occurrences(quads);
  check_planar(quads, occ);
  const auto b_to_d = orient(quads, occ);

  Diagram d;
  const int n = static_cast<int>(quads.size());
  d.signs_.resize(n);
  for (int i = 0; i < n; ++i) {
    d.signs_[i] = b_to_d[i] ? -1 : 1;
    (b_to_d[i] ? d.n_minus_ : d.n_plus_)++;
  }
  UnionFind uf(2 * n + 1);
  for (const auto& q : quads) {
    uf.unite(q[0], q[2]);
    uf.unite(q[1], q[3]);
  }
  std::map<int, int> comp;
  d.arc_component_.assign(2 * n + 1, -1);
  for (int a = 1; a <= 2 * n; ++a) {
    auto [it, _] = comp.try_emplace(uf.find(a), static_cast<int>(comp.size()));
    d.arc_component_[a] = it->second;
  }
  d.component_count_ = static_cast<int>(comp.size());
  d.quads_ = std::move(quads);
  return d.with_basepoint(basepoint);
}

namespace {

class PdParser {
 public:
  explicit PdParser(std::string_view text) : text_(text) {}

  std::vector<Quad> parse() {
    skip_ws();
    if (consume_word("U")) {
      expect_end();
      return {};
    }
    expect("PD");
    expect("[");
    std::vector<Quad> quads;
    skip_ws();
    if (peek() == ']') fail("empty crossing list");
    while (true) {
      expect("X");
      expect("(");
      Quad q{};
      for (int s = 0; s < 4; ++s) {
        if (s) expect(",");
        q[s] = integer();
      }
      expect(")");
      quads.push_back(q);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      break;
    }
    expect("]");
    expect_end();
    return quads;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string token_here() const {
    if (pos_ >= text_.size()) return "end of input";
    std::size_t end = pos_;
    while (end < text_.size() && end - pos_ < 12 &&
           !std::isspace(static_cast<unsigned char>(text_[end])))
      ++end;
    return "'" + std::string(text_.substr(pos_, end - pos_)) + "'";
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::MalformedSyntax,
                what + " at offset " + std::to_string(pos_) + " near " + token_here());
  }

  bool consume_word(std::string_view w) {
    if (text_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view w) {
    skip_ws();
    if (!consume_word(w)) fail("expected '" + std::string(w) + "'");
  }

  void expect_end() {
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
  }

  int integer() {
    skip_ws();
    int value = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("expected an arc label");
    if (value < 0) fail("negative arc label");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Diagram parse_pd(std::string_view text) {
  auto quads = PdParser(text).parse();
  if (quads.empty()) return Diagram::unknot();

  std::map<int, int> count;
  for (const auto& q : quads)
    for (int label : q) ++count[label];
  for (auto [label, c] : count)
    if (c != 2)
      throw Error(ErrorKind::ArcMultiplicity,
                  "arc label " + std::to_string(label) + " appears " + std::to_string(c) + " time(s)");
  std::map<int, int> relabel;
  for (auto [label, _] : count) relabel.emplace(label, static_cast<int>(relabel.size()) + 1);
  for (auto& q : quads)
    for (int& label : q) label = relabel.at(label);
  return Diagram::from_quads(std::move(quads));
}

std::string render_pd(const Diagram& d) { return render_quads(d.crossings()); }

Diagram from_braid(std::span<const int> word, int strands) {
  if (strands < 1) throw Error(ErrorKind::LetterOutOfRange, "strand count must be positive");
  if (word.empty()) {
    if (strands == 1) return Diagram::unknot();
    throw Error(ErrorKind::EmptyWord, "empty braid word on " + std::to_string(strands) + " strands");
  }
  std::vector<int> initial(strands);
  std::iota(initial.begin(), initial.end(), 0);
  std::vector<int> current = initial;
  int fresh = strands;
  std::vector<Quad> quads;
  for (int letter : word) {
    const int g = letter < 0 ? -letter : letter;
    if (letter == 0 || g >= strands)
      throw Error(ErrorKind::LetterOutOfRange,
                  "braid letter " + std::to_string(letter) + " needs 1 <= |i| < " + std::to_string(strands));
    const int left = g - 1;
    const int in_l = current[left];
    const int in_r = current[left + 1];
    const int out_l = fresh++;
    const int out_r = fresh++;
    // Strands run upward; ccw order from the incoming under-strand.
    if (letter > 0)
      quads.push_back({in_r, out_r, out_l, in_l});
    else
      quads.push_back({in_l, in_r, out_r, out_l});
    current[left] = out_l;
    current[left + 1] = out_r;
  }
  std::vector<int> alias(fresh);
  std::iota(alias.begin(), alias.end(), 0);
  for (int p = 0; p < strands; ++p) {
    if (current[p] == initial[p])
      throw Error(ErrorKind::UnusedStrand,
                  "strand " + std::to_string(p + 1) + " takes part in no crossing");
    alias[current[p]] = initial[p];
  }
  for (auto& q : quads)
    for (int& label : q) label = alias[label];

  // Number arcs consecutively along each component.
  const int n = static_cast<int>(quads.size());
  std::vector<int> next(fresh, -1);
  for (int i = 0; i < n; ++i) {
    const auto& q = quads[i];
    next[q[0]] = q[2];
    if (word[i] > 0)
      next[q[3]] = q[1];
    else
      next[q[1]] = q[3];
  }
  std::vector<int> label(fresh, 0);
  int counter = 0;
  for (int start = 0; start < fresh; ++start) {
    if (next[start] < 0 || label[start]) continue;
    for (int a = start; !label[a]; a = next[a]) label[a] = ++counter;
  }
  for (auto& q : quads)
    for (int& l : q) l = label[l];
  return Diagram::from_quads(std::move(quads));
}

Diagram mirror(const Diagram& d) {
  if (d.is_unknot_literal()) return d;
  std::vector<Quad> quads;
  quads.reserve(d.crossings().size());
  for (std::size_t i = 0; i < d.crossings().size(); ++i) {
    const auto& q = d.crossings()[i];
    // The old over-strand becomes the under-strand; start at its incoming end.
    if (d.signs()[i] < 0)
      quads.push_back({q[1], q[2], q[3], q[0]});
    else
      quads.push_back({q[3], q[0], q[1], q[2]});
  }
  return Diagram::from_quads(std::move(quads), d.basepoint_arc());
}

namespace {

// Breadth-first walk over crossings from `start`, numbering arcs in order of
// first appearance. `relabel` receives the numbering, offset by `base`.
std::vector<Quad> walk_from(const std::vector<Quad>& quads,
                            const std::vector<std::vector<int>>& at_arc, int start, int base,
                            std::vector<int>& relabel) {
  std::vector<Quad> out;
  std::vector<bool> seen(quads.size(), false);
  std::deque<int> queue{start};
  seen[start] = true;
  int counter = base;
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    Quad q = quads[c];
    for (int& label : q) {
      if (!relabel[label]) {
        relabel[label] = ++counter;
        for (int other : at_arc[label])
          if (!seen[other]) {
            seen[other] = true;
            queue.push_back(other);
          }
      }
      label = relabel[label];
    }
    out.push_back(q);
  }
  return out;
}

}  // namespace

std::string canonical_form(const Diagram& d) {
  const auto& quads = d.crossings();
  std::vector<std::vector<int>> at_arc(d.arc_count() + 1);
  for (std::size_t c = 0; c < quads.size(); ++c)
    for (int label : quads[c]) at_arc[label].push_back(static_cast<int>(c));

  // Each connected piece is numbered from 1 by its smallest walk; pieces are
  // then ordered and offset.
  struct Piece {
    std::vector<Quad> quads;
    std::vector<int> relabel;
  };
  std::vector<Piece> pieces;
  std::vector<bool> covered(quads.size(), false);
  for (std::size_t c = 0; c < quads.size(); ++c) {
    if (covered[c]) continue;
    std::optional<Piece> best;
    std::vector<int> members;
    {
      std::vector<int> relabel(d.arc_count() + 1, 0);
      walk_from(quads, at_arc, static_cast<int>(c), 0, relabel);
      for (std::size_t o = 0; o < quads.size(); ++o)
        if (relabel[quads[o][0]]) members.push_back(static_cast<int>(o));
    }
    for (int start : members) {
      covered[start] = true;
      Piece piece{{}, std::vector<int>(d.arc_count() + 1, 0)};
      piece.quads = walk_from(quads, at_arc, start, 0, piece.relabel);
      if (!best || piece.quads < best->quads) best = std::move(piece);
    }
    pieces.push_back(std::move(*best));
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.quads < b.quads; });

  std::vector<Quad> out;
  std::vector<int> relabel(d.arc_count() + 1, 0);
  int offset = 0;
  for (const auto& piece : pieces) {
    int used = 0;
    for (Quad q : piece.quads) {
      for (int& label : q) {
        used = std::max(used, label);
        label += offset;
      }
      out.push_back(q);
    }
    for (int a = 1; a <= d.arc_count(); ++a)
      if (piece.relabel[a]) relabel[a] = piece.relabel[a] + offset;
    offset += used;
  }

  std::string text = render_quads(out);
  if (d.basepoint_arc()) {
    const int bp = *d.basepoint_arc();
    text += " @" + std::to_string(d.is_unknot_literal() ? bp : relabel[bp]);
  }
  return text;
}

std::uint64_t diagram_hash(const Diagram& d) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical_form(d)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

int Resolution::circle_index(int id) const {
  auto it = std::lower_bound(circle_ids.begin(), circle_ids.end(), id);
  if (it == circle_ids.end() || *it != id) return -1;
  return static_cast<int>(it - circle_ids.begin());
}

Resolution resolve(const Diagram& d, StateMask state) {
  Resolution r;
  r.state = state;
  r.crossing_count = d.crossing_count();
  const int arcs = d.arc_count();
  UnionFind uf(arcs + 1);
  for (int c = 0; c < d.crossing_count(); ++c) {
    const auto& q = d.crossings()[c];
    if ((state >> c) & 1U) {
      uf.unite(q[0], q[3]);
      uf.unite(q[1], q[2]);
    } else {
      uf.unite(q[0], q[1]);
      uf.unite(q[2], q[3]);
    }
  }
  // Roots are the minimal labels, so scanning labels in order yields circles
  // already sorted by id.
  r.circle_of_arc.assign(arcs + 1, -1);
  std::vector<int> index_of_root(arcs + 1, -1);
  for (int a = 1; a <= arcs; ++a) {
    const int root = uf.find(a);
    if (index_of_root[root] < 0) {
      index_of_root[root] = r.circle_count();
      r.circles.emplace_back();
      r.circle_ids.push_back(a);
    }
    r.circle_of_arc[a] = index_of_root[root];
    r.circles[index_of_root[root]].push_back(a);
  }
  r.pointed_circle = r.circle_of_arc[d.effective_basepoint()];
  return r;
}

Resolution resolve(const Diagram& d, const std::vector<bool>& state) {
  if (static_cast<int>(state.size()) != d.crossing_count())
    throw Error(ErrorKind::StateLengthMismatch,
                "state has " + std::to_string(state.size()) + " bits for " +
                    std::to_string(d.crossing_count()) + " crossings");
  StateMask mask = 0;
  for (std::size_t c = 0; c < state.size(); ++c)
    if (state[c]) mask |= StateMask{1} << c;
  return resolve(d, mask);
}

EdgeTransition edge_transition(const Diagram& d, const Resolution& from, const Resolution& to,
                               int crossing) {
  const StateMask bit = StateMask{1} << crossing;
  if (from.state & bit)
    throw Error(ErrorKind::CrossingAlreadyOne,
                "crossing " + std::to_string(crossing) + " is already 1-smoothed");
  if (to.state != (from.state | bit))
    throw Error(ErrorKind::StateLengthMismatch, "target state is not the flip of the source");

  const auto& q = d.crossings()[crossing];
  EdgeTransition t;
  t.from_state = from.state;
  t.to_state = to.state;
  t.crossing = crossing;
  const int ca = from.circle_of_arc[q[0]];
  const int cc = from.circle_of_arc[q[2]];
  std::vector<char> participates(from.circle_count(), 0);
  participates[ca] = participates[cc] = 1;
  if (ca != cc) {
    t.kind = Merge{from.circle_ids[ca], from.circle_ids[cc], to.circle_ids[to.circle_of_arc[q[0]]]};
  } else {
    const int da = to.circle_of_arc[q[0]];
    const int db = to.circle_of_arc[q[1]];
    t.kind = Split{from.circle_ids[ca], to.circle_ids[da], to.circle_ids[db]};
  }
  for (int i = 0; i < from.circle_count(); ++i)
    if (!participates[i]) t.bystander_map.emplace_back(from.circle_ids[i], from.circle_ids[i]);
  return t;
}

EdgeTransition edge_transition(const Diagram& d, StateMask state, int crossing) {
  if (crossing < 0 || crossing >= d.crossing_count())
    throw Error(ErrorKind::StateLengthMismatch, "crossing index out of range");
  if ((state >> crossing) & 1U)
    throw Error(ErrorKind::CrossingAlreadyOne,
                "crossing " + std::to_string(crossing) + " is already 1-smoothed");
  return edge_transition(d, resolve(d, state), resolve(d, state | (StateMask{1} << crossing)),
                         crossing);
}

LaurentPoly kauffman_jones(const Diagram& d) {
  const LaurentPoly loop = LaurentPoly::monomial(1) + LaurentPoly::monomial(-1);
  const int n = d.crossing_count();
  if (n == 0) return loop;

  // Count loops per smoothing with a throwaway parent array; kept separate
  // from resolve() so the oracle shares no code with the cube builder.
  const int arcs = 2 * n;
  std::vector<LaurentPoly> loop_powers{LaurentPoly::constant(1)};
  LaurentPoly bracket;
  std::vector<int> parent(arcs + 1);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (StateMask s = 0; s < (StateMask{1} << n); ++s) {
    std::iota(parent.begin(), parent.end(), 0);
    int loops = arcs;
    auto join = [&](int a, int b) {
      a = root(a);
      b = root(b);
      if (a != b) {
        parent[a] = b;
        --loops;
      }
    };
    for (int c = 0; c < n; ++c) {
      const auto& q = d.crossings()[c];
      if ((s >> c) & 1U) {
        join(q[0], q[3]);
        join(q[1], q[2]);
      } else {
        join(q[0], q[1]);
        join(q[2], q[3]);
      }
    }
    while (static_cast<int>(loop_powers.size()) <= loops)
      loop_powers.push_back(loop_powers.back() * loop);
    const int ones = std::popcount(s);
    bracket += loop_powers[loops].shifted(ones) * LaurentPoly::constant(ones % 2 ? -1 : 1);
  }
  const int sign = d.n_minus() % 2 ? -1 : 1;
  return bracket.shifted(d.n_plus() - 2 * d.n_minus()) * LaurentPoly::constant(sign);
}

std::vector<TableEntry> parse_link_table(std::istream& in) {
  std::vector<TableEntry> table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (fields.size() != 3)
      throw Error(ErrorKind::MalformedSyntax,
                  "link table line " + std::to_string(lineno) + ": expected 3 tab-separated fields");
    TableEntry e{fields[0], 0, Diagram::unknot()};
    try {
      e.components = std::stoi(fields[2]);
      e.diagram = parse_pd(fields[1]);
    } catch (const Error& err) {
      throw Error(err.kind(), "link table line " + std::to_string(lineno) + " (" + fields[0] +
                                  "): " + err.what());
    } catch (const std::exception&) {
      throw Error(ErrorKind::MalformedSyntax,
                  "link table line " + std::to_string(lineno) + ": bad component count");
    }
    if (e.components != e.diagram.component_count())
      throw Error(ErrorKind::MalformedSyntax,
                  "link table line " + std::to_string(lineno) + " (" + e.name + "): declares " +
                      std::to_string(e.components) + " components, diagram has " +
                      std::to_string(e.diagram.component_count()));
    if (find_entry(table, e.name))
      throw Error(ErrorKind::MalformedSyntax, "duplicate table entry " + e.name);
    table.push_back(std::move(e));
  }
  return table;
}

std::vector<TableEntry> load_link_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedSyntax, "cannot open link table " + path.string());
  return parse_link_table(in);
}

const TableEntry* find_entry(const std::vector<TableEntry>& table, std::string_view name) {
  for (const auto& e : table)
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace khbn
