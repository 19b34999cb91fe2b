#pragma once

// Planar link diagrams in PD notation, their cube of resolutions, and the
// Kauffman-bracket Jones polynomial used as an independent oracle.
//
// Conventions (fixed for the whole library):
//   * X(a,b,c,d) lists the four arc labels counterclockwise, starting at the
//     incoming under-strand a; the under-strand runs a -> c.
//   * The over-strand direction is whatever makes every arc enter exactly one
//     crossing and leave exactly one. A crossing is positive when the
//     over-strand runs d -> b and negative when it runs b -> d.
//   * The 0-smoothing joins {a,b} and {c,d}; the 1-smoothing joins {a,d} and
//     {b,c}. For a positive crossing the 0-smoothing is the oriented one.
//   * A circle of a resolution is named by the smallest arc label on it.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "khbn/laurent.hpp"

namespace khbn {

using Quad = std::array<int, 4>;

/// Bit c holds the smoothing chosen at crossing c.
using StateMask = std::uint64_t;

inline constexpr int kMaxCrossings = 62;

class Diagram {
 public:
  /// The crossingless unknot, written `U`.
  static Diagram unknot();

  /// Validates arc labels 1..2n, planarity and orientation, then derives
  /// signs and components. Throws khbn::Error.
  static Diagram from_quads(std::vector<Quad> quads,
                            std::optional<int> basepoint = std::nullopt);

  int crossing_count() const { return static_cast<int>(quads_.size()); }
  /// 2n labels, or a single arc (label 1) for the crossingless unknot.
  int arc_count() const { return quads_.empty() ? 1 : 2 * crossing_count(); }
  bool is_unknot_literal() const { return quads_.empty(); }

  const std::vector<Quad>& crossings() const { return quads_; }
  const std::vector<int>& signs() const { return signs_; }
  int n_plus() const { return n_plus_; }
  int n_minus() const { return n_minus_; }
  int writhe() const { return n_plus_ - n_minus_; }
  int component_count() const { return component_count_; }
  int component_of_arc(int arc) const { return arc_component_.at(arc); }

  std::optional<int> basepoint_arc() const { return basepoint_; }
  /// Basepoint used when none was chosen explicitly: arc 1.
  int effective_basepoint() const { return basepoint_.value_or(1); }
  Diagram with_basepoint(std::optional<int> arc) const;

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  std::vector<Quad> quads_;
  std::vector<int> signs_;
  int n_plus_ = 0;
  int n_minus_ = 0;
  std::optional<int> basepoint_;
  int component_count_ = 1;
  std::vector<int> arc_component_;  // indexed by arc label; slot 0 unused
};

/// Accepts `U` or `PD[X(a,b,c,d), ...]`. Labels may be any non-negative
/// integers; they are renumbered 1..2n preserving their relative order.
Diagram parse_pd(std::string_view text);

/// Canonical text form; parse_pd(render_pd(d)) == d up to the basepoint.
std::string render_pd(const Diagram& d);

/// Closure of a braid word on `strands` strands. Letter i > 0 is the positive
/// generator sigma_i, i < 0 its inverse. Arcs are numbered consecutively along
/// each component.
Diagram from_braid(std::span<const int> word, int strands);

/// Crossing change at every crossing. Each quadruple is rotated by one slot so
/// that it again starts at the incoming under-strand; this swaps the 0- and
/// 1-smoothings.
Diagram mirror(const Diagram& d);

/// PD text invariant under relabeling arcs and reordering crossings: each
/// connected piece is walked breadth-first from the start crossing giving the
/// smallest numbering. Includes the basepoint when set.
std::string canonical_form(const Diagram& d);
std::uint64_t diagram_hash(const Diagram& d);

struct Resolution {
  StateMask state = 0;
  int crossing_count = 0;
  /// Member arcs of each circle, ascending; circles ordered by id.
  std::vector<std::vector<int>> circles;
  std::vector<int> circle_ids;
  /// circle index of each arc label (slot 0 unused)
  std::vector<int> circle_of_arc;
  int pointed_circle = -1;

  int circle_count() const { return static_cast<int>(circles.size()); }
  int circle_index(int id) const;
};

Resolution resolve(const Diagram& d, StateMask state);
/// Throws StateLengthMismatch unless state.size() == crossing_count().
Resolution resolve(const Diagram& d, const std::vector<bool>& state);

struct Merge {
  int src_a, src_b, dst;
  friend bool operator==(const Merge&, const Merge&) = default;
};
struct Split {
  int src, dst_a, dst_b;
  friend bool operator==(const Split&, const Split&) = default;
};

struct EdgeTransition {
  StateMask from_state = 0;
  StateMask to_state = 0;
  int crossing = 0;
  std::variant<Merge, Split> kind;
  /// (from id, to id) for every circle not touching the crossing.
  std::vector<std::pair<int, int>> bystander_map;

  bool is_merge() const { return std::holds_alternative<Merge>(kind); }
};

/// Throws CrossingAlreadyOne when bit `crossing` of `state` is set.
EdgeTransition edge_transition(const Diagram& d, StateMask state, int crossing);
EdgeTransition edge_transition(const Diagram& d, const Resolution& from,
                               const Resolution& to, int crossing);

/// Unnormalized Jones polynomial, V(unknot) = q + q^-1, from the bracket state
/// sum (-1)^{n-} q^{n+ - 2n-} sum_s (-q)^{|s|} (q + q^-1)^{#circles(s)}.
LaurentPoly kauffman_jones(const Diagram& d);

struct TableEntry {
  std::string name;
  int components = 1;
  Diagram diagram;
};

/// Lines `name<TAB>PD<TAB>components`; blank lines and `#` comments skipped.
std::vector<TableEntry> parse_link_table(std::istream& in);
std::vector<TableEntry> load_link_table(const std::filesystem::path& path);
const TableEntry* find_entry(const std::vector<TableEntry>& table, std::string_view name);

}  // namespace khbn
