#pragma once

// Combinatorial E1 page of the surgery spectral sequence for the branched
// double cover: per resolution an exterior algebra on the classes of the
// non-pointed circles, tensored with F2[Q]/Q^2, and its identification with
// the reduced Bar-Natan complex at k = 2.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khbn/errors.hpp"
#include "khbn/homology.hpp"
#include "khbn/khcube.hpp"
#include "khbn/linkdiag.hpp"
#include "khbn/ringalg.hpp"

namespace khbn {

/// Exterior monomials are subsets of the non-pointed circles; bit t of a
/// monomial refers to nonpointed_circles[t].
struct VertexGroup {
  StateMask state = 0;
  int pointed = 0;
  std::vector<int> nonpointed_circles;
  int circle_count = 0;

  int rank() const { return 1 << nonpointed_circles.size(); }
  /// Position of circle `id` among the non-pointed circles, or -1.
  int gamma_index(int id) const;
};

VertexGroup vertex_group(const Resolution& r);

/// Raw gradings: homological |state|, quantum pulled back along phi.
int e1_quantum(const VertexGroup& v, std::uint64_t monomial);

enum class EdgeCase { M1, M2, S1, S2 };
EdgeCase classify_edge(const EdgeTransition& t, const VertexGroup& from);

/// Edge map over F2[Q]/Q^2; columns are monomials of `from`, rows of `to`.
SparseMat edge_map_brcover(const EdgeTransition& t, const VertexGroup& from, const VertexGroup& to);

/// For a split edge: wedge with the new class gamma'. The target basis used
/// here names the class of dst_a as the continuation of the split circle (or
/// of nothing, for a pointed split) and the class of the other new circle as
/// gamma'.
SparseMat raw_split_map(const EdgeTransition& t, const VertexGroup& from, const VertexGroup& to);
/// Change of basis on the target turning raw_split_map into the edge map:
/// gamma' becomes the sum of the two new classes plus Q (pointed split:
/// gamma_new + Q).
SparseMat split_change_of_basis(const EdgeTransition& t, const VertexGroup& from,
                                const VertexGroup& to);

struct E1Complex {
  int crossings = 0;
  int basepoint = 1;
  std::vector<VertexGroup> vertices;
  /// keyed (source state, crossing)
  std::map<std::pair<StateMask, int>, SparseMat> edges;
  /// Total complex over F2[Q]/Q^2, degree |state|; basis ordered by
  /// (state, monomial).
  FreeComplex total;
  /// (state, monomial) of every basis element of `total`, per degree.
  std::map<int, std::vector<std::pair<StateMask, std::uint64_t>>> basis;
  /// position of each state's first monomial within its degree
  std::vector<int> offset;
};

/// Throws DSquaredFailure, UnclassifiedEdge, ResourceLimit.
E1Complex build_e1_complex(const Diagram& d, int basepoint, bool force = false);

/// A reduced Bar-Natan generator with a u-power.
struct PhiImage {
  Generator generator;
  int u_power = 0;
  friend bool operator==(const PhiImage&, const PhiImage&) = default;
};

/// Pointed circle -> v+, circle t -> v- iff gamma_t is in the monomial, Q -> u.
/// Throws StateMismatch when `r` is not the resolution of v's state or has a
/// different pointed circle.
PhiImage phi(const VertexGroup& v, const Resolution& r, std::uint64_t monomial, int q_power);

struct TheoremReport {
  bool ok = true;
  bool chain_map_ok = true;
  bool module_ok = true;
  std::optional<ErrorKind> failure;
  std::optional<std::pair<StateMask, int>> edge;
  std::optional<Bidegree> bidegree;
  std::string message;
  /// E1 homology moved to Bar-Natan gradings, and reduced BN^2.
  ModuleDecomp e1_homology;
  ModuleDecomp bn_homology;
};

/// Checks phi against both differentials on every edge and on the assembled
/// matrices, then compares independently computed homologies.
TheoremReport verify_theorem_main(const Diagram& d, int basepoint);

}  // namespace khbn
