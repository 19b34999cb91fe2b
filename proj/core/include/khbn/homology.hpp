#pragma once

// Bigraded homology of complexes over F2[u]/u^k, its module structure, and
// the long exact sequence relating different truncation orders.

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "khbn/khcube.hpp"
#include "khbn/laurent.hpp"
#include "khbn/ringalg.hpp"

namespace khbn {

struct Bidegree {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

std::string to_string(Bidegree b);

/// Homology at one bidegree. `summands[l]` (l = 1..k) counts cyclic summands
/// F2[u]/u^l whose generator sits here; the summand also occupies
/// (i, j-2), ..., (i, j-2(l-1)).
struct BidegreeHomology {
  int dim = 0;
  std::vector<int> summands;
  friend bool operator==(const BidegreeHomology&, const BidegreeHomology&) = default;
};

struct ModuleDecomp {
  int k = 1;
  /// Only bidegrees with nonzero dimension or a summand generator appear.
  std::map<Bidegree, BidegreeHomology> groups;
  /// Dimensions of the associated graded of homology for the filtration
  /// induced by level(u^p x) = k-1-p, keyed (level, i, j). Filled by
  /// bigraded_homology; ignored by operator==.
  std::map<std::tuple<int, int, int>, int> filtration_dims;

  int total_dim() const;
  int summand_count(int length) const;
  /// Rank of multiplication by u on the whole module.
  int u_rank() const;

  friend bool operator==(const ModuleDecomp& a, const ModuleDecomp& b) {
    return a.k == b.k && a.groups == b.groups;
  }
};

/// Shift every bidegree by (di, dj).
ModuleDecomp shifted(const ModuleDecomp& m, int di, int dj);
ModuleDecomp direct_sum(const ModuleDecomp& a, const ModuleDecomp& b);

/// sum_{i,j} (-1)^i dim H_{i,j} q^j
LaurentPoly euler_characteristic(const ModuleDecomp& m);

/// The complex over F2 obtained by forgetting the u-module structure. A basis
/// element is a pair (generator, u-power) and sits at quantum degree
/// q(generator) - 2 * power. The differential splits into blocks by (i, j).
class FlatComplex {
 public:
  struct Cell {
    int gen;
    int power;
  };

  explicit FlatComplex(const FreeComplex& c);

  int order() const { return k_; }
  /// Nonempty blocks in increasing order.
  std::vector<Bidegree> bidegrees() const;
  int block_dim(Bidegree b) const;
  std::span<const Cell> cells(Bidegree b) const;
  /// Position of (gen, power) inside its block, or -1 when power >= k.
  int local_index(int i, int gen, int power) const;
  int quantum_of(int i, int gen, int power) const;
  /// Differential block (i, j) -> (i+1, j); rows indexed by the target block.
  const F2Mat& differential(Bidegree b) const;

  /// Image of v under multiplication by u^times: (g, p) -> (g, p + times),
  /// landing in block (i, j - 2 times). Terms pushed past u^{k-1} vanish.
  BitVec u_shift(Bidegree from, const BitVec& v, int times) const;

 private:
  int k_;
  std::map<int, std::vector<int>> quantum_;
  std::map<Bidegree, std::vector<Cell>> cells_;
  std::map<Bidegree, F2Mat> blocks_;
  F2Mat empty_;
};

/// Cycles, boundaries and a fixed homology basis at every bidegree.
class HomologyComputation {
 public:
  explicit HomologyComputation(const FreeComplex& c);

  const FlatComplex& flat() const { return flat_; }
  int order() const { return flat_.order(); }
  std::vector<Bidegree> support() const;
  int dim(Bidegree b) const;
  /// Cycle representatives of the basis classes at b.
  const std::vector<BitVec>& representatives(Bidegree b) const;
  /// Coordinates of a chain in block b over the homology basis; throws
  /// LiftFailure when v is not a cycle.
  BitVec coordinates(Bidegree b, const BitVec& v) const;
  /// Matrix of multiplication by u: H_{i,j} -> H_{i,j-2}.
  F2Mat u_action(Bidegree b) const;
  /// Dimension of the image of H(F_p C) in H at b, F_p spanned by cells of
  /// u-power >= k-1-p.
  int filtered_dim(Bidegree b, int level) const;

  ModuleDecomp decomposition() const;

 private:
  struct Block {
    std::vector<BitVec> cycles;
    std::vector<BitVec> boundaries;
    QuotientBasis quotient{0};
  };
  const Block* block(Bidegree b) const;

  FlatComplex flat_;
  std::map<Bidegree, Block> blocks_;
};

/// Throws DSquaredFailure if the input is not a complex.
ModuleDecomp bigraded_homology(const FreeComplex& c);
inline ModuleDecomp bigraded_homology(const GradedComplex& c) {
  return bigraded_homology(c.chains);
}

/// Homology of the complex of `d` over F2[u]/u^k.
ModuleDecomp homology_of(const Diagram& d, int k, bool reduced, std::optional<int> basepoint,
                         bool force = false);

/// Connecting map of 0 -> C_a --u^b--> C_{a+b} --(mod u^b)--> C_b -> 0, where
/// C_m is `big` truncated to order m. Maps H_{i,j}(C_b) -> H_{i+1,j+2b}(C_a);
/// blocks are keyed by the source bidegree and omitted when zero-sized.
std::map<Bidegree, F2Mat> connecting_map(const FreeComplex& big, int a, int b);

/// The Kh-valued connecting map of a k=2 complex (a = b = 1).
inline std::map<Bidegree, F2Mat> connecting_map(const GradedComplex& c2) {
  return connecting_map(c2.chains, 1, 1);
}

struct TriangleNode {
  /// "H(C_a)", "H(C_a+b)" or "H(C_b)", the node whose exactness was checked.
  std::string node;
  Bidegree at;
  int dim = 0;
  int rank_in = 0;
  int rank_out = 0;
  bool exact = true;
};

struct TriangleReport {
  bool ok = true;
  int a = 1;
  int b = 1;
  /// Total F2-dimensions of H(C_a), H(C_{a+b}), H(C_b).
  int dim_a = 0;
  int dim_ab = 0;
  int dim_b = 0;
  std::vector<TriangleNode> nodes;
  std::string message;
};

/// Checks the long exact sequence at every node and bidegree using explicit
/// matrices in homology coordinates.
TriangleReport verify_triangle(const FreeComplex& big, int a, int b);
TriangleReport verify_triangle(const Diagram& d, bool reduced, std::optional<int> basepoint,
                               int a = 1, int b = 1);

}  // namespace khbn
