#pragma once

// The Bar-Natan / Khovanov cube complex over F2[u]/u^k.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khbn/linkdiag.hpp"
#include "khbn/ringalg.hpp"

namespace khbn {

/// Bigraded free complex over F2[u]/u^k. Basis elements are listed per
/// homological degree i with their quantum degree at u-power 0; the
/// differential of degree i has rows indexed by degree i+1.
struct FreeComplex {
  int k = 1;
  std::map<int, std::vector<int>> quantum;
  std::map<int, SparseMat> differential;

  int dim(int i) const;
  /// nullptr when the differential out of degree i is zero-dimensional.
  const SparseMat* d(int i) const;
};

/// Coefficients in the ring are dropped above u^{k-1}.
FreeComplex truncated(const FreeComplex& c, int k);

/// A labeling assigns v- to the circles whose bit is set in `minus_mask`
/// (bit = circle index in the resolution, circles ordered by id).
struct Generator {
  StateMask state = 0;
  std::uint64_t minus_mask = 0;
  friend bool operator==(const Generator&, const Generator&) = default;
};

struct GradedComplex {
  FreeComplex chains;
  /// Same ordering as chains.quantum: lexicographic in (state, minus_mask).
  std::map<int, std::vector<Generator>> generators;
  bool reduced = false;
  std::optional<int> basepoint;
  int crossings = 0;
  int n_plus = 0;
  int n_minus = 0;

  int order() const { return chains.k; }
  std::optional<int> index_of(int degree, const Generator& g) const;
};

/// Merge m and split Delta of the deformed TQFT, locally.
struct MergeTerm {
  bool minus;
  RingElem coeff;
};
struct SplitTerm {
  bool minus_a;
  bool minus_b;
  RingElem coeff;
};
std::vector<MergeTerm> merge_map(bool a_minus, bool b_minus, int k);
std::vector<SplitTerm> split_map(bool minus, int k);

struct LabelTerm {
  std::uint64_t minus_mask;
  RingElem coeff;
};

/// Image of a labeling of `from` along the edge, expressed as labelings of
/// `to`. Bystander labels are carried across unchanged.
std::vector<LabelTerm> apply_edge_map(const EdgeTransition& t, const Resolution& from,
                                      const Resolution& to, std::uint64_t minus_mask, int k);

struct BuildOptions {
  int k = 2;
  bool reduced = false;
  std::optional<int> basepoint;
  /// Allow more than kCrossingLimit crossings.
  bool force = false;
};

inline constexpr int kCrossingLimit = 14;

/// Quantum degree of a labeling: (#plus - #minus) + |state| + n+ - 2n-.
int generator_quantum(int circles, std::uint64_t minus_mask, StateMask state, int n_plus,
                      int n_minus);

/// Throws BasepointMissing, SubcomplexViolation, DSquaredFailure,
/// ResourceLimit.
GradedComplex build_complex(const Diagram& d, const BuildOptions& opts);

struct DSquaredReport {
  bool ok = true;
  /// Source degree and quantum grading of the first offending entry.
  std::optional<std::pair<int, int>> bidegree;
  std::string message;
};

DSquaredReport verify_d_squared(const FreeComplex& c);

/// Every entry u^e between generators g -> h must satisfy q(h) - 2e = q(g).
DSquaredReport verify_quantum_homogeneity(const FreeComplex& c);

}  // namespace khbn
