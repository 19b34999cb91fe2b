#pragma once

// Brute-force reference pipeline. Shares only the Diagram type with the
// library: resolutions, the Frobenius algebra, matrices, ranks and the module
// decomposition are all recomputed here with plain dense arrays.

#include <map>
#include <utility>
#include <vector>

#include "khbn/homology.hpp"
#include "khbn/linkdiag.hpp"

namespace oracle {

using Row = std::vector<unsigned char>;

/// Rank over F2 by textbook elimination on a copy.
int dense_rank(std::vector<Row> rows);

struct DenseComplex {
  int k = 1;
  /// (i, j) -> basis of that block as (state, labeling, u-power)
  struct Cell {
    unsigned long long state;
    unsigned long long minus;
    int power;
  };
  std::map<std::pair<int, int>, std::vector<Cell>> cells;
  /// (i, j) -> matrix of d into (i+1, j), stored as rows of the target
  std::map<std::pair<int, int>, std::vector<Row>> d;
};

DenseComplex dense_complex(const khbn::Diagram& d, int k, bool reduced, int basepoint);

/// Direct decomposition from ranks of image spans, returned in the
/// library's ModuleDecomp shape for comparison.
khbn::ModuleDecomp dense_homology(const DenseComplex& c);
khbn::ModuleDecomp dense_homology(const khbn::Diagram& d, int k, bool reduced, int basepoint);

/// Rank of the connecting map H_{i,j}(C_1) -> H_{i+1,j+2}(C_1) of the
/// k=2 complex, computed as dim H(C_1) minus the classes that lift to cycles.
std::map<std::pair<int, int>, int> dense_connecting_ranks(const khbn::Diagram& d, bool reduced,
                                                          int basepoint);

}  // namespace oracle
