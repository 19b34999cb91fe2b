#pragma once

// Spectral sequence of a finite filtered complex over F2.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khbn/homology.hpp"
#include "khbn/khcube.hpp"
#include "khbn/ringalg.hpp"

namespace khbn {

/// Increasing filtration F_p = span of basis vectors with level <= p. The
/// complex is split into blocks by (degree n, weight); the differential maps
/// block (n, w) to block (n+1, w) and must never raise the level.
struct FilteredComplex {
  struct Block {
    std::vector<int> level;
    /// rows indexed by the basis of block (n+1, w)
    F2Mat d;
  };
  std::map<std::pair<int, int>, Block> blocks;

  int min_level() const;
  int max_level() const;
  /// Throws FiltrationViolation or DimensionMismatch.
  void validate() const;
};

/// level(g u^p) = k-1-p, weight = quantum degree.
FilteredComplex u_adic_filtration(const FreeComplex& c);

struct PagePosition {
  int p = 0;
  int n = 0;
  int weight = 0;
  int complementary() const { return n - p; }
  friend auto operator<=>(const PagePosition&, const PagePosition&) = default;
};

std::string to_string(const PagePosition& pos);

struct PageTable {
  /// pages[r] holds the nonzero dimensions of E_r.
  std::vector<std::map<PagePosition, int>> pages;
  /// First page from which all computed pages agree.
  int r_stab = 0;

  const std::map<PagePosition, int>& e_infinity() const { return pages.back(); }
  int total(int r) const;
};

/// E_r^p = Z_r^p / (Z_{r-1}^{p-1} + d Z_{r-1}^{p+r-1}) with
/// Z_r^p = { x in F_p : dx in F_{p-r} }, for r = 0..r_max. The default r_max
/// is the filtration depth plus one, after which the pages are constant.
PageTable filtration_pages(const FilteredComplex& f, std::optional<int> r_max = std::nullopt);

struct EInftyReport {
  bool ok = true;
  std::optional<PagePosition> mismatch;
  std::string message;
};

/// Compares E_infinity with the associated graded of homology recorded in
/// m.filtration_dims.
EInftyReport verify_einfty_gr(const PageTable& pages, const ModuleDecomp& m);
EInftyReport verify_einfty_gr(const FilteredComplex& f, const ModuleDecomp& m);

}  // namespace khbn
