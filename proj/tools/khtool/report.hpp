#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "khbn/homology.hpp"
#include "khbn/linkdiag.hpp"

namespace khtool {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Which homology theory to compute. `kind` is one of kh, bn2, bn3, bnk,
/// brcover-e2; k is implied except for bnk.
struct InvariantSpec {
  std::string kind = "bn2";
  int k = 2;
  bool reduced = false;
  std::optional<int> basepoint;

  /// Fills k and the basepoint default; throws khbn::Error(MalformedSyntax)
  /// on inconsistent choices.
  void normalize(const khbn::Diagram& d);
  std::string cache_tag() const;
};

struct InvariantReport {
  std::string canonical;
  std::uint64_t hash = 0;
  int crossings = 0;
  int components = 1;
  InvariantSpec spec;
  khbn::ModuleDecomp module;
  std::optional<double> timing_ms;

  friend bool operator==(const InvariantReport& a, const InvariantReport& b) {
    return a.canonical == b.canonical && a.hash == b.hash && a.crossings == b.crossings &&
           a.components == b.components && a.spec.kind == b.spec.kind && a.spec.k == b.spec.k &&
           a.spec.reduced == b.spec.reduced && a.spec.basepoint == b.spec.basepoint &&
           a.module == b.module && a.module.filtration_dims == b.module.filtration_dims;
  }
};

/// Computes the module for an already normalized spec.
khbn::ModuleDecomp compute_module(const khbn::Diagram& d, const InvariantSpec& spec,
                                  bool force = false);
InvariantReport compute_report(const khbn::Diagram& d, InvariantSpec spec, bool force = false);

/// sum dim H_{i,j} t^i q^j, printed with t before q.
std::string poincare_text(const khbn::ModuleDecomp& m);
std::string hash_hex(std::uint64_t h);

Json module_to_json(const khbn::ModuleDecomp& m);
khbn::ModuleDecomp module_from_json(const Json& j);
Json to_json(const InvariantReport& r);
InvariantReport report_from_json(const Json& j);

/// Human-readable table with u-arrows drawn for summands of length >= 2.
std::string format_table(const InvariantReport& r, const std::string& title);

/// One JSON file per (hash, invariant, flags) under `dir`.
class ReportCache {
 public:
  explicit ReportCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::optional<InvariantReport> load(const khbn::Diagram& d, const InvariantSpec& spec) const;
  void store(const InvariantReport& r) const;

 private:
  std::filesystem::path file_name(std::uint64_t hash, const InvariantSpec& spec) const;
  std::filesystem::path dir_;
};

}  // namespace khtool
