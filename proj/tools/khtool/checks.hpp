#pragma once

#include <string>
#include <vector>

#include "khbn/linkdiag.hpp"

namespace khtool {

struct CheckResult {
  std::string entry;
  bool ok = true;
  std::string detail;
};

/// triangle, euler, splitting, basepoint, brcover, sseq, reidemeister, dsquared
const std::vector<std::string>& check_names();
bool is_check(const std::string& name);

struct CheckOptions {
  /// brcover: every arc as basepoint instead of the first and last arc
  bool all_basepoints = false;
};

/// Runs one check on one diagram. `table` supplies Reidemeister partners
/// (entries named base@...). Library errors become failed results.
CheckResult run_check(const std::string& check, const khbn::TableEntry& entry,
                      const std::vector<khbn::TableEntry>& table, const CheckOptions& opts = {});

/// Runs a check over many entries with `jobs` worker threads; results keep
/// the input order.
std::vector<CheckResult> run_checks(const std::string& check,
                                    const std::vector<khbn::TableEntry>& entries,
                                    const std::vector<khbn::TableEntry>& table, int jobs,
                                    const CheckOptions& opts = {});

/// Part of a table entry name before '@'.
std::string base_name(const std::string& name);

}  // namespace khtool
