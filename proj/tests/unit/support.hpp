#pragma once

#include <string>
#include <vector>

#include "khbn/errors.hpp"
#include "khbn/linkdiag.hpp"

namespace testsupport {

inline const std::vector<khbn::TableEntry>& table() {
  static const auto t = khbn::load_link_table(std::string(KHBN_DATA_DIR) + "/links.tsv");
  return t;
}

inline const khbn::Diagram& named(const std::string& name) {
  const auto* e = khbn::find_entry(table(), name);
  if (!e) throw std::runtime_error("missing table entry " + name);
  return e->diagram;
}

template <class F>
khbn::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const khbn::Error& e) {
    return e.kind();
  }
  throw std::runtime_error("expected khbn::Error");
}

}  // namespace testsupport
