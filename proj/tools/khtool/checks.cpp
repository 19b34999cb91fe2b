#include "checks.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include "khbn/brcover.hpp"
#include "khbn/errors.hpp"
#include "khbn/homology.hpp"
#include "khbn/sseq.hpp"
#include "report.hpp"

namespace khtool {

using khbn::Diagram;
using khbn::ModuleDecomp;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::string mode(int k, bool reduced) {
  return "k=" + std::to_string(k) + (reduced ? " reduced" : " unreduced");
}

void check_dsquared(const Diagram& d, Outcome& out) {
  for (int k = 1; k <= 3; ++k)
    for (bool reduced : {false, true}) {
      khbn::BuildOptions o;
      o.k = k;
      o.reduced = reduced;
      if (reduced) o.basepoint = d.effective_basepoint();
      const auto c = khbn::build_complex(d, o);
      const auto sq = khbn::verify_d_squared(c.chains);
      if (!sq.ok) out.fail(mode(k, reduced) + ": " + sq.message);
      const auto hom = khbn::verify_quantum_homogeneity(c.chains);
      if (!hom.ok) out.fail(mode(k, reduced) + ": " + hom.message);
    }
}

void check_euler(const Diagram& d, Outcome& out) {
  const auto chi = khbn::euler_characteristic(khbn::homology_of(d, 2, false, std::nullopt));
  const auto expected = khbn::kauffman_jones(d) *
                        (khbn::LaurentPoly::constant(1) + khbn::LaurentPoly::monomial(-2));
  if (!(chi == expected))
    out.fail("chi = " + chi.to_string() + ", (1+q^-2) V = " + expected.to_string());
}

void check_splitting(const Diagram& d, Outcome& out) {
  for (int k = 1; k <= 3; ++k) {
    const auto unreduced = khbn::homology_of(d, k, false, std::nullopt);
    const auto reduced = khbn::homology_of(d, k, true, d.effective_basepoint());
    if (!(unreduced == khbn::direct_sum(reduced, khbn::shifted(reduced, 0, -2))))
      out.fail("k=" + std::to_string(k) + ": unreduced differs from reduced + reduced{-2}");
  }
}

void check_basepoint(const Diagram& d, Outcome& out) {
  for (int k = 1; k <= 3; ++k) {
    const auto first = khbn::homology_of(d, k, true, 1);
    for (int arc = 2; arc <= d.arc_count(); ++arc)
      if (!(khbn::homology_of(d, k, true, arc) == first)) {
        out.fail("k=" + std::to_string(k) + ": basepoint " + std::to_string(arc) +
                 " differs from basepoint 1");
        break;
      }
  }
}

void check_triangle(const Diagram& d, Outcome& out) {
  const std::pair<int, int> orders[] = {{1, 1}, {1, 2}, {2, 1}};
  for (const auto& [a, b] : orders)
    for (bool reduced : {false, true}) {
      const auto rep = khbn::verify_triangle(d, reduced, std::nullopt, a, b);
      if (!rep.ok)
        out.fail("a=" + std::to_string(a) + " b=" + std::to_string(b) +
                 (reduced ? " reduced: " : " unreduced: ") + rep.message);
    }
}

void check_brcover(const Diagram& d, Outcome& out, bool all_basepoints) {
  std::vector<int> arcs;
  if (all_basepoints) {
    for (int a = 1; a <= d.arc_count(); ++a) arcs.push_back(a);
  } else {
    arcs.push_back(1);
    if (d.arc_count() > 1) arcs.push_back(d.arc_count());
  }
  for (int arc : arcs) {
    const auto rep = khbn::verify_theorem_main(d, arc);
    if (!rep.ok) out.fail("basepoint " + std::to_string(arc) + ": " + rep.message);
  }
}

void check_sseq(const Diagram& d, Outcome& out) {
  for (int k = 2; k <= 3; ++k)
    for (bool reduced : {false, true}) {
      khbn::BuildOptions o;
      o.k = k;
      o.reduced = reduced;
      if (reduced) o.basepoint = d.effective_basepoint();
      const auto c = khbn::build_complex(d, o);
      const auto f = khbn::u_adic_filtration(c.chains);
      const auto pages = khbn::filtration_pages(f);
      const auto m = khbn::bigraded_homology(c);
      const auto rep = khbn::verify_einfty_gr(pages, m);
      if (!rep.ok) out.fail(mode(k, reduced) + ": " + rep.message);
      for (std::size_t r = 1; r < pages.pages.size(); ++r)
        for (const auto& [pos, dim] : pages.pages[r]) {
          auto prev = pages.pages[r - 1].find(pos);
          if (prev == pages.pages[r - 1].end() || prev->second < dim)
            out.fail(mode(k, reduced) + ": page " + std::to_string(r) + " grows at " +
                     khbn::to_string(pos));
        }
      // filtration depth k-1: no differentials beyond d_{k-1}
      if (pages.r_stab > k)
        out.fail(mode(k, reduced) + ": stabilized only at page " + std::to_string(pages.r_stab));
    }
}

const std::vector<InvariantSpec>& reidemeister_specs() {
  static const std::vector<InvariantSpec> specs = [] {
    std::vector<InvariantSpec> v;
    for (const char* kind : {"kh", "bn2", "bn3"})
      for (bool reduced : {false, true}) {
        InvariantSpec s;
        s.kind = kind;
        s.reduced = reduced;
        v.push_back(s);
      }
    InvariantSpec e;
    e.kind = "brcover-e2";
    v.push_back(e);
    return v;
  }();
  return specs;
}

void check_reidemeister(const khbn::TableEntry& entry, const std::vector<khbn::TableEntry>& table,
                        Outcome& out) {
  const std::string base = base_name(entry.name);
  int partners = 0;
  for (const auto& other : table) {
    if (other.name == entry.name || base_name(other.name) != base) continue;
    ++partners;
    for (InvariantSpec spec : reidemeister_specs()) {
      InvariantSpec sa = spec;
      InvariantSpec sb = spec;
      sa.normalize(entry.diagram);
      sb.normalize(other.diagram);
      if (!(compute_module(entry.diagram, sa) == compute_module(other.diagram, sb)))
        out.fail(spec.kind + (spec.reduced ? " reduced" : "") + " differs from " + other.name);
    }
  }
  if (partners == 0 && out.ok) out.detail = "no partner diagram";
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"triangle", "euler",        "splitting",
                                              "basepoint", "brcover",     "sseq",
                                              "reidemeister", "dsquared"};
  return names;
}

bool is_check(const std::string& name) {
  const auto& n = check_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

std::string base_name(const std::string& name) { return name.substr(0, name.find('@')); }

CheckResult run_check(const std::string& check, const khbn::TableEntry& entry,
                      const std::vector<khbn::TableEntry>& table, const CheckOptions& opts) {
  Outcome out;
  const Diagram& d = entry.diagram;
  try {
    if (check == "dsquared")
      check_dsquared(d, out);
    else if (check == "euler")
      check_euler(d, out);
    else if (check == "splitting")
      check_splitting(d, out);
    else if (check == "basepoint")
      check_basepoint(d, out);
    else if (check == "triangle")
      check_triangle(d, out);
    else if (check == "brcover")
      check_brcover(d, out, opts.all_basepoints);
    else if (check == "sseq")
      check_sseq(d, out);
    else if (check == "reidemeister")
      check_reidemeister(entry, table, out);
    else
      throw khbn::Error(khbn::ErrorKind::MalformedSyntax, "unknown check '" + check + "'");
  } catch (const khbn::Error& e) {
    if (e.kind() == khbn::ErrorKind::MalformedSyntax) throw;
    out.fail(e.what());
  }
  return {entry.name, out.ok, out.detail};
}

std::vector<CheckResult> run_checks(const std::string& check,
                                    const std::vector<khbn::TableEntry>& entries,
                                    const std::vector<khbn::TableEntry>& table, int jobs,
                                    const CheckOptions& opts) {
  if (!is_check(check))
    throw khbn::Error(khbn::ErrorKind::MalformedSyntax, "unknown check '" + check + "'");
  std::vector<CheckResult> results(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++)
      results[i] = run_check(check, entries[i], table, opts);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(entries.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace khtool
