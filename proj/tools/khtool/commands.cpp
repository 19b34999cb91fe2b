#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "checks.hpp"
#include "khbn/errors.hpp"
#include "khbn/linkdiag.hpp"
#include "khbn/sseq.hpp"
#include "report.hpp"

#ifndef KHBN_DATA_DIR
#define KHBN_DATA_DIR "data"
#endif

namespace khtool {

using khbn::Error;
using khbn::ErrorKind;

namespace {

struct Source {
  std::string pd;
  std::string braid;
  int strands = 0;
  std::string name;
  std::string table_path;

  bool given() const { return !pd.empty() || !braid.empty() || !name.empty(); }
};

void add_source_options(CLI::App* cmd, Source& s) {
  auto* pd = cmd->add_option("--pd", s.pd, "PD code, or U for the unknot");
  auto* braid = cmd->add_option("--braid", s.braid, "braid word, e.g. \"1 1 1\" or \"1,-2\"");
  auto* name = cmd->add_option("--name", s.name, "entry of the link table");
  cmd->add_option("--strands", s.strands, "strand count for --braid")->needs(braid);
  pd->excludes(braid)->excludes(name);
  braid->excludes(name);
  cmd->add_option("--table", s.table_path, "link table file (default: bundled table)");
}

std::string table_path(const Source& s) {
  if (!s.table_path.empty()) return s.table_path;
  return std::string(KHBN_DATA_DIR) + "/links.tsv";
}

std::vector<khbn::TableEntry> load_table(const Source& s) {
  const std::string path = table_path(s);
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedSyntax, "cannot open link table '" + path + "'");
  return khbn::parse_link_table(in);
}

khbn::TableEntry resolve_source(const Source& s) {
  if (!s.pd.empty()) return {"pd", 0, khbn::parse_pd(s.pd)};
  if (!s.braid.empty()) {
    if (s.strands < 1)
      throw Error(ErrorKind::MalformedSyntax, "--braid requires --strands <n> with n >= 1");
    const auto word = parse_braid_word(s.braid);
    return {"braid", 0, khbn::from_braid(word, s.strands)};
  }
  if (!s.name.empty()) {
    const auto table = load_table(s);
    const auto* e = khbn::find_entry(table, s.name);
    if (!e) throw Error(ErrorKind::MalformedSyntax, "no table entry named '" + s.name + "'");
    return *e;
  }
  throw Error(ErrorKind::MalformedSyntax, "one of --pd, --braid or --name is required");
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ResourceLimit:
      return kExitResourceLimit;
    case ErrorKind::MalformedSyntax:
    case ErrorKind::ArcMultiplicity:
    case ErrorKind::NonPlanarOrInconsistentOrientation:
    case ErrorKind::EmptyWord:
    case ErrorKind::LetterOutOfRange:
    case ErrorKind::UnusedStrand:
    case ErrorKind::StateLengthMismatch:
    case ErrorKind::InvalidBasepoint:
    case ErrorKind::BasepointMissing:
      return kExitUsage;
    default:
      return kExitCheckFailed;
  }
}

// ---------------------------------------------------------------------------

struct ComputeArgs {
  Source source;
  std::string invariant = "bn2";
  int k = 0;
  bool reduced = false;
  int basepoint = 0;
  std::string format = "json";
  bool force = false;
  std::string cache_dir;
  bool timing = false;
};

int cmd_compute(const ComputeArgs& a, std::ostream& out) {
  const khbn::TableEntry entry = resolve_source(a.source);
  InvariantSpec spec;
  spec.kind = a.invariant;
  spec.reduced = a.reduced;
  if (a.basepoint != 0) spec.basepoint = a.basepoint;
  if (a.k != 0) {
    if (a.invariant != "bnk")
      throw Error(ErrorKind::MalformedSyntax, "--k is only meaningful with --invariant bnk");
    spec.k = a.k;
  } else if (a.invariant == "bnk") {
    throw Error(ErrorKind::MalformedSyntax, "--invariant bnk requires --k");
  }
  spec.normalize(entry.diagram);
  if (entry.diagram.crossing_count() > khbn::kCrossingLimit && !a.force)
    throw Error(ErrorKind::ResourceLimit,
                std::to_string(entry.diagram.crossing_count()) +
                    " crossings exceeds the limit of " + std::to_string(khbn::kCrossingLimit) +
                    "; pass --force to compute anyway");

  std::string cache_dir = a.cache_dir;
  if (cache_dir.empty())
    if (const char* env = std::getenv("KHTOOL_CACHE_DIR")) cache_dir = env;

  InvariantReport report;
  std::optional<InvariantReport> cached;
  const auto start = std::chrono::steady_clock::now();
  if (!cache_dir.empty()) cached = ReportCache(cache_dir).load(entry.diagram, spec);
  if (cached) {
    report = *cached;
    report.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
  } else {
    report = compute_report(entry.diagram, spec, a.force);
    if (!cache_dir.empty()) ReportCache(cache_dir).store(report);
  }
  if (!a.timing) report.timing_ms.reset();

  if (a.format == "json") {
    out << to_json(report).dump(2) << "\n";
  } else if (a.format == "table") {
    out << format_table(report, entry.name);
  } else {
    out << poincare_text(report.module) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string check;
  Source source;
  bool all_table = false;
  int max_crossings = -1;
  int jobs = 1;
  bool all_basepoints = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.check != "all" && !is_check(a.check))
    throw Error(ErrorKind::MalformedSyntax, "unknown check '" + a.check + "'");
  if (a.all_table == a.source.given())
    throw Error(ErrorKind::MalformedSyntax,
                "give exactly one of --pd, --braid, --name or --all-table");

  std::vector<khbn::TableEntry> table;
  try {
    table = load_table(a.source);
  } catch (const Error&) {
    if (a.all_table || !a.source.name.empty()) throw;
  }
  std::vector<khbn::TableEntry> entries;
  if (a.all_table) {
    for (const auto& e : table)
      if (a.max_crossings < 0 || e.diagram.crossing_count() <= a.max_crossings)
        entries.push_back(e);
  } else {
    entries.push_back(resolve_source(a.source));
  }

  const std::vector<std::string> checks =
      a.check == "all" ? check_names() : std::vector<std::string>{a.check};
  CheckOptions opts;
  opts.all_basepoints = a.all_basepoints;

  Json summary;
  summary["schema_version"] = kSchemaVersion;
  Json per_check = Json::array();
  bool all_ok = true;
  for (const auto& check : checks) {
    std::vector<khbn::TableEntry> subset;
    for (const auto& e : entries)
      // pairs are compared from the duplicate's side only
      if (check != "reidemeister" || !a.all_table || e.name.find('@') != std::string::npos)
        subset.push_back(e);
    const auto results = run_checks(check, subset, table, a.jobs, opts);
    int passed = 0;
    Json rows = Json::array();
    for (const auto& r : results) {
      passed += r.ok ? 1 : 0;
      Json row = {{"entry", r.entry}, {"ok", r.ok}};
      if (!r.detail.empty()) row["detail"] = r.detail;
      rows.push_back(row);
    }
    const int failed = static_cast<int>(results.size()) - passed;
    all_ok = all_ok && failed == 0;
    per_check.push_back(
        {{"check", check}, {"passed", passed}, {"failed", failed}, {"results", rows}});
  }
  summary["ok"] = all_ok;
  summary["checks"] = per_check;
  out << summary.dump(2) << "\n";
  return all_ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct SseqArgs {
  Source source;
  int k = 2;
  bool reduced = false;
  int basepoint = 0;
  int r_max = -1;
  std::string format = "table";
  bool force = false;
  bool inject_fault = false;
};

int cmd_sseq(const SseqArgs& a, std::ostream& out) {
  const khbn::TableEntry entry = resolve_source(a.source);
  if (a.k < 1 || a.k > khbn::kMaxOrder)
    throw Error(ErrorKind::MalformedSyntax, "--k must be between 1 and " +
                                                std::to_string(khbn::kMaxOrder));
  if (!a.reduced && a.basepoint != 0)
    throw Error(ErrorKind::MalformedSyntax, "--basepoint requires --reduced");
  khbn::BuildOptions o;
  o.k = a.k;
  o.reduced = a.reduced;
  o.force = a.force;
  if (a.reduced) o.basepoint = a.basepoint != 0 ? a.basepoint : entry.diagram.effective_basepoint();
  const auto c = khbn::build_complex(entry.diagram, o);
  const auto f = khbn::u_adic_filtration(c.chains);
  const auto pages =
      khbn::filtration_pages(f, a.r_max >= 0 ? std::optional<int>(a.r_max) : std::nullopt);
  auto module = khbn::bigraded_homology(c);
  if (a.inject_fault) {
    // deliberately wrong associated graded, to exercise the failing verdict
    if (module.filtration_dims.empty())
      module.filtration_dims[{0, 0, 0}] = 1;
    else
      module.filtration_dims.begin()->second += 1;
  }
  const auto verdict = khbn::verify_einfty_gr(pages, module);

  if (a.format == "json") {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["diagram"] = {{"canonical", khbn::canonical_form(entry.diagram.with_basepoint(std::nullopt))},
                    {"hash", hash_hex(khbn::diagram_hash(entry.diagram.with_basepoint(std::nullopt)))}};
    j["k"] = a.k;
    j["reduced"] = a.reduced;
    j["basepoint"] = o.basepoint ? Json(*o.basepoint) : Json(nullptr);
    Json pj = Json::array();
    for (std::size_t r = 0; r < pages.pages.size(); ++r) {
      Json dims = Json::object();
      for (const auto& [pos, d] : pages.pages[r])
        dims[std::to_string(pos.p) + "," + std::to_string(pos.n) + "," +
             std::to_string(pos.weight)] = d;
      pj.push_back({{"r", r}, {"total", pages.total(static_cast<int>(r))}, {"dims", dims}});
    }
    j["pages"] = pj;
    j["r_stab"] = pages.r_stab;
    j["einfty_matches_gr"] = verdict.ok;
    if (!verdict.ok) j["mismatch"] = verdict.message;
    out << j.dump(2) << "\n";
  } else {
    out << entry.name << ": u-adic spectral sequence, k=" << a.k
        << (a.reduced ? " reduced" : " unreduced") << "\n";
    for (std::size_t r = 0; r < pages.pages.size(); ++r) {
      out << "E_" << r << "  total " << pages.total(static_cast<int>(r)) << "\n";
      for (const auto& [pos, d] : pages.pages[r])
        out << "    p=" << pos.p << " n=" << pos.n << " q=" << pos.weight << "  dim " << d
            << "\n";
    }
    out << "stabilizes at E_" << pages.r_stab << "\n";
    out << "E_inf vs associated graded: " << (verdict.ok ? "pass" : "FAIL " + verdict.message)
        << "\n";
  }
  return verdict.ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

std::vector<int> parse_braid_word(const std::string& text) {
  std::vector<int> word;
  std::string token;
  std::size_t token_start = 0;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || v == 0)
      throw Error(ErrorKind::MalformedSyntax, "bad braid letter '" + token + "' at offset " +
                                                  std::to_string(token_start));
    word.push_back(v);
    token.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == ',' || ch == ' ' || ch == '\t') {
      flush();
    } else {
      if (token.empty()) token_start = i;
      token += ch;
    }
  }
  flush();
  return word;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Khovanov and Bar-Natan homology over F2[u]/u^k", "khtool"};
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "compute a homology module");
  add_source_options(compute, ca.source);
  compute->add_option("--invariant", ca.invariant, "kh | bn2 | bn3 | bnk | brcover-e2")
      ->check(CLI::IsMember({"kh", "bn2", "bn3", "bnk", "brcover-e2"}));
  compute->add_option("--k", ca.k, "truncation order for --invariant bnk");
  compute->add_flag("--reduced", ca.reduced, "reduced theory");
  compute->add_option("--basepoint", ca.basepoint, "arc carrying the basepoint (default 1)");
  compute->add_option("--format", ca.format, "json | table | poincare")
      ->check(CLI::IsMember({"json", "table", "poincare"}));
  compute->add_flag("--force", ca.force, "allow more than 14 crossings");
  compute->add_option("--cache-dir", ca.cache_dir, "report cache (or $KHTOOL_CACHE_DIR)");
  compute->add_flag("--timing", ca.timing, "include timing_ms in the report");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run a property check");
  verify->add_option("check", va.check, "check name or all")->required();
  add_source_options(verify, va.source);
  verify->add_flag("--all-table", va.all_table, "every table entry");
  verify->add_option("--max-crossings", va.max_crossings, "skip larger table entries");
  verify->add_option("--jobs", va.jobs, "worker threads")->check(CLI::PositiveNumber);
  verify->add_flag("--all-basepoints", va.all_basepoints, "brcover: try every arc");

  SseqArgs sa;
  auto* sseq = app.add_subcommand("sseq", "pages of the u-adic spectral sequence");
  add_source_options(sseq, sa.source);
  sseq->add_option("--k", sa.k, "truncation order (default 2)");
  sseq->add_flag("--reduced", sa.reduced, "reduced theory");
  sseq->add_option("--basepoint", sa.basepoint, "arc carrying the basepoint");
  sseq->add_option("--r-max", sa.r_max, "last page to compute");
  sseq->add_option("--format", sa.format, "table | json")
      ->check(CLI::IsMember({"table", "json"}));
  sseq->add_flag("--force", sa.force, "allow more than 14 crossings");
  sseq->add_flag("--inject-fault", sa.inject_fault, "corrupt the comparison (harness test)")
      ->group("");

  std::vector<std::string> argv_store{"khtool"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(ca, out);
    if (*verify) return cmd_verify(va, out);
    if (*sseq) return cmd_sseq(sa, out);
  } catch (const Error& e) {
    err << "khtool: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "khtool: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace khtool
