#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "khbn/brcover.hpp"
#include "khbn/errors.hpp"

namespace khtool {

using khbn::Bidegree;
using khbn::Error;
using khbn::ErrorKind;
using khbn::ModuleDecomp;

void InvariantSpec::normalize(const khbn::Diagram& d) {
  if (kind == "kh") {
    k = 1;
  } else if (kind == "bn2") {
    k = 2;
  } else if (kind == "bn3") {
    k = 3;
  } else if (kind == "bnk") {
    if (k < 1 || k > khbn::kMaxOrder)
      throw Error(ErrorKind::MalformedSyntax, "--k must be between 1 and " +
                                                  std::to_string(khbn::kMaxOrder) + ", got " +
                                                  std::to_string(k));
  } else if (kind == "brcover-e2") {
    k = 2;
    reduced = true;
  } else {
    throw Error(ErrorKind::MalformedSyntax, "unknown invariant '" + kind + "'");
  }
  if (!reduced && basepoint)
    throw Error(ErrorKind::MalformedSyntax, "--basepoint requires --reduced");
  if (reduced) {
    if (!basepoint) basepoint = d.effective_basepoint();
    if (*basepoint < 1 || *basepoint > d.arc_count())
      throw Error(ErrorKind::InvalidBasepoint,
                  "basepoint " + std::to_string(*basepoint) + " is not an arc label");
  }
}

std::string InvariantSpec::cache_tag() const {
  std::string s = kind + "-k" + std::to_string(k);
  s += reduced ? "-r" + std::to_string(basepoint.value_or(1)) : std::string("-u");
  return s;
}

ModuleDecomp compute_module(const khbn::Diagram& d, const InvariantSpec& spec, bool force) {
  if (spec.kind == "brcover-e2") {
    const auto e1 = khbn::build_e1_complex(d, spec.basepoint.value_or(1), force);
    return khbn::shifted(khbn::bigraded_homology(e1.total), -d.n_minus(),
                         d.n_plus() - 2 * d.n_minus());
  }
  khbn::BuildOptions o;
  o.k = spec.k;
  o.reduced = spec.reduced;
  o.basepoint = spec.basepoint;
  o.force = force;
  return khbn::bigraded_homology(khbn::build_complex(d, o));
}

InvariantReport compute_report(const khbn::Diagram& d, InvariantSpec spec, bool force) {
  spec.normalize(d);
  const auto start = std::chrono::steady_clock::now();
  InvariantReport r;
  const khbn::Diagram plain = d.with_basepoint(std::nullopt);
  r.canonical = khbn::canonical_form(plain);
  r.hash = khbn::diagram_hash(plain);
  r.crossings = d.crossing_count();
  r.components = d.component_count();
  r.spec = spec;
  r.module = compute_module(d, spec, force);
  r.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string poincare_text(const ModuleDecomp& m) {
  std::string out;
  for (const auto& [b, h] : m.groups) {
    std::string term;
    if (h.dim != 1) term = std::to_string(h.dim);
    auto var = [&](const char* name, int e) {
      if (e == 0) return;
      if (!term.empty()) term += " ";
      term += name;
      if (e != 1) term += "^" + std::to_string(e);
    };
    var("t", b.i);
    var("q", b.j);
    if (term.empty()) term = "1";
    if (!out.empty()) out += " + ";
    out += term;
  }
  return out.empty() ? "0" : out;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json module_to_json(const ModuleDecomp& m) {
  Json groups = Json::object();
  for (const auto& [b, h] : m.groups) {
    Json summands = Json::object();
    for (std::size_t l = 1; l < h.summands.size(); ++l)
      if (h.summands[l] != 0) summands[std::to_string(l)] = h.summands[l];
    groups[std::to_string(b.i) + "," + std::to_string(b.j)] = {{"dim", h.dim},
                                                               {"summands", summands}};
  }
  Json filt = Json::object();
  for (const auto& [key, n] : m.filtration_dims) {
    const auto [p, i, j] = key;
    filt[std::to_string(p) + "," + std::to_string(i) + "," + std::to_string(j)] = n;
  }
  return {{"k", m.k}, {"groups", groups}, {"filtration", filt}};
}

namespace {

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
  return out;
}

}  // namespace

ModuleDecomp module_from_json(const Json& j) {
  ModuleDecomp m;
  m.k = j.at("k").get<int>();
  for (const auto& [key, val] : j.at("groups").items()) {
    const auto ij = split_ints(key);
    if (ij.size() != 2) throw Error(ErrorKind::MalformedSyntax, "bad bidegree key '" + key + "'");
    khbn::BidegreeHomology h;
    h.dim = val.at("dim").get<int>();
    h.summands.assign(m.k + 1, 0);
    for (const auto& [l, mult] : val.at("summands").items()) {
      const int len = std::stoi(l);
      if (len < 1 || len > m.k)
        throw Error(ErrorKind::MalformedSyntax, "summand length " + l + " outside 1..k");
      h.summands[len] = mult.get<int>();
    }
    m.groups[{ij[0], ij[1]}] = h;
  }
  if (j.contains("filtration"))
    for (const auto& [key, val] : j.at("filtration").items()) {
      const auto pij = split_ints(key);
      if (pij.size() != 3)
        throw Error(ErrorKind::MalformedSyntax, "bad filtration key '" + key + "'");
      m.filtration_dims[{pij[0], pij[1], pij[2]}] = val.get<int>();
    }
  return m;
}

Json to_json(const InvariantReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["diagram"] = {{"canonical", r.canonical},
                  {"hash", hash_hex(r.hash)},
                  {"crossings", r.crossings},
                  {"components", r.components}};
  j["invariant"] = {{"kind", r.spec.kind},
                    {"k", r.spec.k},
                    {"reduced", r.spec.reduced},
                    {"basepoint", r.spec.basepoint ? Json(*r.spec.basepoint) : Json(nullptr)}};
  j["module"] = module_to_json(r.module);
  j["total_dim"] = r.module.total_dim();
  j["u_rank"] = r.module.u_rank();
  j["poincare"] = poincare_text(r.module);
  j["euler"] = khbn::euler_characteristic(r.module).to_string();
  if (r.timing_ms) j["timing_ms"] = *r.timing_ms;
  return j;
}

InvariantReport report_from_json(const Json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion)
    throw Error(ErrorKind::MalformedSyntax, "unsupported schema_version");
  InvariantReport r;
  const auto& d = j.at("diagram");
  r.canonical = d.at("canonical").get<std::string>();
  r.hash = std::stoull(d.at("hash").get<std::string>(), nullptr, 16);
  r.crossings = d.at("crossings").get<int>();
  r.components = d.at("components").get<int>();
  const auto& inv = j.at("invariant");
  r.spec.kind = inv.at("kind").get<std::string>();
  r.spec.k = inv.at("k").get<int>();
  r.spec.reduced = inv.at("reduced").get<bool>();
  if (!inv.at("basepoint").is_null()) r.spec.basepoint = inv.at("basepoint").get<int>();
  r.module = module_from_json(j.at("module"));
  if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms").get<double>();
  return r;
}

std::string format_table(const InvariantReport& r, const std::string& title) {
  std::ostringstream os;
  os << title << ": " << r.spec.kind << " (k=" << r.spec.k << ")";
  if (r.spec.reduced) os << " reduced at arc " << r.spec.basepoint.value_or(1);
  os << "\n";
  os << "     i     j   dim  structure\n";
  // targets of u-arrows, so the lower ends of longer summands are annotated
  std::map<Bidegree, std::vector<Bidegree>> arrows_into;
  for (const auto& [b, h] : r.module.groups)
    for (std::size_t l = 2; l < h.summands.size(); ++l)
      if (h.summands[l] > 0)
        for (std::size_t s = 1; s < l; ++s)
          arrows_into[{b.i, b.j - 2 * static_cast<int>(s)}].push_back(
              {b.i, b.j - 2 * static_cast<int>(s - 1)});
  for (auto it = r.module.groups.rbegin(); it != r.module.groups.rend(); ++it) {
    const auto& [b, h] = *it;
    char line[64];
    std::snprintf(line, sizeof line, "%6d %5d %5d  ", b.i, b.j, h.dim);
    os << line;
    std::vector<std::string> parts;
    for (std::size_t l = 1; l < h.summands.size(); ++l) {
      if (h.summands[l] == 0) continue;
      std::string p = h.summands[l] > 1 ? std::to_string(h.summands[l]) + "x " : "";
      if (l == 1) {
        p += "F2[u]/u";
      } else {
        p += "F2[u]/u^" + std::to_string(l) + " -u-> (";
        p += std::to_string(b.i) + "," + std::to_string(b.j - 2) + ")";
      }
      parts.push_back(p);
    }
    if (auto a = arrows_into.find(b); a != arrows_into.end())
      for (const auto& src : a->second)
        parts.push_back("u-image of " + khbn::to_string(src));
    for (std::size_t p = 0; p < parts.size(); ++p) os << (p ? "; " : "") << parts[p];
    os << "\n";
  }
  os << "total dimension " << r.module.total_dim() << ", u-rank " << r.module.u_rank() << "\n";
  return os.str();
}

std::filesystem::path ReportCache::file_name(std::uint64_t hash, const InvariantSpec& spec) const {
  return dir_ / (hash_hex(hash) + "-" + spec.cache_tag() + ".json");
}

std::optional<InvariantReport> ReportCache::load(const khbn::Diagram& d,
                                                 const InvariantSpec& spec) const {
  const khbn::Diagram plain = d.with_basepoint(std::nullopt);
  const auto path = file_name(khbn::diagram_hash(plain), spec);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    InvariantReport r = report_from_json(Json::parse(in));
    if (r.canonical != khbn::canonical_form(plain) || r.spec.cache_tag() != spec.cache_tag())
      return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void ReportCache::store(const InvariantReport& r) const {
  std::filesystem::create_directories(dir_);
  InvariantReport copy = r;
  copy.timing_ms.reset();
  const auto path = file_name(r.hash, r.spec);
  // unique per writer so concurrent jobs never share a temporary
  std::ostringstream suffix;
  suffix << ".tmp" << std::this_thread::get_id();
  auto tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp);
    out << to_json(copy).dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace khtool
