#include "friable/report.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "friable/errors.hpp"

namespace friable {

using json = nlohmann::ordered_json;

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::bound_lo:
      return "bound-lo";
    case Kind::bound_hi:
      return "bound-hi";
    case Kind::estimate:
      return "estimate";
    case Kind::exact:
      return "exact";
  }
  return "exact";
}

Kind kind_from_name(const std::string& s) {
  if (s == "bound-lo") return Kind::bound_lo;
  if (s == "bound-hi") return Kind::bound_hi;
  if (s == "estimate") return Kind::estimate;
  if (s == "exact") return Kind::exact;
  throw ArgumentError("unknown kind tag '" + s + "'");
}

Report::Report() {
  for (const char* n : kSectionNames) sections.push_back({n, {}});
}

Section& Report::section(const std::string& name) {
  for (auto& s : sections)
    if (s.name == name) return s;
  throw ArgumentError("unknown report section '" + name + "'");
}

const Section& Report::section(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return s;
  throw ArgumentError("unknown report section '" + name + "'");
}

void Report::add(const std::string& section_name, const std::string& field, double value, Kind kind, bool log10) {
  section(section_name).fields.push_back({field, value, kind, log10});
}

const Field* Report::find(const std::string& section_name, const std::string& field) const {
  for (const auto& f : section(section_name).fields)
    if (f.name == field) return &f;
  return nullptr;
}

std::string Report::to_json(int indent) const {
  json root;
  for (const auto& s : sections) {
    json obj = json::object();
    for (const auto& f : s.fields) {
      json v;
      v[f.log10 ? "log10" : "value"] = f.value;
      v["kind"] = kind_name(f.kind);
      obj[f.name] = v;
    }
    root[s.name] = obj;
  }
  root["provenance"] = {{"version", kSchemaVersion}, {"command", command}, {"mode", mode}, {"notes", notes}};
  return root.dump(indent);
}

Report Report::from_json(const std::string& text) {
  const json root = json::parse(text);
  Report r;
  for (auto& s : r.sections) {
    if (!root.contains(s.name)) continue;
    for (const auto& [key, v] : root.at(s.name).items()) {
      Field f;
      f.name = key;
      f.kind = kind_from_name(v.at("kind").get<std::string>());
      f.log10 = v.contains("log10");
      f.value = v.at(f.log10 ? "log10" : "value").get<double>();
      s.fields.push_back(f);
    }
  }
  const json& prov = root.at("provenance");
  if (prov.at("version").get<std::string>() != kSchemaVersion) throw ArgumentError("unsupported report version");
  r.command = prov.at("command").get<std::string>();
  r.mode = prov.at("mode").get<std::string>();
  r.notes = prov.at("notes").get<std::vector<std::string>>();
  return r;
}

namespace {

std::string format_value(const Field& f) {
  if (f.log10) return LogScaled::from_log10(f.value).scientific(5);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", f.value);
  return buf;
}

}  // namespace

std::string Report::render_table() const {
  std::ostringstream out;
  out << command << " (" << mode << ")\n";
  for (const auto& s : sections) {
    if (s.fields.empty()) continue;
    out << "\n[" << s.name << "]\n";
    for (const auto& f : s.fields) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-14s %22s  %s\n", f.name.c_str(), format_value(f).c_str(), kind_name(f.kind));
      out << line;
    }
  }
  for (const auto& n : notes) out << "\nnote: " << n << '\n';
  return out.str();
}

void add_input(Report& r, const SmoothParams& p) {
  r.add("input", "x", p.log_x / std::numbers::ln10, Kind::exact, true);
  r.add("input", "y", std::log10(p.y), Kind::exact, true);
  r.add("input", "u", p.u(), Kind::exact);
}

void add_saddle(Report& r, const SaddleData& s) {
  r.add("saddle", "alpha", s.alpha, Kind::exact);
  r.add("saddle", "sigma1*", s.sigma1_star, Kind::bound_hi);
  r.add("saddle", "zeta.lo", s.zeta_log.lo / std::numbers::ln10, Kind::bound_lo, true);
  r.add("saddle", "zeta.hi", s.zeta_log.hi / std::numbers::ln10, Kind::bound_hi, true);
  for (int j = 0; j < 5; ++j) {
    const std::string n = "sigma" + std::to_string(j);
    r.add("saddle", n + ".lo", s.sigma[j].lo, Kind::bound_lo);
    r.add("saddle", n + ".hi", s.sigma[j].hi, Kind::bound_hi);
  }
  r.add("saddle", "sigma5+", s.sigma5_upper, Kind::bound_hi);
  r.add("saddle", "w0", s.w0, Kind::exact);
}

void add_run_params(Report& r, const RunParams& run) {
  r.add("params", "T", run.T, Kind::exact);
  r.add("params", "d", run.d, Kind::exact);
  r.add("params", "z", run.z(), Kind::exact);
  r.add("params", "L", run.L, Kind::exact);
  r.add("params", "w0", run.w0, Kind::exact);
  r.add("params", "mesh", run.quad.mesh, Kind::exact);
}

void add_bounds(Report& r, const PsiBounds& b) {
  const Breakpoints& bp = b.breakpoints;
  r.add("breakpoints", "T3", bp.T3, Kind::estimate);
  r.add("breakpoints", "T2", bp.T2, Kind::estimate);
  r.add("breakpoints", "Z-", bp.Zminus, Kind::estimate);
  r.add("breakpoints", "Z+", bp.Zplus, Kind::estimate);
  r.add("breakpoints", "T1", bp.T1, Kind::estimate);
  r.add("breakpoints", "T0", bp.T0, Kind::estimate);
  if (bp.phase_cutoff) r.add("breakpoints", "T0 phase cutoff", 1.0, Kind::exact);
  r.add("integrals", "J0-", b.J0.minus, Kind::bound_lo);
  r.add("integrals", "J0+", b.J0.plus, Kind::bound_hi);
  r.add("integrals", "J1", b.J1.value, Kind::bound_hi);
  r.add("integrals", "J2", b.J2.value, Kind::bound_hi);
  r.add("integrals", "T^-d", b.terms.T_power, Kind::exact);
  r.add("integrals", "J2 term", b.terms.J2_term, Kind::bound_hi);
  r.add("integrals", "lower paren", b.terms.lower_paren, Kind::bound_lo);
  r.add("integrals", "upper paren", b.terms.upper_paren, Kind::bound_hi);
  r.add("bounds", "psi-", b.psi_lo.log10(), Kind::bound_lo, true);
  r.add("bounds", "psi+", b.psi_hi.log10(), Kind::bound_hi, true);
  if (b.lower_degenerate) r.notes.push_back("lower parenthesis not positive; psi- is the KP bound");
}

void add_references(Report& r, const SmoothParams& p, const SaddleData& s, const PrimeTable& table,
                    const RhoTable& rho) {
  r.add("references", "KP", kp_lower(p).log10(), Kind::bound_lo, true);
  r.add("references", "R", rankin_upper(p, s).log10(), Kind::bound_hi, true);
  try {
    r.add("references", "GS", gs_upper(p, s, table).log10(), Kind::bound_hi, true);
  } catch (const ValidityError& e) {
    r.notes.push_back(std::string("GS skipped: ") + e.what());
  }
  try {
    r.add("references", "DD", dd_term(p, rho).log10(), Kind::estimate, true);
  } catch (const ArgumentError& e) {
    r.notes.push_back(std::string("DD skipped: ") + e.what());
  }
  r.add("references", "HT", ht_term(p, s).log10(), Kind::estimate, true);
}

}  // namespace friable
