// Command-line front end: bound, estimate, saddle, exact, rho.
#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>

#include "friable/bounds.hpp"
#include "friable/errors.hpp"
#include "friable/oracle.hpp"
#include "friable/primes.hpp"
#include "friable/reference.hpp"
#include "friable/report.hpp"
#include "friable/saddle.hpp"

using namespace friable;

namespace {

struct Magnitude {
  double log10 = 0.0;
  std::optional<std::uint64_t> integer;  // set when the value is an exact integer below 2^63
};

// Accepts "<mantissa>e<exponent>", plain decimals and integers. The value
// goes straight to log10 so that 1e500 never materializes.
Magnitude parse_magnitude(const std::string& text) {
  static const std::regex form(R"(^\s*([0-9]*\.?[0-9]+)(?:[eE]([+-]?[0-9]+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, form)) throw ArgumentError("cannot parse magnitude '" + text + "'");
  const double mant = std::stod(m[1].str());
  const long exp = m[2].matched ? std::stol(m[2].str()) : 0;
  if (!(mant > 0)) throw ArgumentError("magnitude must be positive: '" + text + "'");
  Magnitude out;
  out.log10 = std::log10(mant) + static_cast<double>(exp);
  if (exp >= 0 && out.log10 < 18.9) {
    const long double v = static_cast<long double>(mant) * std::pow(10.0L, exp);
    if (v == std::floor(v)) out.integer = static_cast<std::uint64_t>(v);
  }
  return out;
}

// Integers keep their exact value so that y matches sieve limits.
double magnitude_value(const Magnitude& m) {
  return m.integer ? static_cast<double>(*m.integer) : std::pow(10.0, m.log10);
}

double magnitude_ln(const Magnitude& m) {
  return m.integer ? std::log(static_cast<double>(*m.integer)) : m.log10 * std::numbers::ln10;
}

struct Options {
  std::string command;
  std::string x, y;
  std::optional<double> log10x, log10y;
  std::optional<double> T, d;
  double L = 1e6;
  double w0 = 179424673.0;
  std::optional<double> mesh;
  double u = 0.0;
  bool fast = false;
  bool rigorous = false;
  bool with_bounds = false;
  unsigned threads = 0;
  std::string format = "table";
  std::string cache_dir;
};

SmoothParams smooth_params(const Options& o) {
  SmoothParams p;
  if (o.log10x)
    p.log_x = *o.log10x * std::numbers::ln10;
  else if (!o.x.empty())
    p.log_x = magnitude_ln(parse_magnitude(o.x));
  else
    throw ArgumentError("x is required (--x or --log10x)");
  if (o.log10y)
    p.y = std::pow(10.0, *o.log10y);
  else if (!o.y.empty())
    p.y = magnitude_value(parse_magnitude(o.y));
  else
    throw ArgumentError("y is required (--y or --log10y)");
  p.validate();
  return p;
}

std::string mode_label(const Options& o) {
  if (o.fast) return "smoke, non-certified";
  return o.rigorous ? "rigorous" : "fast-quadrature";
}

RunParams base_run(const Options& o) {
  RunParams run;
  run.L = o.L;
  run.w0 = o.w0;
  if (o.fast) {
    // Smoke profile: small exact ranges for sub-minute runs.
    run.w0 = std::min(run.w0, 1e6);
    run.L = std::min(run.L, 1e5);
  }
  run.quad.mode = o.rigorous ? QuadMode::rigorous : QuadMode::fast;
  if (o.mesh) run.quad.mesh = *o.mesh;
  run.quad.threads = o.threads;
  return run;
}

PrimeTable primes_for(const SmoothParams& p, const RunParams& run, const std::string& cache_dir) {
  const double need = std::max(std::min(std::max(run.w0, run.L), std::floor(p.y)), 2000.0);
  return sieve_cached(static_cast<std::uint64_t>(need), cache_dir);
}

Report run_command(const Options& o) {
  Report r;
  r.command = o.command;
  r.mode = mode_label(o);

  if (o.command == "exact") {
    const Magnitude x = parse_magnitude(o.x.empty() ? "0" : o.x), y = parse_magnitude(o.y.empty() ? "0" : o.y);
    if (!x.integer || !y.integer) throw ArgumentError("exact needs integer x and y");
    r.mode = "exact";
    r.add("input", "x", static_cast<double>(*x.integer), Kind::exact);
    r.add("input", "y", static_cast<double>(*y.integer), Kind::exact);
    r.add("bounds", "psi", static_cast<double>(psi_exact(*x.integer, *y.integer)), Kind::exact);
    return r;
  }
  if (o.command == "rho") {
    const RhoTable rho(std::max(40.0, std::ceil(o.u) + 1));
    r.mode = "estimate";
    r.add("input", "u", o.u, Kind::exact);
    r.add("references", "rho", dickman_rho(o.u, rho), Kind::estimate);
    return r;
  }

  const SmoothParams p = smooth_params(o);
  RunParams run = base_run(o);
  const PrimeTable table = primes_for(p, run, o.cache_dir);
  const SaddleData s = compute_saddle(p, run.w0, table);
  add_input(r, p);
  add_saddle(r, s);
  if (o.command == "saddle") return r;

  const bool want_bounds = o.command == "bound" || o.with_bounds;
  if (want_bounds) {
    if (!o.T || !o.d) {
      const RunParams suggested = suggest_params(p, s, table, run);
      run.T = o.T.value_or(suggested.T);
      run.d = o.d.value_or(suggested.d);
    } else {
      run.T = *o.T;
      run.d = *o.d;
    }
    add_run_params(r, run);
    add_bounds(r, compute_bounds(p, run, s, table));
  }
  if (o.command == "estimate") add_references(r, p, s, table, RhoTable(std::max(40.0, std::ceil(p.u()) + 1)));
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds and reference estimates for counts of smooth numbers"};
  Options o;
  app.add_option("command", o.command, "bound | estimate | saddle | exact | rho")
      ->required()
      ->check(CLI::IsMember({"bound", "estimate", "saddle", "exact", "rho"}));
  app.add_option("--x", o.x, "x as <mantissa>e<exponent>, e.g. 1e100");
  app.add_option("--y", o.y, "y as <mantissa>e<exponent>, e.g. 1e15");
  app.add_option("--log10x", o.log10x, "base-10 logarithm of x");
  app.add_option("--log10y", o.log10y, "base-10 logarithm of y");
  app.add_option("--T", o.T, "truncation height T");
  app.add_option("--d", o.d, "short-interval exponent d in (0,1)");
  app.add_option("--L", o.L, "direct prime-sum cutoff for W")->capture_default_str();
  app.add_option("--w0", o.w0, "exact prime-sum cutoff for the sigma_j")->capture_default_str();
  app.add_option("--mesh", o.mesh, "quadrature cell width (rigorous) or panel width (fast)");
  app.add_option("--u", o.u, "argument for the rho command");
  app.add_flag("--fast", o.fast, "smoke profile with small w0 and L; output is not certified");
  app.add_flag("--rigorous", o.rigorous, "rigorous cell quadrature for J0, J1, J2 (slow)");
  app.add_flag("--bounds", o.with_bounds, "estimate: also compute psi bounds");
  app.add_option("--threads", o.threads, "worker cap (0 = all cores)");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--cache-dir", o.cache_dir, "directory for the on-disk prime cache");
  app.set_config("--config", "", "key=value file presetting any of the options above");
  CLI11_PARSE(app, argc, argv);

  if (o.fast && o.rigorous) {
    std::cerr << "error: --fast and --rigorous are mutually exclusive\n";
    return 2;
  }
  try {
    const Report r = run_command(o);
    std::cout << (o.format == "json" ? r.to_json() + "\n" : r.render_table());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
