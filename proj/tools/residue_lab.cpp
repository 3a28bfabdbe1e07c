// residue_lab: beta functions, residues and conformal energies from a shape config.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rlab/config.hpp"
#include "rlab/conformal.hpp"
#include "rlab/continuation.hpp"
#include "rlab/mobius.hpp"
#include "rlab/oracles.hpp"
#include "rlab/parallel.hpp"
#include "rlab/residues.hpp"
#include "rlab/verify.hpp"

using namespace rlab;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericError = 3 };

struct RunConfig {
  std::string shape;
  std::string cmd;
  std::string z_list;
  std::string sweep;
  std::string weight = "one";
  int order = 0;
  double delta = 0.0;
  int fit_degree = 0;
  double tol = 1e-9;
  std::string out;
  std::string format = "csv";
  int workers = 0;
};

std::string g17(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // no "-0" in tables
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Range {
  double a0, a1, step;
  std::vector<double> values() const {
    std::vector<double> v;
    // integer stepping, so the grid does not drift
    long count = std::lround(std::floor((a1 - a0) / step + 1e-9));
    for (long i = 0; i <= count; ++i) v.push_back(a0 + static_cast<double>(i) * step);
    return v;
  }
};

Range parse_range(const std::string& s) {
  Range r{};
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> r.a0 >> c1 >> r.a1 >> c2 >> r.step) || c1 != ':' || c2 != ':' || !(is >> std::ws).eof())
    throw ConfigError("--sweep expects a0:a1:step, got '" + s + "'");
  if (!(r.step > 0.0) || r.a1 < r.a0) throw ConfigError("--sweep needs a0 <= a1 and step > 0");
  return r;
}

std::vector<double> parse_z_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (tok.empty() || used != tok.size()) throw ConfigError("bad value in --z: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

void validate(const RunConfig& c) {
  if (c.format != "csv" && c.format != "report") throw ConfigError("--format must be csv or report");
  if (c.order < 0 || c.fit_degree < 0 || c.delta < 0.0 || c.workers < 0)
    throw ConfigError("--order, --delta, --fit-degree and --workers must be non-negative");
  if (!(c.tol > 0.0)) throw ConfigError("--tol must be positive");
  bool needs_shape = c.cmd == "beta" || c.cmd == "residues" || c.cmd == "gw" || c.cmd == "profile";
  if (needs_shape && c.shape.empty()) throw ConfigError("--cmd " + c.cmd + " needs --shape");
  if (c.cmd == "beta" && c.z_list.empty() && c.sweep.empty()) throw ConfigError("--cmd beta needs --z or --sweep");
  try {
    weight_from_name(c.weight);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!c.z_list.empty()) parse_z_list(c.z_list);
  if (!c.sweep.empty()) parse_range(c.sweep);
}

ProfileOptions profile_options(const RunConfig& c) {
  ProfileOptions o;
  o.delta = c.delta;
  o.fit_degree = c.fit_degree;
  o.workers = c.workers;
  return o;
}

// key/value report lines share one writer
struct Report {
  std::ostream& os;
  void kv(const std::string& k, double v) { os << k << "=" << g17(v) << "\n"; }
  void kv(const std::string& k, const std::string& v) { os << k << "=" << v << "\n"; }
};

int cmd_beta(const RunConfig& c, const ManifoldSpec& spec, std::ostream& os) {
  std::vector<double> zs = c.z_list.empty() ? parse_range(c.sweep).values() : parse_z_list(c.z_list);
  WeightKind wk = weight_from_name(c.weight);
  Meromorphic f;
  if (spec.is_body && wk == WeightKind::Relative)
    f = relative_function(spec, profile_options(c));
  else if (spec.is_body && wk == WeightKind::One)
    f = body_function(spec, profile_options(c));
  else
    f = beta_function(spec, Weight::of(wk), profile_options(c));
  if (c.format == "csv") os << "z,re,im,method,pole,residue\n";
  for (double z : zs) {
    std::string re, im, method, pole, res;
    try {
      BetaEvaluation e = f.eval(cplx(z, 0.0));
      re = g17(e.value.real());
      im = g17(e.value.imag());
      method = e.method.empty() ? f.method : e.method;
    } catch (const PoleProximity& p) {
      method = "pole";
      pole = g17(p.pole);
      res = g17(p.residue);
    }
    if (c.format == "csv") {
      os << g17(z) << "," << re << "," << im << "," << method << "," << pole << "," << res << "\n";
    } else {
      os << "z=" << g17(z) << " method=" << method;
      if (method == "pole")
        os << " pole=" << pole << " residue=" << res;
      else
        os << " re=" << re << " im=" << im;
      os << "\n";
    }
  }
  return kOk;
}

int cmd_residues(const RunConfig& c, const ManifoldSpec& spec, std::ostream& os) {
  WeightKind wk = weight_from_name(c.weight);
  ResidueReport r;
  if (spec.is_polygon()) {
    auto p = polygon_knot_residues(spec.polygon);
    r.shape = "polygon";
    r.m = 1;
    r.n = spec.n;
    r.add(-1, p.r1, "closed");
    r.add(-2, p.r2, "closed");
  } else if (spec.is_body) {
    r = wk == WeightKind::Relative ? relative_residues(spec, c.order) : body_residues(spec, c.order);
  } else if (wk == WeightKind::One) {
    r = closed_residues(spec, c.order);
  }
  // profile residues for comparison
  if (!spec.is_polygon()) {
    Meromorphic f = spec.is_body ? (wk == WeightKind::Relative ? relative_function(spec, profile_options(c))
                                                               : body_function(spec, profile_options(c)))
                                 : beta_function(spec, Weight::of(wk), profile_options(c));
    if (r.shape.empty()) {
      r.shape = spec.kind;
      r.m = spec.m;
      r.n = spec.n;
    }
    for (double pole : f.poles)
      if (pole >= f.min_valid_re) r.add(pole, f.residue(pole), "profile");
  }
  if (c.format == "report") {
    os << r.to_text();
  } else {
    os << "pole,value,method,error\n";
    for (const auto& e : r.entries)
      os << g17(e.pole) << "," << g17(e.value) << "," << e.method << "," << g17(e.error) << "\n";
  }
  return kOk;
}

int cmd_gw(const RunConfig& c, const ManifoldSpec& spec, std::ostream& os) {
  if (spec.m != 4 || !spec.hypersurface() || spec.is_body)
    throw ConfigError("--cmd gw needs a closed 4-dimensional hypersurface");
  EnergyBreakdown e = gw_identity(spec, c.order);
  const std::pair<const char*, double> rows[] = {
      {"gw", e.gw},       {"weyl", e.weyl},   {"chern", e.chern},
      {"z_energy", e.z_energy}, {"r8", e.r8}, {"r8_nu", e.r8_nu},
      {"r8_modified", e.r8_modified}, {"r8_nu_modified", e.r8_nu_modified}, {"residual", e.residual}};
  if (c.format == "csv") os << "key,value\n";
  for (auto& [k, v] : rows) {
    if (c.format == "csv")
      os << k << "," << g17(v) << "\n";
    else
      Report{os}.kv(k, v);
  }
  return kOk;
}

int cmd_profile(const RunConfig& c, const ManifoldSpec& spec, std::ostream& os) {
  write_profile(os, distance_profile(spec, Weight::of(weight_from_name(c.weight)), profile_options(c)));
  return kOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& os) {
  Range r = c.sweep.empty() ? Range{0.5, 3.0, 0.05} : parse_range(c.sweep);
  struct Row {
    double a, gw, r8, nu;
  };
  std::vector<Row> rows;
  for (double a : r.values()) {
    if (!(a > 0.0)) throw ConfigError("--sweep values must be positive");
    ManifoldSpec s = make_spheroid(a);
    rows.push_back({a, graham_witten(s, c.order), residue_m8(s, c.order, false).raw,
                    nu_residue_m8(s, c.order, false).raw});
  }
  if (c.format == "csv") {
    os << "a,gw,r8,r8_nu\n";
    for (auto& w : rows) os << g17(w.a) << "," << g17(w.gw) << "," << g17(w.r8) << "," << g17(w.nu) << "\n";
  } else {
    for (auto& w : rows)
      os << "a=" << g17(w.a) << " gw=" << g17(w.gw) << " r8=" << g17(w.r8) << " r8_nu=" << g17(w.nu) << "\n";
  }
  // the round sphere is the minimum, and the energy grows away from it
  std::size_t imin = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].gw < rows[imin].gw) imin = i;
  bool ok = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    bool left = i <= imin;
    double step = rows[i].gw - rows[i - 1].gw;
    if (left ? step > c.tol * rows[i].gw : step < -c.tol * rows[i].gw) ok = false;
  }
  for (auto& w : rows)
    if (std::abs(w.a - 1.0) < 1e-12 && w.gw > rows[imin].gw * (1 + c.tol)) ok = false;
  std::cerr << "sweep: minimum gw at a=" << g17(rows[imin].a) << (ok ? ", monotone on both sides\n" : ", NOT monotone\n");
  return ok ? kOk : kVerifyFailed;
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
  VerifyOptions vo;
  auto results = run_verify(vo);
  if (c.format == "report") {
    os << verify_report(results);
  } else {
    os << "criterion,title,check,pass,value,reference,deviation,tolerance,note\n";
    for (auto& r : results) {
      for (auto& l : r.lines)
        os << r.id << ",\"" << r.title << "\",\"" << l.name << "\"," << (l.pass ? 1 : 0) << "," << g17(l.value) << ","
           << g17(l.reference) << "," << g17(l.deviation) << "," << g17(l.tolerance) << ",\"" << l.note << "\"\n";
      if (!r.error.empty()) os << r.id << ",\"" << r.title << "\",error,0,,,,,\"" << r.error << "\"\n";
    }
  }
  if (const CheckResult* bad = first_failure(results)) {
    std::cerr << "verification failed: criterion " << bad->id << " (" << bad->title << ")";
    for (auto& l : bad->lines)
      if (!l.pass) {
        std::cerr << ": " << l.name;
        break;
      }
    std::cerr << "\n";
    return kVerifyFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"residue_lab: meromorphic Riesz energies, residues and conformal energies"};
  RunConfig c;
  if (const char* env = std::getenv("RESIDUE_LAB_WORKERS")) {
    try {
      c.workers = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: RESIDUE_LAB_WORKERS is not an integer\n";
      return kConfigError;
    }
  }
  app.add_option("--shape", c.shape, "shape config (JSON)");
  app.add_option("--cmd", c.cmd, "command")
      ->required()
      ->check(CLI::IsMember({"beta", "residues", "gw", "verify", "sweep", "profile"}));
  app.add_option("--z", c.z_list, "comma separated z values");
  app.add_option("--sweep", c.sweep, "a0:a1:step (z range for beta, axis ratio for sweep)");
  app.add_option("--weight", c.weight, "one | nu | normal | relative | relative-flipped");
  app.add_option("--order", c.order, "quadrature order, 0 picks one");
  app.add_option("--delta", c.delta, "fit window, 0 uses 0.2 * reach");
  app.add_option("--fit-degree", c.fit_degree, "even powers in the small-t fit, 0 picks one");
  app.add_option("--tol", c.tol, "relative slack of the sweep monotonicity check");
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--format", c.format, "csv | report");
  app.add_option("--workers", c.workers, "worker threads (default RESIDUE_LAB_WORKERS, then all cores)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    validate(c);
    set_default_workers(c.workers);
    ManifoldSpec spec;
    if (!c.shape.empty()) spec = load_shape(c.shape);

    std::ostringstream buf;
    int code = kOk;
    if (c.cmd == "beta") code = cmd_beta(c, spec, buf);
    else if (c.cmd == "residues") code = cmd_residues(c, spec, buf);
    else if (c.cmd == "gw") code = cmd_gw(c, spec, buf);
    else if (c.cmd == "profile") code = cmd_profile(c, spec, buf);
    else if (c.cmd == "sweep") code = cmd_sweep(c, buf);
    else code = cmd_verify(c, buf);

    if (c.out.empty()) {
      std::cout << buf.str();
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!(f << buf.str())) throw ConfigError("cannot write " + c.out);
    }
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const PoleProximity& e) {
    std::cerr << "pole guard: " << e.what() << "\n";
    return kNumericError;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  }
}
