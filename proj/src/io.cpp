#include "marchenko/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace marchenko {

using nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::check: return "check";
    case Command::jacobi: return "jacobi";
    case Command::schrodinger: return "schrodinger";
    case Command::verify: return "verify";
    case Command::example: return "example";
  }
  return "";
}

std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::free: return "free";
    case Preset::delta1: return "delta1";
    case Preset::soliton: return "soliton";
    case Preset::delta0: return "delta0";
  }
  return "";
}

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& message) {
  throw Error(ErrorCode::SchemaError, message).with_pointer(pointer);
}

double number_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) schema_error("/" + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error("/" + key, "expected a finite number");
  return x;
}

double positive_at(const json& doc, const std::string& key) {
  const double x = number_at(doc, key);
  if (!(x > 0.0)) schema_error("/" + key, "expected a positive number");
  return x;
}

int positive_int_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000) {
    schema_error("/" + key, "expected a positive integer");
  }
  return static_cast<int>(v.get<long long>());
}

double element_number(const json& v, const std::string& pointer) {
  if (!v.is_number()) schema_error(pointer, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error(pointer, "expected a finite number");
  return x;
}

Measure parse_measure(const json& doc) {
  Measure m;
  if (doc.contains("atoms")) {
    const json& atoms = doc["atoms"];
    if (!atoms.is_array()) schema_error("/atoms", "expected an array");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string ptr = "/atoms/" + std::to_string(i);
      const json& a = atoms[i];
      if (!a.is_object()) schema_error(ptr, "expected an object");
      for (const char* key : {"t", "w"}) {
        if (!a.contains(key)) schema_error(ptr + "/" + key, "missing field");
      }
      for (const auto& [key, _] : a.items()) {
        if (key != "t" && key != "w") schema_error(ptr + "/" + key, "unknown field");
      }
      m.atoms.push_back({element_number(a["t"], ptr + "/t"), element_number(a["w"], ptr + "/w")});
    }
  }
  if (doc.contains("pieces")) {
    const json& pieces = doc["pieces"];
    if (!pieces.is_array()) schema_error("/pieces", "expected an array");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string ptr = "/pieces/" + std::to_string(i);
      const json& p = pieces[i];
      if (!p.is_object()) schema_error(ptr, "expected an object");
      for (const char* key : {"a", "b", "cheb"}) {
        if (!p.contains(key)) schema_error(ptr + "/" + key, "missing field");
      }
      for (const auto& [key, _] : p.items()) {
        if (key != "a" && key != "b" && key != "cheb") schema_error(ptr + "/" + key, "unknown field");
      }
      const json& c = p["cheb"];
      if (!c.is_array() || c.empty()) schema_error(ptr + "/cheb", "expected a nonempty array");
      Piece piece{element_number(p["a"], ptr + "/a"), element_number(p["b"], ptr + "/b"),
                  Eigen::VectorXd(static_cast<Eigen::Index>(c.size()))};
      for (std::size_t k = 0; k < c.size(); ++k) {
        piece.cheb[static_cast<Eigen::Index>(k)] =
            element_number(c[k], ptr + "/cheb/" + std::to_string(k));
      }
      m.pieces.push_back(std::move(piece));
    }
  }
  return m;
}

// Validation with a pointer to the offending entry.
void validate_with_pointer(const Measure& m, const Setting& setting) {
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    try {
      validate(Measure{{m.atoms[i]}, {}}, setting);
    } catch (Error& e) {
      throw e.with_pointer("/atoms/" + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < m.pieces.size(); ++i) {
    try {
      validate(Measure{{}, {m.pieces[i]}}, setting);
    } catch (Error& e) {
      throw e.with_pointer("/pieces/" + std::to_string(i));
    }
  }
  try {
    validate(m, setting);
  } catch (Error& e) {
    throw e.with_pointer("/pieces");
  }
}

void fill_defaults(Job& job) {
  if (job.x_max == 0.0) job.x_max = 0.8 / job.R;
  if (job.step == 0.0) job.step = 1.0 / (20.0 * job.R);
}

json measure_json(const Measure& m) {
  json atoms = json::array(), pieces = json::array();
  for (const Atom& a : m.atoms) atoms.push_back({{"t", a.t}, {"w", a.w}});
  for (const Piece& p : m.pieces) {
    json c = json::array();
    for (Eigen::Index k = 0; k < p.cheb.size(); ++k) c.push_back(p.cheb[k]);
    pieces.push_back({{"a", p.a}, {"b", p.b}, {"cheb", c}});
  }
  return {{"atoms", atoms}, {"pieces", pieces}};
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Finite numbers as-is, non-finite values as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json check_entry(double value, double tolerance, bool passed) {
  return {{"value", num(value)}, {"tolerance", tolerance}, {"passed", passed}};
}

// Fixed z-grid for oracle comparisons.
std::vector<cplx> oracle_grid() {
  std::vector<cplx> zs;
  for (double re : {-3.0, -1.5, 0.0, 1.5, 3.0})
    for (double im : {0.5, 1.0, 2.0, 4.0, 8.0}) zs.emplace_back(re, im);
  return zs;
}

std::vector<double> uniform_grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = n == 1 ? 0.5 * (a + b) : a + (b - a) * k / (n - 1);
  return g;
}

Setting job_setting(const Job& job) { return Setting::make(job.setting, job.R); }

RunResult run_check(const Job& job) {
  const Setting setting = job_setting(job);
  bool support_ok = true;
  std::string support_message;
  try {
    validate(job.measure, setting);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SupportViolation) throw;
    support_ok = false;
    support_message = e.what();
  }
  AdmissibilityReport rep = setting.kind == SettingKind::jacobi
                                ? admissible_discrete(job.measure, setting)
                                : admissible_continuous(job.measure, setting);
  rep.passed = rep.passed && support_ok;
  json full = to_json(rep, true);
  full["support_valid"] = support_ok;
  if (!support_ok) full["support_message"] = support_message;
  full["setting"] = to_string(job.setting);
  full["R"] = job.R;

  RunResult res;
  res.summary = full;
  res.summary.erase("samples");
  res.artifacts.push_back({"admissibility.json", to_json_text(full)});
  res.exit_code = rep.passed ? 0 : 2;
  return res;
}

RunResult run_jacobi(const Job& job) {
  if (job.setting != SettingKind::jacobi) {
    throw Error(ErrorCode::InvalidArgument, "the jacobi command needs setting \"jacobi\"")
        .with_pointer("/setting");
  }
  const Setting setting = job_setting(job);
  const JacobiWindow J = reconstruct(job.measure, setting, job.N);
  const FFunction F(job.measure, setting);

  double oracle = 0.0;
  for (cplx z : oracle_grid()) {
    for (Side side : {Side::plus, Side::minus}) {
      oracle = std::max(oracle, std::abs(m_oracle(J, z, side) - F.m(z, side)));
    }
  }
  const double sm2 = job.measure.empty() ? 0.0 : moment(job.measure, -2);
  const double s0 = job.measure.empty() ? 0.0 : moment(job.measure, 0);
  const double a0 = J.a_at(0), am1 = J.a_at(-1);
  const double a0_identity = std::abs(a0 * a0 - 1.0 / (1.0 - sm2));
  const double s0_identity = std::abs(s0 - (am1 * am1 - 1.0) / (a0 * a0));
  const auto [lo, hi] = numerical_range(J);

  json checks;
  checks["oracle_equivalence"] = check_entry(oracle, 1e-6, oracle <= 1e-6);
  checks["a0_identity"] = check_entry(a0_identity, 1e-12, a0_identity <= 1e-12);
  checks["sigma0_identity"] = check_entry(s0_identity, 1e-12, s0_identity <= 1e-12);
  bool passed = oracle <= 1e-6 && a0_identity <= 1e-12 && s0_identity <= 1e-12;

  json prop;
  try {
    const Prop311Report rep = prop311_check(J, setting.r);
    prop = {{"applicable", true}, {"passed", rep.passed}, {"worst_margin", num(rep.worst_margin)},
            {"worst_n", rep.worst_n}, {"skipped_pairs", rep.skipped}};
    passed = passed && rep.passed;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FreeOperator) throw;
    prop = {{"applicable", false}, {"reason", "free window"}};
  }

  RunResult res;
  res.summary = {{"command", "jacobi"},
                 {"N", job.N},
                 {"R", job.R},
                 {"a0", a0},
                 {"b0", J.b_at(0)},
                 {"a_minus1", am1},
                 {"checks", checks},
                 {"prop311", prop},
                 {"numerical_range", {lo, hi}},
                 {"passed", passed}};
  res.artifacts.push_back({"window.csv", to_csv(J)});
  res.artifacts.push_back({"jacobi_report.json", to_json_text(res.summary)});
  res.exit_code = passed ? 0 : 1;
  return res;
}

RunResult run_schrodinger(const Job& job) {
  if (job.setting != SettingKind::schrodinger) {
    throw Error(ErrorCode::InvalidArgument, "the schrodinger command needs setting \"schrodinger\"")
        .with_pointer("/setting");
  }
  const PotentialTrace trace = integrate_flow(job.measure, job.N, job.R, job.x_max, job.step);

  double riccati = 0.0;
  const double w0 = 0.3 / job.R;
  for (cplx w : {cplx(w0, 0), cplx(-w0, 0), cplx(0, w0), cplx(0, -w0)}) {
    const auto path = riccati_oracle(trace, w, job.x_max);
    const std::size_t offset = (trace.xs.size() - path.size()) / 2;
    for (std::size_t i = 0; i < path.size(); ++i) {
      riccati = std::max(riccati, std::abs(p_series(trace.states[offset + i], w) - path[i].p));
    }
  }
  double worst_bound = 0.0, min_hankel = INFINITY, max_V = -INFINITY;
  for (std::size_t i = 0; i < trace.xs.size(); ++i) {
    const MomentFlowState st{trace.xs[i], trace.states[i], job.N, job.R};
    worst_bound = std::max(worst_bound, moment_bounds_ok(st, 0).worst_ratio);
    min_hankel = std::min(min_hankel, hankel_min_eigenvalue(trace.states[i], job.R));
    max_V = std::max(max_V, trace.V[i]);
  }
  const std::size_t zero = trace.xs.size() / 2;

  json checks;
  checks["riccati_agreement"] = check_entry(riccati, 1e-6, riccati <= 1e-6);
  checks["moment_bound_ratio"] = check_entry(worst_bound, 1.0 + 1e-9, worst_bound <= 1.0 + 1e-9);
  checks["hankel_min_eigenvalue"] = check_entry(min_hankel, -1e-8, min_hankel >= -1e-8);
  checks["max_V"] = check_entry(max_V, 1e-9, max_V <= 1e-9);
  bool passed = true;
  for (const auto& [_, c] : checks.items()) passed = passed && c["passed"].get<bool>();

  RunResult res;
  res.summary = {{"command", "schrodinger"},
                 {"N", job.N},
                 {"R", job.R},
                 {"x_max", job.x_max},
                 {"step", trace.step},
                 {"V0", trace.V[zero]},
                 {"est_truncation_error", num(trace.est_truncation_error)},
                 {"certified_radius", trace.certified_radius},
                 {"beyond_certified_radius", job.x_max > trace.certified_radius},
                 {"checks", checks},
                 {"passed", passed}};
  res.artifacts.push_back({"trace.csv", to_csv(trace)});
  res.artifacts.push_back({"schrodinger_report.json", to_json_text(res.summary)});
  res.exit_code = passed ? 0 : 1;
  return res;
}

RunResult run_verify(const Job& job) {
  const Setting setting = job_setting(job);
  const FFunction F(job.measure, setting);
  const bool jac = setting.kind == SettingKind::jacobi;
  const std::vector<double> grid = jac ? uniform_grid(-1.5, 1.5, job.grid) : uniform_grid(0.5, 10.0, job.grid);
  const double residual = reflectionless_residual(job.measure, setting, grid, job.eta);

  json checks;
  checks["reflectionless_residual"] = check_entry(residual, 10.0 * job.eta, residual <= 10.0 * job.eta);
  if (jac) {
    const double y = 1e6;
    const double err = std::abs(y * F.m(cplx(0, y), Side::plus) - cplx(0, 1));
    checks["large_y_asymptotics"] = check_entry(err, 1e-4, err <= 1e-4);
  } else {
    const double y = 100.0 * job.R * job.R;
    const double mass = job.measure.empty() ? 0.0 : moment(job.measure, 0);
    const double err = std::abs(F.m(cplx(-y, 0), Side::plus) + std::sqrt(y));
    const double tol = 2.0 * mass / std::sqrt(y);
    checks["large_y_asymptotics"] = check_entry(err, tol, err <= tol);
  }
  bool passed = true;
  for (const auto& [_, c] : checks.items()) passed = passed && c["passed"].get<bool>();

  std::ostringstream csv;
  csv << "x,residual\n";
  for (double x : grid) {
    const cplx z(x, job.eta);
    csv << fmt(x) << ',' << fmt(std::abs(F.m(z, Side::plus) + std::conj(F.m(z, Side::minus)))) << '\n';
  }

  RunResult res;
  res.summary = {{"command", "verify"},
                 {"setting", to_string(job.setting)},
                 {"R", job.R},
                 {"eta", job.eta},
                 {"grid", job.grid},
                 {"checks", checks},
                 {"passed", passed}};
  res.artifacts.push_back({"residual.csv", csv.str()});
  res.artifacts.push_back({"verify_report.json", to_json_text(res.summary)});
  res.exit_code = passed ? 0 : 1;
  return res;
}

// Adds a sub-run under `key`, prefixing its artifacts.
void merge(RunResult& into, const std::string& key, RunResult part, bool& passed) {
  into.summary[key] = part.summary;
  for (Artifact& a : part.artifacts) into.artifacts.push_back({key + "_" + a.name, std::move(a.content)});
  passed = passed && part.exit_code == 0;
}

RunResult run_example(const Job& job) {
  Job base = job;
  base.command = Command::check;
  RunResult res;
  res.summary = {{"command", "example"}, {"name", to_string(job.preset)}};
  bool passed = true;
  json checks;
  const Setting setting = job_setting(job);

  switch (job.preset) {
    case Preset::free:
    case Preset::soliton: {
      merge(res, "check", run_check(base), passed);
      merge(res, "jacobi", run_jacobi(base), passed);
      merge(res, "verify", run_verify(base), passed);
      if (job.preset == Preset::soliton) {
        const JacobiWindow J = reconstruct(job.measure, setting, job.N);
        const double a0_err = std::abs(J.a_at(0) - 1.0 / std::sqrt(job.epsilon));
        checks["a0_closed_form"] = check_entry(a0_err, 1e-8, a0_err <= 1e-8);
        const std::vector<double> roots = boundary_roots(job.measure);
        const double expected = -1.0 - 1.0 / job.epsilon;
        double root_err = INFINITY;
        for (double e : roots) root_err = std::min(root_err, std::abs(e - expected));
        checks["eigenvalue"] = check_entry(root_err, 1e-8, root_err <= 1e-8);
        res.summary["eigenvalues"] = roots;
      }
      break;
    }
    case Preset::delta1: {
      RunResult chk = run_check(base);
      const bool failed_as_expected = chk.exit_code == 2;
      chk.exit_code = failed_as_expected ? 0 : 1;
      merge(res, "check", std::move(chk), passed);
      checks["inadmissible"] = {{"passed", failed_as_expected}};

      const FFunction F(job.measure, setting);
      double m_err = 0.0;
      for (int k = 0; k < 100; ++k) {
        const cplx z(-4.0 + 8.0 * (k % 10) / 9.0, 0.05 * std::pow(1.8, k / 10));
        const cplx exact = 0.5 * (std::sqrt((z - 2.0) / (z + 2.0)) - 1.0);
        const cplx herglotz = exact.imag() > 0.0 ? exact : 0.5 * (-std::sqrt((z - 2.0) / (z + 2.0)) - 1.0);
        m_err = std::max(m_err, std::abs(F.m(z, Side::plus) - herglotz));
      }
      checks["m_closed_form"] = check_entry(m_err, 1e-10, m_err <= 1e-10);

      std::ostringstream csv;
      csv << "x,density,exact\n";
      double d_err = 0.0;
      for (double x : uniform_grid(-1.9, 1.9, job.grid)) {
        const DensityEstimate d = stieltjes_density(F, Side::plus, x);
        const double exact = std::sqrt((2.0 - x) / (2.0 + x)) / (2.0 * std::numbers::pi);
        d_err = std::max(d_err, std::abs(d.value - exact));
        csv << fmt(x) << ',' << fmt(d.value) << ',' << fmt(exact) << '\n';
      }
      checks["density_closed_form"] = check_entry(d_err, 1e-4, d_err <= 1e-4);
      res.artifacts.push_back({"density.csv", csv.str()});

      const KreinStep xi[] = {{-2.0, 2.0, 0.5}};
      double h_err = 0.0;
      for (cplx z : oracle_grid()) {
        h_err = std::max(h_err, std::abs(herglotz_exp(xi, 1.0, z) - (F.m(z, Side::plus) + F.m(z, Side::minus))));
      }
      checks["exponential_representation"] = check_entry(h_err, 1e-8, h_err <= 1e-8);

      const Recurrence half = lanczos(spectral_measure(job.measure, setting, Side::plus), job.N + 1);
      std::ostringstream hl;
      hl << "n,a_n,b_n\n";
      for (int n = 1; n <= job.N; ++n) {
        hl << n << ',' << fmt(std::sqrt(half.beta[n])) << ',' << fmt(half.alpha[n - 1]) << '\n';
      }
      res.artifacts.push_back({"half_line.csv", hl.str()});
      merge(res, "verify", run_verify(base), passed);
      break;
    }
    case Preset::delta0: {
      merge(res, "check", run_check(base), passed);
      merge(res, "schrodinger", run_schrodinger(base), passed);
      merge(res, "verify", run_verify(base), passed);
      const PotentialTrace trace = integrate_flow(job.measure, job.N, job.R, job.x_max, job.step);
      const double v0 = trace.V[trace.xs.size() / 2];
      const double v0_err = std::abs(v0 + 2.0 * job.mass);
      checks["V0"] = check_entry(v0_err, 1e-12, v0_err <= 1e-12);
      break;
    }
  }
  for (const auto& [_, c] : checks.items()) passed = passed && c["passed"].get<bool>();
  res.summary["checks"] = checks;
  res.summary["passed"] = passed;
  res.artifacts.push_back({"example_report.json", to_json_text(res.summary)});
  res.exit_code = passed ? 0 : 1;
  return res;
}

const std::set<std::string> kKnownKeys = {"command", "setting", "R",    "atoms", "pieces",
                                          "name",    "epsilon", "mass", "N",     "eta",
                                          "grid",    "x_max",   "step", "out"};

}  // namespace

bool operator==(const Job& a, const Job& b) {
  auto same_measure = [](const Measure& x, const Measure& y) {
    if (x.atoms.size() != y.atoms.size() || x.pieces.size() != y.pieces.size()) return false;
    for (std::size_t i = 0; i < x.atoms.size(); ++i) {
      if (x.atoms[i].t != y.atoms[i].t || x.atoms[i].w != y.atoms[i].w) return false;
    }
    for (std::size_t i = 0; i < x.pieces.size(); ++i) {
      const Piece &p = x.pieces[i], &q = y.pieces[i];
      if (p.a != q.a || p.b != q.b || p.cheb.size() != q.cheb.size() || p.cheb != q.cheb) return false;
    }
    return true;
  };
  return a.command == b.command && a.setting == b.setting && a.R == b.R &&
         same_measure(a.measure, b.measure) && a.preset == b.preset && a.epsilon == b.epsilon &&
         a.mass == b.mass && a.N == b.N && a.eta == b.eta && a.grid == b.grid &&
         a.x_max == b.x_max && a.step == b.step && a.out == b.out;
}

Job preset_job(Preset preset, double epsilon, double mass) {
  Job job;
  job.command = Command::example;
  job.preset = preset;
  job.epsilon = epsilon;
  job.mass = mass;
  switch (preset) {
    case Preset::free:
      job.setting = SettingKind::jacobi;
      job.R = 2.0;
      break;
    case Preset::delta1:
      job.setting = SettingKind::jacobi;
      job.R = 2.5;
      job.measure.atoms = {{1.0, 1.0}};
      break;
    case Preset::soliton:
      if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw Error(ErrorCode::SchemaError, "soliton needs 0 < epsilon < 1").with_pointer("/epsilon");
      }
      job.setting = SettingKind::jacobi;
      job.R = 2.0 + 1.0 / epsilon;
      job.measure.atoms = {{1.0, 1.0 - epsilon}};
      break;
    case Preset::delta0:
      if (!(mass > 0.0)) {
        throw Error(ErrorCode::SchemaError, "delta0 needs mass > 0").with_pointer("/mass");
      }
      job.setting = SettingKind::schrodinger;
      job.R = std::max(2.0, 1.25 * std::sqrt(mass));
      job.measure.atoms = {{0.0, mass}};
      break;
  }
  fill_defaults(job);
  return job;
}

Job parse_input(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what()).with_pointer("");
  }
  return parse_input(doc);
}

Job parse_input(const json& doc) {
  if (!doc.is_object()) schema_error("", "expected a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kKnownKeys.count(key)) schema_error("/" + key, "unknown field");
  }
  if (!doc.contains("command")) schema_error("/command", "missing field");
  if (!doc["command"].is_string()) schema_error("/command", "expected a string");
  const std::string cmd = doc["command"].get<std::string>();

  Job job;
  if (cmd == "example") {
    if (!doc.contains("name") || !doc["name"].is_string()) schema_error("/name", "missing preset name");
    const std::string name = doc["name"].get<std::string>();
    Preset preset;
    if (name == "free") preset = Preset::free;
    else if (name == "delta1") preset = Preset::delta1;
    else if (name == "soliton") preset = Preset::soliton;
    else if (name == "delta0") preset = Preset::delta0;
    else schema_error("/name", "unknown preset \"" + name + "\"");
    for (const char* key : {"setting", "R", "atoms", "pieces"}) {
      if (doc.contains(key)) schema_error(std::string("/") + key, "presets fix the measure");
    }
    const double eps = doc.contains("epsilon") ? number_at(doc, "epsilon") : 0.25;
    const double mass = doc.contains("mass") ? number_at(doc, "mass") : 1.0;
    job = preset_job(preset, eps, mass);
    job.x_max = job.step = 0.0;
  } else {
    if (cmd == "check") job.command = Command::check;
    else if (cmd == "jacobi") job.command = Command::jacobi;
    else if (cmd == "schrodinger") job.command = Command::schrodinger;
    else if (cmd == "verify") job.command = Command::verify;
    else throw Error(ErrorCode::UnknownCommand, "unknown command \"" + cmd + "\"").with_pointer("/command");
    for (const char* key : {"name", "epsilon", "mass"}) {
      if (doc.contains(key)) schema_error(std::string("/") + key, "only example jobs take this field");
    }
    if (!doc.contains("setting")) schema_error("/setting", "missing field");
    if (!doc["setting"].is_string()) schema_error("/setting", "expected a string");
    const std::string s = doc["setting"].get<std::string>();
    if (s == "jacobi") job.setting = SettingKind::jacobi;
    else if (s == "schrodinger") job.setting = SettingKind::schrodinger;
    else schema_error("/setting", "expected \"jacobi\" or \"schrodinger\"");
    if (!doc.contains("R")) schema_error("/R", "missing field");
    job.R = number_at(doc, "R");
    Setting setting;
    try {
      setting = Setting::make(job.setting, job.R);
    } catch (Error& e) {
      throw e.with_pointer("/R");
    }
    job.measure = parse_measure(doc);
    try {
      validate_with_pointer(job.measure, setting);
    } catch (const Error& e) {
      // A check job reports a support violation as a failed admissibility.
      if (job.command != Command::check || e.code() != ErrorCode::SupportViolation) throw;
    }
  }

  if (doc.contains("N")) job.N = positive_int_at(doc, "N");
  if (doc.contains("eta")) job.eta = positive_at(doc, "eta");
  if (doc.contains("grid")) job.grid = positive_int_at(doc, "grid");
  if (doc.contains("x_max")) job.x_max = positive_at(doc, "x_max");
  if (doc.contains("step")) job.step = positive_at(doc, "step");
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) schema_error("/out", "expected a string");
    job.out = doc["out"].get<std::string>();
  }
  if (job.setting == SettingKind::schrodinger && job.N < 4) schema_error("/N", "moment flow needs N >= 4");
  fill_defaults(job);
  return job;
}

json job_to_json(const Job& job) {
  json doc = {{"command", to_string(job.command)}, {"N", job.N},         {"eta", job.eta},
              {"grid", job.grid},                  {"x_max", job.x_max}, {"step", job.step}};
  if (!job.out.empty()) doc["out"] = job.out;
  if (job.command == Command::example) {
    doc["name"] = to_string(job.preset);
    doc["epsilon"] = job.epsilon;
    doc["mass"] = job.mass;
  } else {
    doc["setting"] = to_string(job.setting);
    doc["R"] = job.R;
    const json m = measure_json(job.measure);
    doc["atoms"] = m["atoms"];
    doc["pieces"] = m["pieces"];
  }
  return doc;
}

RunResult run(const Job& job) {
  switch (job.command) {
    case Command::check: return run_check(job);
    case Command::jacobi: return run_jacobi(job);
    case Command::schrodinger: return run_schrodinger(job);
    case Command::verify: return run_verify(job);
    case Command::example: return run_example(job);
  }
  throw Error(ErrorCode::UnknownCommand, "unknown command");
}

std::string to_csv(const JacobiWindow& J) {
  std::ostringstream out;
  out << "n,a_n,b_n\n";
  for (int n = J.n_min; n <= J.n_max; ++n) out << n << ',' << fmt(J.a_at(n)) << ',' << fmt(J.b_at(n)) << '\n';
  return out.str();
}

std::string to_csv(const PotentialTrace& trace) {
  const int cols = std::min(trace.N_used, 8);
  std::ostringstream out;
  out << "x,V";
  for (int k = 0; k <= cols; ++k) out << ",sigma_" << k;
  out << '\n';
  for (std::size_t i = 0; i < trace.xs.size(); ++i) {
    out << fmt(trace.xs[i]) << ',' << fmt(trace.V[i]);
    for (int k = 0; k <= cols; ++k) out << ',' << fmt(trace.states[i][k]);
    out << '\n';
  }
  return out.str();
}

std::string to_json_text(const json& j) { return j.dump(2) + "\n"; }

json to_json(const AdmissibilityReport& rep, bool with_samples) {
  json j = {{"passed", rep.passed},
            {"min_value", num(rep.min_value)},
            {"argmin", num(rep.argmin)},
            {"heuristic", rep.heuristic}};
  if (with_samples) {
    json samples = json::array();
    for (const auto& s : rep.samples) samples.push_back({num(s.parameter), num(s.value)});
    j["samples"] = samples;
  }
  return j;
}

void emit(const Artifact& artifact, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path path = fs::path(dir) / artifact.name;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << artifact.content;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

json error_json(const Error& e) {
  json j = {{"error", to_string(e.code())}, {"message", e.what()}};
  if (!e.pointer().empty() || e.code() == ErrorCode::SchemaError) j["pointer"] = e.pointer();
  if (std::isfinite(e.location())) j["location"] = e.location();
  if (e.index() >= 0) j["index"] = e.index();
  return j;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::AdmissibilityRequired:
    case ErrorCode::InadmissibleSigma:
      return 2;
    default:
      return 1;
  }
}

}  // namespace marchenko
