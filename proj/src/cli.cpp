#include "levy/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "levy/classify.hpp"
#include "levy/config.hpp"
#include "levy/error.hpp"
#include "levy/fracmoment.hpp"
#include "levy/scale.hpp"
#include "levy/simulate.hpp"
#include "levy/verify.hpp"

namespace levy {
namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// {"value", "method", "error"}; an infinite value is null with "infinite": true.
json tagged(double value, const std::string& method, std::optional<double> error = std::nullopt) {
  json j;
  j["value"] = finite_or_null(value);
  if (std::isinf(value)) j["infinite"] = true;
  j["method"] = method;
  j["error"] = error ? json(*error) : json(nullptr);
  return j;
}

std::optional<double> accepted_error(const ScaleEvaluator& ev, Method m) {
  if (m == Method::Inversion || m == Method::Quadrature) return ev.options().inversion_tolerance;
  return std::nullopt;
}

struct Options {
  std::string model_path;
  double kappa = 0.0;
  double x = 0.0;
  std::string q_text;
  std::string x_text;
  std::string method = "analytic";
  std::size_t n_paths = 100000;
  std::uint64_t seed = 1;
  double t_max = 1e4;
  double step = 1e-3;
  unsigned workers = 0;
  bool json_output = false;
  std::string out_path;
  std::string suite;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write output file '" + path + "'");
  f << text;
  if (!f) throw InputError("failed writing output file '" + path + "'");
}

SimConfig sim_config(const Options& o) {
  SimConfig cfg;
  cfg.n_paths = o.n_paths;
  cfg.seed = o.seed;
  cfg.t_max = o.t_max;
  cfg.diffusion_step = o.step;
  cfg.workers = o.workers;
  return cfg;
}

void warn_sampler(const PassageSampleSet& s, RunReport& r) {
  if (s.approximate) {
    r.warnings.push_back("Euler sampler is biased; passage-frequency change under step halving: " +
                         (s.bias_estimate ? num(*s.bias_estimate) : std::string("n/a")));
  }
  if (s.censored_count > 0) {
    r.warnings.push_back(std::to_string(s.censored_count) + " of " + std::to_string(s.n_paths) +
                         " paths had no passage by t_max = " + num(s.t_max) +
                         " (censored; includes paths that never pass)");
  }
}

RunReport cmd_analyze(const Options& o, const LevyModel& model) {
  RunReport r{"analyze", model.digest(), {}, {}, {}};
  r.inputs = {{"model", model.describe()}, {"kappa", o.kappa}, {"x", o.x}};
  const MomentVerdict v = classify_moment(model, o.kappa, o.x);
  r.outputs["regime"] = to_string(regime(model));
  r.outputs["mean"] = tagged(mean(model), "closed-form");
  r.outputs["verdict"] = json::parse(v.to_json());
  if (regime(model) == Regime::DriftsDown) {
    r.outputs["exponential_moment_abscissa"] = tagged(exponential_moment_abscissa(model), "closed-form");
  }
  if (v.verdict == Verdict::Unknown) r.warnings.push_back("no criterion decides this order: " + v.detail);
  return r;
}

RunReport cmd_moment(const Options& o, const LevyModel& model) {
  RunReport r{"moment", model.digest(), {}, {}, {}};
  r.inputs = {{"model", model.describe()}, {"kappa", o.kappa}, {"x", o.x}, {"method", o.method}};
  const MomentVerdict v = classify_moment(model, o.kappa, o.x);
  r.outputs["verdict"] = json::parse(v.to_json());

  std::optional<FractionalValue> analytic;
  if (o.method == "analytic" || o.method == "both") {
    const ScaleEvaluator ev(model);
    analytic = passage_moment_detailed(ev, o.x, o.kappa);
    json a = tagged(analytic->value, "quadrature", analytic->divergent ? std::nullopt
                                                                        : std::optional(analytic->error));
    a["transform_method"] = to_string(ev.method());
    r.outputs["analytic"] = a;
    if (ev.experimental()) r.warnings.push_back("stable-family inversion is experimental");
    const bool contradiction = (v.verdict == Verdict::Finite && analytic->divergent) ||
                               (v.verdict == Verdict::Infinite && !analytic->divergent);
    if (contradiction) {
      r.warnings.push_back(std::string("classifier says ") + to_string(v.verdict) +
                           " but the numerical moment is " + num(analytic->value));
    }
  }
  std::optional<EmpiricalMoment> mc;
  if (o.method == "mc" || o.method == "both") {
    r.inputs["n_paths"] = o.n_paths;
    r.inputs["seed"] = o.seed;
    r.inputs["t_max"] = o.t_max;
    const PassageSampleSet s = sample_passage_times(model, o.x, sim_config(o));
    mc = empirical_moment(s, o.kappa);
    json m = tagged(mc->estimate, "monte-carlo", mc->std_error);
    m["std_error"] = mc->std_error;
    m["n_finite"] = mc->n;
    m["divergence_suspected"] = mc->divergence_suspected;
    m["censored"] = s.censored_count;
    r.outputs["monte_carlo"] = m;
    warn_sampler(s, r);
    if (mc->divergence_suspected) r.warnings.push_back("empirical moment looks divergent (one sample dominates or the tail index is <= kappa)");
  }
  if (analytic && mc) {
    if (analytic->divergent) {
      r.outputs["agreement_se"] = nullptr;
    } else {
      const double se = mc->std_error > 0.0 ? mc->std_error : std::numeric_limits<double>::min();
      r.outputs["agreement_se"] = std::abs(analytic->value - mc->estimate) / se;
    }
  }
  return r;
}

RunReport cmd_lt(const Options& o, const LevyModel& model) {
  RunReport r{"lt", model.digest(), {}, {}, {}};
  const std::vector<double> qs = parse_grid(o.q_text);
  r.inputs = {{"model", model.describe()}, {"x", o.x}, {"q", o.q_text}};
  const ScaleEvaluator ev(model);
  json rows = json::array();
  for (double q : qs) {
    const double value = ev.passage_lt(q, o.x);
    const Method m = ev.method_passage(q, o.x);
    json row = tagged(value, to_string(m), accepted_error(ev, m));
    row["q"] = q;
    rows.push_back(row);
  }
  r.outputs["rows"] = rows;
  if (ev.experimental()) r.warnings.push_back("stable-family inversion is experimental");
  return r;
}

RunReport cmd_scale(const Options& o, const LevyModel& model) {
  RunReport r{"scale", model.digest(), {}, {}, {}};
  const std::vector<double> xs = parse_grid(o.x_text);
  const std::vector<double> qs = parse_grid(o.q_text);
  if (qs.size() != 1) throw InputError("scale: --q takes a single value");
  const double q = qs.front();
  r.inputs = {{"model", model.describe()}, {"q", q}, {"x", o.x_text}};
  const ScaleEvaluator ev(model);
  json rows = json::array();
  for (double x : xs) {
    const Method mw = ev.method_W(q, x);
    const Method mz = ev.method_Z(q, x);
    rows.push_back({{"x", x},
                    {"W", tagged(ev.scale_W(q, x), to_string(mw), accepted_error(ev, mw))},
                    {"Z", tagged(ev.scale_Z(q, x), to_string(mz), accepted_error(ev, mz))}});
  }
  r.outputs["rows"] = rows;
  if (ev.experimental()) r.warnings.push_back("stable-family inversion is experimental");
  return r;
}

RunReport cmd_simulate(const Options& o, const LevyModel& model) {
  RunReport r{"simulate", model.digest(), {}, {}, {}};
  r.inputs = {{"model", model.describe()}, {"x", o.x},         {"n_paths", o.n_paths},
              {"seed", o.seed},            {"t_max", o.t_max}, {"diffusion_step", o.step}};
  const PassageSampleSet s = sample_passage_times(model, o.x, sim_config(o));
  json summary = json::parse(summary_json(s));
  summary["method"] = "monte-carlo";
  r.outputs = summary;
  warn_sampler(s, r);
  if (!o.out_path.empty()) {
    std::ostringstream csv;
    write_csv(s, csv);
    write_file(o.out_path, csv.str());
    r.outputs["csv"] = o.out_path;
  }
  return r;
}

RunReport cmd_verify(const Options& o, int& exit_code) {
  RunReport r{"verify", "", {}, {}, {}};
  r.inputs = {{"suite", o.suite}};
  const SuiteResult s = run_suite(o.suite);
  json checks = json::array();
  for (const CheckResult& c : s.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  r.outputs = {{"passed", s.passed()}, {"failed", s.failed()}, {"checks", checks}};
  exit_code = s.ok() ? kExitOk : kExitNumerical;
  return r;
}

// Human-readable rendering: one line per scalar, one row per grid point.
std::string render_value(const json& v) {
  if (v.is_object() && v.contains("method")) {
    std::string s = v.value("infinite", false) ? "inf" : v["value"].is_null() ? "n/a" : num(v["value"].get<double>());
    s += "  [" + v["method"].get<std::string>();
    if (!v["error"].is_null()) s += ", error <= " + num(v["error"].get<double>());
    return s + "]";
  }
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void render_text(const RunReport& r, std::ostream& out) {
  out << r.command;
  if (!r.model_digest.empty()) out << "  (model " << r.model_digest << ")";
  out << "\n";
  for (const auto& [key, value] : r.inputs.items()) out << "  " << key << " = " << render_value(value) << "\n";
  if (r.command == "lt" || r.command == "scale") {
    const bool lt = r.command == "lt";
    out << (lt ? "  q\tvalue\tmethod\n" : "  x\tW\tZ\n");
    for (const json& row : r.outputs["rows"]) {
      if (lt) {
        out << "  " << num(row["q"].get<double>()) << "\t" << render_value(row) << "\n";
      } else {
        out << "  " << num(row["x"].get<double>()) << "\t" << render_value(row["W"]) << "\t"
            << render_value(row["Z"]) << "\n";
      }
    }
  } else if (r.command == "verify") {
    for (const json& c : r.outputs["checks"]) {
      out << "  [" << (c["passed"].get<bool>() ? "PASS" : "FAIL") << "] " << c["name"].get<std::string>()
          << ": " << c["detail"].get<std::string>() << "\n";
    }
    out << "  passed " << r.outputs["passed"] << ", failed " << r.outputs["failed"] << "\n";
  } else {
    for (const auto& [key, value] : r.outputs.items()) {
      if (key == "verdict") {
        out << "  verdict = " << value["verdict"].get<std::string>() << " (" << value["clause"].get<std::string>()
            << ")";
        if (!value["threshold"].is_null()) out << ", threshold " << num(value["threshold"].get<double>());
        out << "\n    " << value["detail"].get<std::string>() << "\n";
      } else {
        out << "  " << key << " = " << render_value(value) << "\n";
      }
    }
  }
  for (const std::string& w : r.warnings) out << "warning: " << w << "\n";
}

void write_rows_csv(const RunReport& r, const std::string& path) {
  std::ostringstream csv;
  auto cell = [](const json& v) { return v.value("infinite", false) ? std::string("inf") : v["value"].is_null() ? std::string() : num(v["value"].get<double>()); };
  auto err = [](const json& v) { return v["error"].is_null() ? std::string() : num(v["error"].get<double>()); };
  if (r.command == "lt") {
    csv << "q,value,method,error\n";
    for (const json& row : r.outputs["rows"]) {
      csv << num(row["q"].get<double>()) << ',' << cell(row) << ',' << row["method"].get<std::string>() << ','
          << err(row) << '\n';
    }
  } else {
    csv << "x,W,W_method,W_error,Z,Z_method,Z_error\n";
    for (const json& row : r.outputs["rows"]) {
      csv << num(row["x"].get<double>()) << ',' << cell(row["W"]) << ',' << row["W"]["method"].get<std::string>()
          << ',' << err(row["W"]) << ',' << cell(row["Z"]) << ',' << row["Z"]["method"].get<std::string>() << ','
          << err(row["Z"]) << '\n';
    }
  }
  write_file(path, csv.str());
}

}  // namespace

json RunReport::to_json() const {
  return {{"command", command},
          {"model_digest", model_digest.empty() ? json(nullptr) : json(model_digest)},
          {"inputs", inputs},
          {"outputs", outputs},
          {"warnings", warnings}};
}

std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      throw InputError("invalid number '" + s + "' in grid '" + text + "'");
    }
    return v;
  };
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() == 1) return {number(parts[0])};
  if (parts.size() != 3) throw InputError("grid '" + text + "' must be a number or a:b:n");
  const double a = number(parts[0]);
  const double b = number(parts[1]);
  const double n = number(parts[2]);
  if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) {
    throw InputError("grid '" + text + "': n must be an integer in [1, 1e6]");
  }
  const auto count = static_cast<std::size_t>(n);
  if (count == 1) return {a};
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = (i + 1 == count) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moments of first downward passage times of spectrally negative Levy processes",
               "levy_passage"};
  app.require_subcommand(1);
  Options o;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", o.model_path, "model file (TOML subset)")->required();
  };
  auto add_kappa = [&](CLI::App* sub) {
    sub->add_option("--kappa", o.kappa, "moment order, > 0")->required()->check(CLI::PositiveNumber);
  };
  auto add_x = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--x", o.x, "level: passage below -x")->check(CLI::NonNegativeNumber);
    if (required) opt->required();
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--n-paths", o.n_paths, "Monte Carlo paths")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40));
    sub->add_option("--seed", o.seed, "64-bit seed");
    sub->add_option("--t-max", o.t_max, "censoring horizon")->check(CLI::PositiveNumber);
    sub->add_option("--step", o.step, "Euler step for jump-diffusions")->check(CLI::PositiveNumber);
    sub->add_option("--workers", o.workers, "worker threads (0: all, capped by LEVY_PASSAGE_THREADS)");
  };
  auto add_output = [&](CLI::App* sub, bool csv) {
    sub->add_flag("--json", o.json_output, "print the JSON report");
    if (csv) sub->add_option("--out", o.out_path, "write CSV here");
  };

  auto* analyze = app.add_subcommand("analyze", "regime, mean and moment verdict");
  add_model(analyze);
  add_kappa(analyze);
  add_x(analyze, true);
  add_output(analyze, false);

  auto* moment = app.add_subcommand("moment", "E[tau^kappa | tau < inf]");
  add_model(moment);
  add_kappa(moment);
  add_x(moment, true);
  moment->add_option("--method", o.method, "analytic, mc or both")
      ->check(CLI::IsMember({"analytic", "mc", "both"}));
  add_sim(moment);
  add_output(moment, false);

  auto* lt = app.add_subcommand("lt", "E[exp(-q tau); tau < inf] over a q grid");
  add_model(lt);
  add_x(lt, true);
  lt->add_option("--q", o.q_text, "q or a:b:n")->required();
  add_output(lt, true);

  auto* scale = app.add_subcommand("scale", "W and Z over an x grid");
  add_model(scale);
  scale->add_option("--q", o.q_text, "q >= 0")->required();
  scale->add_option("--x", o.x_text, "x or a:b:n")->required();
  add_output(scale, true);

  auto* simulate = app.add_subcommand("simulate", "sample passage times");
  add_model(simulate);
  add_x(simulate, true);
  add_sim(simulate);
  add_output(simulate, true);

  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", o.suite, "suite name")->required();
  verify->add_flag("--json", o.json_output, "print the JSON report");

  std::vector<const char*> argv{"levy_passage"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    int exit_code = kExitOk;
    RunReport report;
    if (verify->parsed()) {
      report = cmd_verify(o, exit_code);
    } else {
      const LevyModel model = load_model(o.model_path);
      if (analyze->parsed()) report = cmd_analyze(o, model);
      if (moment->parsed()) report = cmd_moment(o, model);
      if (lt->parsed()) report = cmd_lt(o, model);
      if (scale->parsed()) report = cmd_scale(o, model);
      if (simulate->parsed()) report = cmd_simulate(o, model);
      if (!o.out_path.empty() && (lt->parsed() || scale->parsed())) write_rows_csv(report, o.out_path);
    }
    if (o.json_output) {
      out << report.to_json().dump(2) << "\n";
    } else {
      render_text(report, out);
    }
    return exit_code;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace levy
