#include "cqmc_cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cqmc/dynamics.hpp"
#include "cqmc/errors.hpp"
#include "cqmc/qmc.hpp"
#include "cqmc/transition.hpp"
#include "cqmc/tree.hpp"
#include "cqmc/verification.hpp"

#ifndef CQMC_VERSION
#define CQMC_VERSION "0.0.0"
#endif

namespace cqmc::cli {

using nlohmann::json;

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

namespace {

const std::vector<std::string> kCommands = {"critical", "fixed-points", "trajectory",
                                            "boundary", "evaluate",     "correlation",
                                            "gap",      "phase-diagram", "verify"};

json num(double v) { return round12(v); }

template <class T>
json opt(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return num(*v);
  } else {
    return *v;
  }
}

json point(PlanarPoint q) { return {{"x", num(q.x)}, {"y", num(q.y)}}; }

bool needs_temperature(const std::string& name) {
  return name != "critical" && name != "phase-diagram";
}

ModelParams model(const Command& c) {
  if (c.theta) return ModelParams::from_theta(c.k, *c.theta);
  return ModelParams::from_beta(c.k, *c.beta);
}

json params_echo(const Command& c) {
  json p;
  p["k"] = c.k;
  if (needs_temperature(c.name)) {
    const ModelParams m = model(c);
    p["theta"] = num(m.theta);
    p["beta"] = num(m.beta);
  }
  const std::string& n = c.name;
  if (n == "trajectory") {
    p["x0"] = num(c.x0);
    p["y0"] = num(c.y0);
    p["steps"] = c.steps;
  }
  if (n == "boundary" || n == "evaluate") p["n"] = c.n;
  if (n == "correlation" || n == "gap") p["N"] = c.N;
  if (n == "boundary" || n == "evaluate" || n == "correlation") {
    p["kind"] = c.kind;
    if (c.alpha) p["alpha"] = num(*c.alpha);
  }
  if (n == "evaluate") p["observable"] = c.observable;
  if (n == "phase-diagram") {
    p["theta_min"] = num(c.theta_min);
    p["theta_max"] = num(c.theta_max);
    p["theta_step"] = num(c.theta_step);
  }
  return p;
}

json fixed_point_json(int line, const FixedPoint& f) {
  return {{"line", line},     {"t", num(f.t)},          {"s", num(f.s)},         {"A", num(f.A)},
          {"B", num(f.B)},    {"x", num(f.planar.x)},   {"y", num(f.planar.y)}};
}

json row_json(const PhaseDiagramRow& r) {
  return {{"theta", num(r.theta)}, {"regime", to_string(r.regime)}, {"t2", opt(r.t2)},
          {"t3", opt(r.t3)},       {"lambda2", opt(r.lambda2)},     {"m_infinity", num(r.m_infinity)},
          {"eps0", opt(r.eps0)}};
}

Outcome run_command(const Command& c) {
  Outcome o;
  json& r = o.report.result;
  const std::string& n = c.name;

  if (n == "critical") {
    const CriticalPoint cp = critical_theta(c.k);
    r = {{"theta_c", num(cp.theta_c)}, {"beta_c", num(cp.beta_c)}};
    return o;
  }

  if (n == "phase-diagram") {
    r["rows"] = json::array();
    for (const auto& row : phase_diagram(c.k, c.theta_min, c.theta_max, c.theta_step)) {
      r["rows"].push_back(row_json(row));
    }
    return o;
  }

  const ModelParams p = model(c);
  if (n == "fixed-points") {
    const FixedPointData fp = find_fixed_points(p);
    r["regime"] = in_transition_regime(p) ? "transition" : "unique";
    r["count"] = fp.count();
    r["fixed_points"] = json::array();
    for (int i = 1; i <= fp.count(); ++i) r["fixed_points"].push_back(fixed_point_json(i, fp.line(i)));
  } else if (n == "trajectory") {
    const TrajectoryResult t = iterate_trajectory(p, c.x0, c.y0, c.steps);
    r["verdict"] = to_string(t.verdict);
    r["predicted"] = to_string(t.predicted);
    r["predicted_line"] = t.predicted_line;
    r["steps_taken"] = static_cast<int>(t.points.size()) - 1;
    if (t.verdict == Fate::ExitsDomain) r["exit_step"] = t.exit_step;
    if (t.verdict == Fate::ConvergesTo || t.verdict == Fate::AtFixedPoint) r["limit"] = point(t.limit);
    r["points"] = json::array();
    for (const PlanarPoint& q : t.points) r["points"].push_back(point(q));
  } else if (n == "boundary") {
    const BoundaryKind kind = parse_boundary_kind(c.kind);
    const BoundaryCondition bc = boundary_condition(p, kind, c.alpha);
    r["kind"] = to_string(bc.kind());
    r["w0"] = num(bc.w0().a0());
    r["normalization"] = num(bc.normalization());
    r["levels"] = json::array();
    for (int level = 0; level <= c.n; ++level) {
      const DiagOp h = bc.field(level);
      r["levels"].push_back({{"n", level},
                             {"h0", num(h.a0())},
                             {"h3", num(h.a3())},
                             {"dp", num(h.dp)},
                             {"dm", num(h.dm)},
                             {"recursion_residual", num(recursion_residual(bc, p, level))}});
    }
  } else if (n == "evaluate") {
    const BoundaryKind kind = parse_boundary_kind(c.kind);
    const TreeParams tree(c.k);
    const ProductObservable a = parse_observable(c.observable, tree, c.n);
    const FiniteVolumeState st = oracle_weights(p, boundary_condition(p, kind, c.alpha), c.n);
    r["observable"] = to_string(a);
    r["diagonal_part"] = to_string(product_diagonal_part(a));
    r["sites"] = st.sites();
    r["value"] = num(evaluate_state(st, a));
  } else if (n == "correlation") {
    const BoundaryKind kind = parse_boundary_kind(c.kind);
    r["kind"] = to_string(kind);
    r["vertex"] = VertexCoord(std::vector<int>(c.N + 1, 1)).to_string();
    r["value"] = num(leaf_sigma3_expectation(p, kind, c.N));
    if (kind != BoundaryKind::Alpha0) {
      const MagnetizationLaw law = magnetization_law(p, kind);
      r["m_infinity"] = num(law.m_infinity);
      r["coefficient"] = num(law.coefficient);
      r["lambda2"] = num(law.lambda2);
    }
  } else if (n == "gap") {
    const GapReport g = gap_report(p, c.N);
    r = {{"N", g.N},
         {"verdict", to_string(g.verdict)},
         {"phi_alpha", num(g.phi_alpha)},
         {"phi_gamma_N", opt(g.phi_gamma_N)},
         {"phi_limit", opt(g.phi_limit)},
         {"gap", g.phi_gamma_N ? num(std::abs(*g.phi_gamma_N - g.phi_alpha)) : json(nullptr)},
         {"eps0", opt(g.eps0)},
         {"N0", opt(g.N0)}};
  } else if (n == "verify") {
    const std::vector<Check> checks = run_verification(p);
    int passed = 0;
    r["checks"] = json::array();
    for (const Check& ch : checks) {
      passed += ch.passed ? 1 : 0;
      r["checks"].push_back({{"name", ch.name},
                             {"passed", ch.passed},
                             {"value", num(ch.value)},
                             {"tolerance", num(ch.tolerance)},
                             {"detail", ch.detail}});
    }
    r["passed"] = passed;
    r["total"] = static_cast<int>(checks.size());
    r["all_passed"] = passed == static_cast<int>(checks.size());
    o.status = passed == static_cast<int>(checks.size()) ? 0 : 1;
  }
  return o;
}

std::string scalar_text(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void text_value(std::ostringstream& os, const std::string& key, const json& v, int indent) {
  const std::string pad(indent * 2, ' ');
  if (v.is_object()) {
    os << pad << key << ":\n";
    for (auto it = v.begin(); it != v.end(); ++it) text_value(os, it.key(), it.value(), indent + 1);
  } else if (v.is_array()) {
    os << pad << key << ": " << v.size() << " entries\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      const json& e = v[i];
      os << pad << "  [" << i << "]";
      if (e.is_object()) {
        for (auto it = e.begin(); it != e.end(); ++it) os << ' ' << it.key() << '=' << scalar_text(it.value());
      } else {
        os << ' ' << scalar_text(e);
      }
      os << '\n';
    }
  } else {
    os << pad << key << ": " << (v.is_null() ? "-" : scalar_text(v)) << '\n';
  }
}

void csv_table(std::ostringstream& os, const json& rows, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const json& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::string cell = row.contains(cols[i]) ? scalar_text(row[cols[i]]) : "";
      if (cell.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : cell) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        cell = quoted + "\"";
      }
      os << (i ? "," : "") << cell;
    }
    os << '\n';
  }
}

void flatten(const json& v, const std::string& prefix, json& rows) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), rows);
  } else {
    rows.push_back({{"key", prefix}, {"value", v}});
  }
}

}  // namespace

void to_json(json& j, const Report& r) {
  j = {{"command", r.command}, {"version", r.version}, {"params", r.params}, {"result", r.result}};
  if (r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
}

void from_json(const json& j, Report& r) {
  j.at("command").get_to(r.command);
  j.at("version").get_to(r.version);
  r.params = j.at("params");
  r.result = j.at("result");
  r.elapsed_ms = j.contains("elapsed_ms") ? std::optional<double>(j["elapsed_ms"].get<double>())
                                          : std::nullopt;
}

Command parse(const std::vector<std::string>& args) {
  Command c;
  CLI::App app{"Quantum Markov chains of the Ising model on Cayley trees", "cqmc"};
  app.require_subcommand(1);
  app.set_help_flag();  // help is handled by the caller

  std::string format = "text";
  for (const std::string& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--k", c.k, "branching order (>= 2)");
    sub->add_option("--out", c.out, "write the report to FILE");
    sub->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_flag("--timing", c.timing, "include elapsed time");
    if (name == "critical") continue;
    CLI::Option* th = sub->add_option("--theta", c.theta, "theta = exp(2 beta) > 1");
    CLI::Option* be = sub->add_option("--beta", c.beta, "inverse temperature > 0");
    th->excludes(be);
    be->excludes(th);
    if (name == "trajectory") {
      sub->add_option("--x0", c.x0);
      sub->add_option("--y0", c.y0);
      sub->add_option("--steps", c.steps);
    }
    if (name == "boundary" || name == "evaluate") sub->add_option("--n", c.n, "volume level");
    if (name == "correlation" || name == "gap") sub->add_option("--N", c.N, "leaf level minus one");
    if (name == "boundary" || name == "evaluate" || name == "correlation") {
      sub->add_option("--kind", c.kind)->check(CLI::IsMember({"alpha0", "alpha", "beta", "gamma"}));
      sub->add_option("--alpha", c.alpha);
    }
    if (name == "evaluate") sub->add_option("--observable", c.observable)->required();
    if (name == "phase-diagram") {
      sub->add_option("--theta-min", c.theta_min);
      sub->add_option("--theta-max", c.theta_max);
      sub->add_option("--theta-step", c.theta_step);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  c.name = app.get_subcommands().front()->get_name();
  c.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Text;

  if (needs_temperature(c.name) && !c.theta && !c.beta) {
    throw UsageError("--theta or --beta is required for " + c.name);
  }
  if (c.name == "phase-diagram" && (c.theta || c.beta)) {
    throw UsageError("phase-diagram takes --theta-min/--theta-max/--theta-step, not --theta/--beta");
  }
  if (c.steps < 1) throw UsageError("--steps must be >= 1");
  if (c.n < 0) throw UsageError("--n must be >= 0");
  if (c.N < 0) throw UsageError("--N must be >= 0");
  if (c.kind == "alpha" && !c.alpha && (c.name == "boundary" || c.name == "evaluate")) {
    throw UsageError("--kind alpha needs --alpha");
  }
  if (c.name == "correlation" && c.kind == "alpha") {
    throw UsageError("--kind for correlation must be alpha0, beta or gamma");
  }
  return c;
}

Outcome execute(const Command& c) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o = run_command(c);
  o.report.params = params_echo(c);
  o.report.command = c.name;
  o.report.version = CQMC_VERSION;
  if (c.timing) {
    o.report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return o;
}

std::string render(const Report& r, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::Json:
      os << json(r).dump(2) << '\n';
      break;
    case Format::Text:
      os << "cqmc " << r.version << " " << r.command << '\n';
      text_value(os, "params", r.params, 0);
      text_value(os, "result", r.result, 0);
      if (r.elapsed_ms) os << "elapsed_ms: " << *r.elapsed_ms << '\n';
      break;
    case Format::Csv:
      if (r.command == "phase-diagram") {
        csv_table(os, r.result["rows"], {"theta", "regime", "t2", "t3", "lambda2", "m_infinity", "eps0"});
      } else if (r.command == "verify") {
        csv_table(os, r.result["checks"], {"name", "passed", "value", "tolerance", "detail"});
      } else if (r.command == "trajectory") {
        json rows = json::array();
        const json& pts = r.result["points"];
        for (std::size_t i = 0; i < pts.size(); ++i) {
          rows.push_back({{"step", i}, {"x", pts[i]["x"]}, {"y", pts[i]["y"]}});
        }
        csv_table(os, rows, {"step", "x", "y"});
      } else {
        json rows = json::array();
        flatten(r.params, "params", rows);
        flatten(r.result, "result", rows);
        csv_table(os, rows, {"key", "value"});
      }
      break;
  }
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    out << "usage: cqmc <command> [options]\ncommands:";
    for (const auto& name : kCommands) out << ' ' << name;
    out << "\ncommon options: --k K (--theta T | --beta B) --format text|json|csv --out FILE --timing\n";
    return args.empty() ? 2 : 0;
  }
  Command c;
  try {
    c = parse(args);
  } catch (const UsageError& e) {
    err << "cqmc: usage error: " << e.what() << '\n';
    return 2;
  }
  Outcome o;
  try {
    o = execute(c);
  } catch (const cqmc::Error& e) {
    err << "cqmc: error: " << e.what() << '\n';
    return 1;
  }
  const std::string text = render(o.report, c.format);
  if (c.out) {
    std::ofstream file(*c.out, std::ios::binary);
    if (!file) {
      err << "cqmc: error: cannot open " << *c.out << " for writing\n";
      return 1;
    }
    file << text;
  } else {
    out << text;
  }
  return o.status;
}

}  // namespace cqmc::cli
