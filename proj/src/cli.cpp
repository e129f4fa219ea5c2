#include "halflap/cli.hpp"

#include "halflap/extension.hpp"
#include "halflap/nonlinear.hpp"
#include "halflap/verification.hpp"
#include "json_writer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace halflap::cli {

namespace {

const std::vector<std::string> kCommands = {"eig",    "apply", "solve",         "sweep",
                                            "extend", "check", "trace-constant"};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_real(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + " '" + s + "'");
  }
}

int parse_count(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + " '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(parse_real(part, "list entry"));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Config files become leading "--key=value" arguments, so flags given on the
// command line (parsed later, last value wins) override them.
std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::vector<std::pair<std::string, std::string>> entries;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed JSON config '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("JSON config must be an object");
    for (const auto& [k, v] : doc.items()) {
      std::string value;
      if (v.is_string()) {
        value = v.get<std::string>();
      } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) value += (i ? "," : "") + v[i].dump();
      } else {
        value = v.dump();
      }
      entries.emplace_back(k, value);
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      line = trim(line);
      if (line.empty() || line[0] == '#' || line[0] == ';') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
      }
      std::string value = trim(line.substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      entries.emplace_back(trim(line.substr(0, eq)), value);
    }
  }

  std::vector<std::string> args;
  for (auto [k, v] : entries) {
    std::replace(k.begin(), k.end(), '_', '-');
    if (k == "command") {
      args.insert(args.begin(), v);
    } else {
      args.push_back("--" + k + "=" + v);
    }
  }
  return args;
}

struct Options {
  std::string command;
  std::string domain;
  std::string config;
  std::string output = "-";
  std::string format;
  std::string plot;
  std::string op = "A";
  std::string coeffs;
  std::string p_list;
  int mode = 0;
  double height = 0.0;
  int n = 2;
  double epsilon = 1.0;
  double radius = 200.0;
  int resolution = 4096;
  int threads = 0;
  int weak_mp_samples = 100;
  SolveConfig solver;
};

std::unique_ptr<CLI::App> build_app(Options& o) {
  auto app = std::make_unique<CLI::App>("Spectral square root of the Dirichlet Laplacian toolkit", "halflap");
  app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app->add_option("command", o.command, "eig | apply | solve | sweep | extend | check | trace-constant")
      ->check(CLI::IsMember(kCommands));
  app->add_option("--config", o.config, "key = value or JSON config file; flags override it");
  app->add_option("--domain", o.domain, "interval:L:N or rectangle:L1:L2:N1:N2");
  app->add_option("--modes,-K", o.solver.modes, "number of eigenmodes K");
  app->add_option("--output,-o", o.output, "output path, '-' for stdout");
  app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--plot", o.plot, "write (coordinates, value) plot data of the result grid function");

  app->add_option("--p", o.solver.p, "exponent of the nonlinearity u^p");
  app->add_option("--p-list", o.p_list, "comma separated exponents for sweep");
  app->add_option("--max-iter", o.solver.max_iter);
  app->add_option("--tol", o.solver.tol_residual, "residual tolerance");
  app->add_option("--grad-tol", o.solver.grad_tol, "relative tangent-gradient tolerance of the minimizer");
  app->add_option("--step-init", o.solver.step_init, "initial step; <= 0 uses 0.5/sqrt(lambda_K)");
  app->add_option("--backtrack", o.solver.backtrack_factor);
  app->add_option("--polish-iters", o.solver.polish_iters);
  app->add_option("--seed", o.solver.rng_seed);
  app->add_option("--perturbation", o.solver.init_perturbation, "random perturbation amplitude of the start");
  app->add_flag("--allow-near-critical", o.solver.allow_near_critical, "permit p within 5% of critical");
  app->add_option("--threads", o.threads, "sweep worker cap (overrides HALFLAP_THREADS)");
  app->add_option("--weak-mp-samples", o.weak_mp_samples, "random data sets for the weak maximum principle");

  app->add_option("--op", o.op, "apply: A (square root), B (its inverse), invlap")
      ->check(CLI::IsMember({"A", "B", "invlap"}));
  app->add_option("--coeffs", o.coeffs, "comma separated coefficients b_1, b_2, ...");
  app->add_option("--mode", o.mode, "use the single eigenmode k (1-based) as input");
  app->add_option("--height", o.height, "extension height y");

  app->add_option("--n", o.n, "trace-constant: dimension n");
  app->add_option("--epsilon", o.epsilon, "trace-constant: bubble width");
  app->add_option("--radius", o.radius, "trace-constant: truncation radius R");
  app->add_option("--resolution", o.resolution, "trace-constant: quadrature resolution M");
  return app;
}

class Output {
 public:
  explicit Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path != "-" && !path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot open output '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }
  void close() {
    os_->flush();
    if (!*os_) throw IoError("write to output failed");
  }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void write_csv_double(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

SpectralFn input_function(const Options& o, const BasisPtr& basis) {
  if (o.mode > 0) {
    if (o.mode > basis->size()) throw ConfigError("--mode exceeds the number of modes");
    return SpectralFn::unit(basis, o.mode - 1);
  }
  if (o.coeffs.empty()) return SpectralFn::unit(basis, 0);
  const auto c = parse_list(o.coeffs);
  if (static_cast<int>(c.size()) > basis->size()) throw ConfigError("more coefficients than modes");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(basis->size());
  for (std::size_t i = 0; i < c.size(); ++i) b[static_cast<Eigen::Index>(i)] = c[i];
  return {basis, b};
}

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void write_report_fields(JsonWriter& j, const SolveReport& r) {
  j.field("p", r.p)
      .field("I0", r.I0)
      .field("multiplier", r.multiplier)
      .field("residual_inf", r.residual_inf)
      .field("truncation_defect", r.truncation_defect)
      .field("sup_norm", r.sup_norm)
      .field("positivity_min", r.positivity_min)
      .field("symmetry_defect", r.symmetry_defect)
      .field("iterations", r.iterations)
      .field("polish_iterations", r.polish_iterations)
      .field("minimizer_converged", r.minimizer_converged)
      .field("converged", r.converged);
}

int cmd_eig(const Options& o, const DomainPtr& dom, std::ostream& os, const std::string& fmt) {
  const auto basis = make_basis(dom, o.solver.modes);
  if (fmt == "json") {
    JsonWriter j(os);
    j.begin_object().field("domain", o.domain).key("modes").begin_array();
    for (int k = 0; k < basis->size(); ++k) {
      const auto f = basis->frequencies(k);
      j.begin_object().field("k", k + 1).field("j1", f[0]);
      if (dom->dimension() == 2) j.field("j2", f[1]);
      j.field("lambda", basis->lambdas()[k]).field("sqrt_lambda", basis->sqrt_lambdas()[k]).end_object();
    }
    j.end_array().end_object().finish();
  } else {
    os << "k,lambda\n";
    for (int k = 0; k < basis->size(); ++k) {
      os << k + 1 << ',';
      write_csv_double(os, basis->lambdas()[k]);
      os << '\n';
    }
  }
  if (!o.plot.empty()) emit_plot_data(basis->mode(0), o.plot);
  return kSuccess;
}

int cmd_apply(const Options& o, const DomainPtr& dom, std::ostream& os, const std::string& fmt) {
  const auto basis = make_basis(dom, o.solver.modes);
  const SpectralFn f = input_function(o, basis);
  const SpectralFn g = o.op == "A" ? apply_A_half(f) : o.op == "B" ? apply_B_half(f) : apply_inv_laplacian(f);
  if (fmt == "json") {
    JsonWriter j(os);
    j.begin_object()
        .field("op", o.op)
        .field("input", as_span(f.coeffs()))
        .field("output", as_span(g.coeffs()))
        .field("v0_norm_sq_input", v0_norm_sq(f))
        .end_object()
        .finish();
  } else {
    os << "k,input,output\n";
    for (int k = 0; k < g.size(); ++k) {
      os << k + 1 << ',';
      write_csv_double(os, f.coeffs()[k]);
      os << ',';
      write_csv_double(os, g.coeffs()[k]);
      os << '\n';
    }
  }
  if (!o.plot.empty()) emit_plot_data(synthesize(g), o.plot);
  return kSuccess;
}

int cmd_extend(const Options& o, const DomainPtr& dom, std::ostream& os, const std::string& fmt) {
  const auto basis = make_basis(dom, o.solver.modes);
  const SpectralFn f = input_function(o, basis);
  const GridFn v = evaluate_extension(f, o.height);
  if (fmt == "json") {
    JsonWriter j(os);
    j.begin_object()
        .field("height", o.height)
        .field("dirichlet_energy", dirichlet_energy(f))
        .field("values", as_span(v.values()))
        .end_object()
        .finish();
  } else {
    os << (dom->dimension() == 1 ? "x,v\n" : "x1,x2,v\n");
    for (std::size_t n = 0; n < v.size(); ++n) {
      for (int a = 0; a < dom->dimension(); ++a) {
        write_csv_double(os, dom->coordinate(n, a));
        os << ',';
      }
      write_csv_double(os, v[n]);
      os << '\n';
    }
  }
  if (!o.plot.empty()) emit_plot_data(v, o.plot);
  return kSuccess;
}

int cmd_solve(const Options& o, const DomainPtr& dom, std::ostream& os, const std::string& fmt) {
  solver_basis(dom, o.solver);  // reject bad configs with exit 2 before solving
  const SolveReport r = solve(dom, o.solver);
  if (fmt == "json") {
    JsonWriter j(os);
    j.begin_object().field("domain", o.domain).field("modes", o.solver.modes).field("seed", static_cast<double>(o.solver.rng_seed));
    write_report_fields(j, r);
    j.field("coefficients", as_span(r.solution.coeffs())).end_object().finish();
  } else {
    os << "field,value\n";
    const std::pair<const char*, double> rows[] = {
        {"p", r.p},
        {"I0", r.I0},
        {"multiplier", r.multiplier},
        {"residual_inf", r.residual_inf},
        {"truncation_defect", r.truncation_defect},
        {"sup_norm", r.sup_norm},
        {"positivity_min", r.positivity_min},
        {"symmetry_defect", r.symmetry_defect},
        {"iterations", static_cast<double>(r.iterations)},
        {"polish_iterations", static_cast<double>(r.polish_iterations)},
        {"converged", r.converged ? 1.0 : 0.0},
    };
    for (const auto& [k, v] : rows) {
      os << k << ',';
      write_csv_double(os, v);
      os << '\n';
    }
  }
  if (!o.plot.empty()) emit_plot_data(r.solution_grid, o.plot);
  return r.converged ? kSuccess : kFailure;
}

unsigned sweep_threads(const Options& o) {
  if (o.threads > 0) return static_cast<unsigned>(o.threads);
  if (const char* env = std::getenv("HALFLAP_THREADS")) {
    const int t = parse_count(env, "HALFLAP_THREADS");
    if (t > 0) return static_cast<unsigned>(t);
  }
  return 0;
}

int cmd_sweep(const Options& o, const DomainPtr& dom, std::ostream& os, const std::string& fmt) {
  const auto ps = parse_list(o.p_list.empty() ? std::to_string(o.solver.p) : o.p_list);
  const auto rows = sweep(dom, ps, o.solver, sweep_threads(o));
  bool all = true;
  if (fmt == "json") {
    JsonWriter j(os);
    j.begin_object().field("domain", o.domain).key("rows").begin_array();
    for (const auto& row : rows) {
      j.begin_object().field("p", row.p).field("sup_norm", row.sup_norm).field("residual", row.residual);
      j.field("converged", row.converged);
      if (!row.error.empty()) j.field("error", row.error);
      j.end_object();
    }
    j.end_array().end_object().finish();
  } else {
    os << "p,sup_norm,residual,converged\n";
    for (const auto& row : rows) {
      write_csv_double(os, row.p);
      os << ',';
      write_csv_double(os, row.sup_norm);
      os << ',';
      write_csv_double(os, row.residual);
      os << ',' << (row.converged ? 1 : 0) << '\n';
    }
  }
  for (const auto& row : rows) all = all && row.converged;
  return all ? kSuccess : kFailure;
}

int cmd_check(const Options& o, const DomainPtr& dom, std::ostream& os, const std::string& fmt) {
  solver_basis(dom, o.solver);
  const SolveReport r = solve(dom, o.solver);
  const auto checks = check_battery(r, o.weak_mp_samples, o.solver.rng_seed);
  bool all = r.converged;
  for (const auto& c : checks) all = all && c.passed;
  if (fmt == "json") {
    JsonWriter j(os);
    j.begin_object().key("solve").begin_object();
    write_report_fields(j, r);
    j.end_object().key("checks").begin_array();
    for (const auto& c : checks) {
      j.begin_object()
          .field("name", c.name)
          .field("passed", c.passed)
          .field("metric", c.metric)
          .field("tolerance", c.tolerance)
          .field("detail", c.detail)
          .end_object();
    }
    j.end_array().field("all_passed", all).end_object().finish();
  } else {
    os << "name,passed,metric,tolerance\n";
    os << "solve_converged," << (r.converged ? 1 : 0) << ',';
    write_csv_double(os, r.residual_inf);
    os << ',';
    write_csv_double(os, o.solver.tol_residual);
    os << '\n';
    for (const auto& c : checks) {
      os << c.name << ',' << (c.passed ? 1 : 0) << ',';
      write_csv_double(os, c.metric);
      os << ',';
      write_csv_double(os, c.tolerance);
      os << '\n';
    }
  }
  if (!o.plot.empty()) emit_plot_data(r.solution_grid, o.plot);
  return all ? kSuccess : kFailure;
}

int cmd_trace_constant(const Options& o, std::ostream& os, const std::string& fmt) {
  const double s0 = best_trace_constant(o.n);
  std::optional<double> q;
  if (o.n == 2) q = extremal_quotient(ExtremalProfile{2, o.epsilon, {}}, o.radius, o.resolution);
  if (fmt == "csv") {
    os << "n,best_constant,extremal_quotient\n" << o.n << ',';
    write_csv_double(os, s0);
    os << ',';
    if (q) write_csv_double(os, *q);
    os << '\n';
  } else {
    JsonWriter j(os);
    j.begin_object().field("n", o.n).field("best_constant", s0);
    if (q) {
      j.field("epsilon", o.epsilon).field("radius", o.radius).field("resolution", o.resolution);
      j.field("extremal_quotient", *q).field("ratio", *q / s0);
    }
    j.end_object().finish();
  }
  return kSuccess;
}

}  // namespace

DomainPtr parse_domain(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 3 && parts[0] == "interval") {
    return std::make_shared<const DiscreteDomain>(
        make_interval(parse_real(parts[1], "length"), parse_count(parts[2], "grid count")));
  }
  if (parts.size() == 5 && parts[0] == "rectangle") {
    return std::make_shared<const DiscreteDomain>(
        make_rectangle(parse_real(parts[1], "length"), parse_real(parts[2], "length"),
                       parse_count(parts[3], "grid count"), parse_count(parts[4], "grid count")));
  }
  throw ConfigError("domain must be interval:L:N or rectangle:L1:L2:N1:N2, got '" + spec + "'");
}

void emit_plot_data(const GridFn& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open plot file '" + path + "'");
  const auto& dom = u.domain();
  out << (dom.dimension() == 1 ? "x,u\n" : "x1,x2,u\n");
  for (std::size_t n = 0; n < u.size(); ++n) {
    for (int a = 0; a < dom.dimension(); ++a) {
      write_csv_double(out, dom.coordinate(n, a));
      out << ',';
    }
    write_csv_double(out, u[n]);
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write to plot file '" + path + "' failed");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  try {
    std::vector<std::string> full;
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
      }
      if (!path.empty()) {
        auto extra = config_arguments(path);
        full.insert(full.end(), extra.begin(), extra.end());
      }
    }
    // A command named on the command line wins over one from the config.
    const bool cli_command = !args.empty() && std::find(kCommands.begin(), kCommands.end(), args[0]) != kCommands.end();
    if (cli_command && !full.empty() &&
        std::find(kCommands.begin(), kCommands.end(), full[0]) != kCommands.end()) {
      full.erase(full.begin());
    }
    if (cli_command) {
      full.insert(full.begin(), args[0]);
      full.insert(full.end(), args.begin() + 1, args.end());
    } else {
      full.insert(full.end(), args.begin(), args.end());
    }

    auto app = build_app(o);
    std::vector<std::string> reversed(full.rbegin(), full.rend());
    try {
      app->parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app->help();
      return kSuccess;
    } catch (const CLI::ParseError& e) {
      throw ConfigError(e.what());
    }
    if (o.command.empty()) throw ConfigError("no command given; expected one of eig, apply, solve, sweep, extend, check, trace-constant");

    std::string fmt = o.format;
    if (fmt.empty()) fmt = (o.command == "solve" || o.command == "check" || o.command == "trace-constant") ? "json" : "csv";

    DomainPtr dom;
    if (o.command != "trace-constant") {
      if (o.domain.empty()) throw ConfigError("--domain is required for " + o.command);
      dom = parse_domain(o.domain);
    }

    // Render into a buffer so a config error never leaves a partial report.
    std::ostringstream buf;
    int code = kSuccess;
    if (o.command == "eig") code = cmd_eig(o, dom, buf, fmt);
    else if (o.command == "apply") code = cmd_apply(o, dom, buf, fmt);
    else if (o.command == "extend") code = cmd_extend(o, dom, buf, fmt);
    else if (o.command == "solve") code = cmd_solve(o, dom, buf, fmt);
    else if (o.command == "sweep") code = cmd_sweep(o, dom, buf, fmt);
    else if (o.command == "check") code = cmd_check(o, dom, buf, fmt);
    else code = cmd_trace_constant(o, buf, fmt);

    Output sink(o.output, out);
    sink.stream() << buf.str();
    sink.close();
    return code;
  } catch (const IoError& e) {
    err << "halflap: " << e.what() << '\n';
    return kFailure;
  } catch (const std::invalid_argument& e) {
    // Domain, aliasing, rejected-config and parse errors all derive from invalid_argument.
    err << "halflap: configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    err << "halflap: configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "halflap: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace halflap::cli
