#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "symplopt/harness.hpp"

namespace {

using namespace symplopt;

struct CliConfig {
  harness::ExperimentConfig cfg;
  std::string method = "leapfrog";
  std::string objective = "quadratic";
  std::string x0;
  std::string config_path;
};

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("could not parse number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void add_config_flags(CLI::App* sub, CliConfig& c) {
  sub->add_option("--method", c.method, "leapfrog | leapfrog-gf | nesterov");
  sub->add_option("--objective", c.objective, "quadratic | quartic");
  sub->add_option("--dim", c.cfg.dim, "problem dimension");
  sub->add_option("--rho", c.cfg.rho, "correlation of the quadratic objective");
  sub->add_option("--p", c.cfg.p, "rate exponent");
  sub->add_option("--C", c.cfg.C, "scaling constant");
  sub->add_option("--N", c.cfg.N, "gradient-flow / Taylor-step constant");
  sub->add_option("--eps", c.cfg.epsilon, "step size");
  sub->add_option("--steps", c.cfg.steps, "number of steps");
  sub->add_option("--t0", c.cfg.t0, "initial model time");
  sub->add_option("--seed", c.cfg.seed, "seed for the unit-norm normal x0 draw");
  sub->add_option("--x0", c.x0, "explicit start point, comma-separated (overrides --seed)");
  sub->add_option("--record-every", c.cfg.record_every, "record cadence in steps");
  sub->add_option("--divergence-threshold", c.cfg.divergence_threshold, "f level that flags divergence");
  sub->add_option("--config", c.config_path, "plain key=value config file (keys match flag names)");
}

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Values from the file fill in options the command line left untouched.
void apply_config_file(CLI::App* sub, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open '" + path + "' for reading");
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key=value: '" + entry + "'");
    }
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key == "config") {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + ": 'config' cannot nest");
    }
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

harness::ExperimentConfig finalize(const CliConfig& c) {
  harness::ExperimentConfig cfg = c.cfg;
  cfg.method = harness::parse_method(c.method);
  cfg.objective = harness::parse_objective(c.objective);
  if (!c.x0.empty()) cfg.x0 = parse_double_list(c.x0);
  return cfg;
}

// 0 success, 1 configuration error, 2 I/O error
int classify(const std::exception& e) {
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) return 1;
  if (dynamic_cast<const std::domain_error*>(&e) != nullptr) return 1;
  const std::string what = e.what();
  if (what.rfind("csv:", 0) == 0 || what.rfind("plot:", 0) == 0 || what.rfind("config:", 0) == 0) return 2;
  return 1;
}

std::string stem_of(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string base = (slash == std::string::npos) ? path : path.substr(slash + 1);
  const std::size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base;
}

} // namespace

int main(int argc, char** argv) {
  using namespace symplopt;
  CLI::App app{"Benchmark harness for symplectic accelerated-gradient integration"};
  app.require_subcommand(1);

  CliConfig run_c, rate_c, cmp_c;
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "run one experiment and emit its trace as CSV");
  add_config_flags(run, run_c);
  run->add_option("--out", run_out, "output CSV path (default: stdout)");

  std::string rate_in, rate_axes = "log-log", rate_window = "0.1,0.6";
  CLI::App* rate = app.add_subcommand("rate", "fit a convergence rate to a trace");
  add_config_flags(rate, rate_c);
  rate->add_option("--in", rate_in, "fit a previously emitted CSV instead of running");
  rate->add_option("--axes", rate_axes, "log-log | semilog");
  rate->add_option("--window", rate_window, "record window as fractions, e.g. 0.1,0.6");

  std::string cmp_methods = "leapfrog,nesterov", cmp_normalize = "gradient_evals", cmp_out;
  int cmp_levels = 6;
  CLI::App* cmp = app.add_subcommand("compare", "first-attainment table across methods");
  add_config_flags(cmp, cmp_c);
  cmp->add_option("--methods", cmp_methods, "comma-separated method list");
  cmp->add_option("--normalize", cmp_normalize, "iterations | gradient_evals");
  cmp->add_option("--levels", cmp_levels, "number of log-spaced error levels");
  cmp->add_option("--out", cmp_out, "write the table to a file as well");

  std::vector<std::string> plot_in;
  std::string plot_out, plot_axes = "log-log";
  CLI::App* plot = app.add_subcommand("plot", "render traces to an SVG");
  plot->add_option("--in", plot_in, "input CSV paths")->required()->expected(-1);
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("--axes", plot_axes, "log-log | semilog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) {
      if (!run_c.config_path.empty()) apply_config_file(run, run_c.config_path);
      const harness::ExperimentConfig cfg = finalize(run_c);
      const Trace trace = harness::run_experiment(cfg);
      std::cerr << "# " << trace.config_echo << "\n";
      if (run_out.empty()) {
        harness::emit_csv(trace, std::cout);
      } else {
        harness::emit_csv(trace, run_out);
        const TraceRecord& last = trace.records.back();
        std::cout << "wrote " << trace.records.size() << " records to " << run_out
                  << " (final n=" << last.n << ", f=" << last.f
                  << ", grad_evals=" << last.grad_evals
                  << ", diverged=" << (trace.diverged ? "true" : "false") << ")\n";
      }
      return 0;
    }

    if (rate->parsed()) {
      if (!rate_c.config_path.empty()) apply_config_file(rate, rate_c.config_path);
      const std::vector<double> w = parse_double_list(rate_window);
      if (w.size() != 2) throw std::invalid_argument("--window expects two fractions, e.g. 0.1,0.6");
      const harness::Axes axes = harness::parse_axes(rate_axes);
      Trace trace;
      if (!rate_in.empty()) {
        trace = harness::parse_csv(rate_in);
      } else {
        trace = harness::run_experiment(finalize(rate_c));
      }
      const harness::RateFit fit = harness::estimate_rate(trace, w[0], w[1], axes);
      char buf[160];
      std::snprintf(buf, sizeof buf, "slope=%.12g r_squared=%.12g records=[%zu,%zu)",
                    fit.slope, fit.r_squared, fit.first_record, fit.last_record);
      std::cout << buf << "\n";
      return 0;
    }

    if (cmp->parsed()) {
      if (!cmp_c.config_path.empty()) apply_config_file(cmp, cmp_c.config_path);
      harness::Normalize normalize;
      if (cmp_normalize == "iterations")
        normalize = harness::Normalize::iterations;
      else if (cmp_normalize == "gradient_evals")
        normalize = harness::Normalize::gradient_evals;
      else
        throw std::invalid_argument("--normalize expects iterations or gradient_evals");

      std::vector<harness::ExperimentConfig> configs;
      std::stringstream ss(cmp_methods);
      std::string name;
      while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        CliConfig one = cmp_c;
        one.method = name;
        configs.push_back(finalize(one));
      }
      if (configs.empty()) throw std::invalid_argument("--methods named no methods");
      const harness::Comparison table = harness::compare_methods(configs, normalize, cmp_levels);
      const std::string text = harness::format_comparison(table, normalize);
      std::cout << text;
      if (!cmp_out.empty()) {
        std::ofstream os(cmp_out, std::ios::binary);
        if (!os) throw std::runtime_error("csv: cannot open '" + cmp_out + "' for writing");
        os << text;
      }
      return 0;
    }

    if (plot->parsed()) {
      std::vector<Trace> traces;
      std::vector<std::string> labels;
      for (const std::string& path : plot_in) {
        traces.push_back(harness::parse_csv(path));
        labels.push_back(stem_of(path));
      }
      harness::emit_plot(traces, labels, plot_out, harness::parse_axes(plot_axes));
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  }
  return 0;
}
