#include "symplopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "symplopt/baselines.hpp"
#include "symplopt/bregman.hpp"
#include "symplopt/integrators.hpp"
#include "symplopt/kernels.hpp"
#include "symplopt/objectives.hpp"
#include "symplopt/scaling.hpp"

namespace symplopt::harness {

std::string method_name(Method m) {
  switch (m) {
    case Method::leapfrog: return "leapfrog";
    case Method::leapfrog_gf: return "leapfrog-gf";
    case Method::nesterov: return "nesterov";
  }
  return "?";
}

std::string objective_name(ObjectiveKind k) {
  return k == ObjectiveKind::quadratic ? "quadratic" : "quartic";
}

Method parse_method(const std::string& s) {
  if (s == "leapfrog") return Method::leapfrog;
  if (s == "leapfrog-gf") return Method::leapfrog_gf;
  if (s == "nesterov") return Method::nesterov;
  throw std::invalid_argument("unknown method '" + s + "' (expected leapfrog, leapfrog-gf or nesterov)");
}

ObjectiveKind parse_objective(const std::string& s) {
  if (s == "quadratic") return ObjectiveKind::quadratic;
  if (s == "quartic") return ObjectiveKind::quartic;
  throw std::invalid_argument("unknown objective '" + s + "' (expected quadratic or quartic)");
}

Axes parse_axes(const std::string& s) {
  if (s == "log-log") return Axes::loglog;
  if (s == "semilog") return Axes::semilog;
  throw std::invalid_argument("unknown axes '" + s + "' (expected log-log or semilog)");
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate_config(const ExperimentConfig& c) {
  if (c.dim == 0) throw std::invalid_argument("config: dim must be positive");
  if (c.objective == ObjectiveKind::quadratic && !(std::abs(c.rho) < 1.0))
    throw std::invalid_argument("config: |rho| must be below 1 for the quadratic objective");
  if (!(c.p > 0.0)) throw std::invalid_argument("config: p must be positive");
  if (!(c.C > 0.0)) throw std::invalid_argument("config: C must be positive");
  if (!(c.N > 0.0)) throw std::invalid_argument("config: N must be positive");
  if (!(c.epsilon > 0.0)) throw std::invalid_argument("config: eps must be positive");
  if (c.steps < 1) throw std::invalid_argument("config: steps must be at least 1");
  if (!(c.t0 > 0.0)) throw std::invalid_argument("config: t0 must be positive");
  if (c.record_every < 1) throw std::invalid_argument("config: record-every must be at least 1");
  if (!(c.divergence_threshold > 0.0))
    throw std::invalid_argument("config: divergence-threshold must be positive");
  if (!c.x0.empty() && c.x0.size() != c.dim)
    throw std::invalid_argument("config: explicit x0 has " + std::to_string(c.x0.size()) +
                                " entries but dim is " + std::to_string(c.dim));
}

std::string echo_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "method=" << method_name(c.method)
     << " objective=" << objective_name(c.objective)
     << " dim=" << c.dim;
  if (c.objective == ObjectiveKind::quadratic) os << " rho=" << fmt(c.rho);
  os << " p=" << fmt(c.p) << " C=" << fmt(c.C) << " N=" << fmt(c.N)
     << " eps=" << fmt(c.epsilon) << " steps=" << c.steps << " t0=" << fmt(c.t0);
  if (c.x0.empty())
    os << " seed=" << c.seed;
  else
    os << " x0=explicit";
  os << " record_every=" << c.record_every
     << " divergence_threshold=" << fmt(c.divergence_threshold);
  return os.str();
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

} // namespace

std::vector<double> draw_x0(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("draw_x0: dim must be positive");
  std::mt19937_64 gen(seed);
  auto uniform = [&gen]() {
    // (0,1), never exactly 0 or 1, portable across standard libraries
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
  };
  std::vector<double> x(dim);
  constexpr double two_pi = 6.283185307179586476925286766559;
  for (std::size_t i = 0; i < dim; i += 2) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    x[i] = radius * std::cos(two_pi * u2);
    if (i + 1 < dim) x[i + 1] = radius * std::sin(two_pi * u2);
  }
  const double norm = std::sqrt(kernels::dot(x, x));
  if (norm > 0.0)
    for (double& v : x) v /= norm;
  else
    x[0] = 1.0;
  return x;
}

Trace run_experiment(const ExperimentConfig& config) {
  validate_config(config);

  std::unique_ptr<objectives::Objective> objective =
      config.objective == ObjectiveKind::quadratic
          ? objectives::build_correlated_quadratic(config.dim, config.rho)
          : objectives::quartic(config.dim);
  const std::vector<double> x0 =
      config.x0.empty() ? draw_x0(config.dim, config.seed) : config.x0;

  Trace trace;
  trace.config_echo = echo_config(config);

  if (config.method == Method::nesterov) {
    baselines::NesterovConfig ncfg;
    ncfg.epsilon = config.epsilon;
    ncfg.params = {config.p, config.C};
    ncfg.N = config.N;
    Trace t = baselines::nesterov_run(x0, ncfg, *objective, config.steps,
                                      config.divergence_threshold,
                                      config.record_every, config.t0);
    t.config_echo = trace.config_echo;
    return t;
  }

  const bregman::BregmanGeometry geom = bregman::quadratic_geometry();
  const scaling::ScalingParams params{config.p, config.C};
  integrators::LeapfrogConfig lcfg;
  lcfg.epsilon = config.epsilon;
  lcfg.params = params;
  lcfg.gradient_flow_enabled = config.method == Method::leapfrog_gf;
  lcfg.gradient_flow_N = config.N;
  lcfg.track_energy = true;

  integrators::ExtendedState state = integrators::init_state(x0, config.t0, *objective, geom, params);
  integrators::StepCache cache;

  auto conserved = [&]() {
    return integrators::conserved_quantity(state, *objective, geom, params);
  };
  trace.records.push_back({0, state.t, objective->value(state.x),
                           objective->grad_evals(), conserved(), false});

  for (std::uint64_t k = 1; k <= config.steps; ++k) {
    if (lcfg.gradient_flow_enabled)
      integrators::leapfrog_step_gradient_flow(state, lcfg, *objective, geom, &cache);
    else
      integrators::leapfrog_step(state, lcfg, *objective, geom, &cache);
    const double f = objective->value(state.x);
    const bool bad = state.diverged || !std::isfinite(f) ||
                     f > config.divergence_threshold || !all_finite(state.x);
    const bool due = (k % config.record_every == 0) || k == config.steps || bad;
    if (due)
      trace.records.push_back({k, state.t, f, objective->grad_evals(), conserved(), bad});
    if (bad) {
      trace.diverged = true;
      break;
    }
  }
  return trace;
}

RateFit estimate_rate(const Trace& trace, double window_lo, double window_hi, Axes axes) {
  if (!(window_lo >= 0.0 && window_lo < window_hi && window_hi <= 1.0))
    throw std::invalid_argument("rate fit: window must satisfy 0 <= lo < hi <= 1");
  const std::size_t m = trace.records.size();
  const std::size_t first = static_cast<std::size_t>(std::floor(window_lo * static_cast<double>(m)));
  std::size_t last = static_cast<std::size_t>(std::floor(window_hi * static_cast<double>(m)));
  last = std::min(last, m);
  if (last < first + 3)
    throw std::runtime_error("rate fit: window holds fewer than 3 records");

  std::vector<double> xs, ys;
  xs.reserve(last - first);
  ys.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) {
    const TraceRecord& rec = trace.records[i];
    if (!(rec.f > 0.0) || !std::isfinite(rec.f)) {
      std::ostringstream msg;
      msg << "rate fit: record n=" << rec.n << " (index " << i
          << ") has nonpositive or non-finite f=" << rec.f;
      throw std::runtime_error(msg.str());
    }
    if (axes == Axes::loglog) {
      if (!(rec.t > 0.0) || !std::isfinite(rec.t)) {
        std::ostringstream msg;
        msg << "rate fit: record n=" << rec.n << " (index " << i
            << ") has nonpositive or non-finite t=" << rec.t;
        throw std::runtime_error(msg.str());
      }
      xs.push_back(std::log(rec.t));
    } else {
      xs.push_back(static_cast<double>(rec.n));
    }
    ys.push_back(std::log(rec.f));
  }

  const double count = static_cast<double>(xs.size());
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= count;
  ybar /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - xbar;
    const double dy = ys[i] - ybar;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::runtime_error("rate fit: degenerate abscissa (zero variance)");

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.first_record = first;
  fit.last_record = last;
  return fit;
}

Comparison compare_methods(const std::vector<ExperimentConfig>& configs,
                           Normalize normalize, int levels) {
  (void)normalize; // affects presentation only; the table carries both costs
  if (configs.empty()) throw std::invalid_argument("compare: no configs given");
  if (levels < 1) throw std::invalid_argument("compare: levels must be at least 1");
  for (const ExperimentConfig& c : configs) {
    if (c.objective != configs.front().objective)
      throw std::invalid_argument("compare: configs use different objectives");
    if (c.dim != configs.front().dim)
      throw std::invalid_argument("compare: configs use different dimensions");
    validate_config(c);
  }

  std::vector<Trace> traces(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(configs.size()); ++i) {
    try {
      traces[static_cast<std::size_t>(i)] = run_experiment(configs[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  Comparison cmp;
  if (traces.front().records.empty())
    throw std::runtime_error("compare: first run produced no records");
  cmp.f0 = traces.front().records.front().f;
  if (!(cmp.f0 > 0.0) || !std::isfinite(cmp.f0))
    throw std::runtime_error("compare: initial f is not positive and finite");
  for (int k = 1; k <= levels; ++k)
    cmp.levels.push_back(cmp.f0 * std::pow(10.0, -0.5 * static_cast<double>(k)));

  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    ComparisonColumn col;
    col.label = method_name(configs[ci].method);
    col.first_n.assign(cmp.levels.size(), std::nullopt);
    col.grads_at_first.assign(cmp.levels.size(), std::nullopt);
    for (std::size_t li = 0; li < cmp.levels.size(); ++li) {
      for (const TraceRecord& rec : traces[ci].records) {
        if (std::isfinite(rec.f) && rec.f <= cmp.levels[li]) {
          col.first_n[li] = rec.n;
          col.grads_at_first[li] = rec.grad_evals;
          break;
        }
      }
    }
    cmp.columns.push_back(std::move(col));
  }
  return cmp;
}

std::string format_comparison(const Comparison& comparison, Normalize normalize) {
  std::ostringstream os;
  os << "initial f0 = " << fmt(comparison.f0) << "; cost metric: "
     << (normalize == Normalize::gradient_evals ? "fresh gradient evaluations" : "iterations")
     << "\n";
  for (std::size_t li = 0; li < comparison.levels.size(); ++li) {
    char rel[40];
    std::snprintf(rel, sizeof rel, "%.3g", comparison.levels[li] / comparison.f0);
    os << "f <= " << rel << " f0";
    for (const ComparisonColumn& col : comparison.columns) {
      os << " | " << col.label << ": ";
      if (col.first_n[li].has_value())
        os << "n=" << *col.first_n[li] << " grads=" << *col.grads_at_first[li];
      else
        os << "unreached";
    }
    os << "\n";
  }
  return os.str();
}

void emit_csv(const Trace& trace, std::ostream& os) {
  os << "n,t,f,grad_evals,conserved,diverged\n";
  for (const TraceRecord& rec : trace.records) {
    os << rec.n << ',' << fmt(rec.t) << ',' << fmt(rec.f) << ',' << rec.grad_evals << ',';
    if (rec.conserved.has_value()) os << fmt(*rec.conserved);
    os << ',' << (rec.diverged ? '1' : '0') << '\n';
  }
}

void emit_csv(const Trace& trace, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  emit_csv(trace, os);
  os.flush();
  if (!os) throw std::runtime_error("csv: write to '" + path + "' failed");
}

Trace parse_csv(std::istream& is, const std::string& name) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: '" + name + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,t,f,grad_evals,conserved,diverged")
    throw std::runtime_error("csv: '" + name + "' has an unexpected header: " + line);

  Trace trace;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 6)
      throw std::runtime_error("csv: '" + name + "' line " + std::to_string(lineno) +
                               " has " + std::to_string(fields.size()) + " fields, expected 6");
    try {
      TraceRecord rec;
      rec.n = std::stoull(fields[0]);
      rec.t = std::stod(fields[1]);
      rec.f = std::stod(fields[2]);
      rec.grad_evals = std::stoull(fields[3]);
      if (!fields[4].empty()) rec.conserved = std::stod(fields[4]);
      rec.diverged = fields[5] == "1";
      trace.diverged = trace.diverged || rec.diverged;
      trace.records.push_back(rec);
    } catch (const std::exception&) {
      throw std::runtime_error("csv: '" + name + "' line " + std::to_string(lineno) +
                               " could not be parsed");
    }
  }
  return trace;
}

Trace parse_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("csv: cannot open '" + path + "' for reading");
  return parse_csv(is, path);
}

namespace {

struct PlotPoint {
  double x;
  double y;
};

const char* const plot_colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

} // namespace

void emit_plot(const std::vector<Trace>& traces,
               const std::vector<std::string>& labels,
               const std::string& path, Axes axes) {
  if (labels.size() != traces.size())
    throw std::invalid_argument("plot: one label per trace required");

  // Collect polylines in plot coordinates: abscissa log10 t or plain n,
  // ordinate log10 f. Rows that cannot be log-scaled are dropped.
  std::vector<std::vector<PlotPoint>> lines(traces.size());
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool have = false;
  for (std::size_t ti = 0; ti < traces.size(); ++ti) {
    for (const TraceRecord& rec : traces[ti].records) {
      if (!(rec.f > 0.0) || !std::isfinite(rec.f)) continue;
      double x;
      if (axes == Axes::loglog) {
        if (!(rec.t > 0.0) || !std::isfinite(rec.t)) continue;
        x = std::log10(rec.t);
      } else {
        x = static_cast<double>(rec.n);
      }
      const double y = std::log10(rec.f);
      lines[ti].push_back({x, y});
      if (!have) {
        xmin = xmax = x;
        ymin = ymax = y;
        have = true;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double width = 860, height = 600;
  const double left = 80, right = width - 180, top = 30, bottom = height - 60;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  auto py = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << (right - left)
      << "\" height=\"" << (bottom - top) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / nticks;
    const double fy = ymin + (ymax - ymin) * i / nticks;
    const double gx = px(fx);
    const double gy = py(fy);
    svg << "<line x1=\"" << fmt2(gx) << "\" y1=\"" << fmt2(bottom) << "\" x2=\"" << fmt2(gx)
        << "\" y2=\"" << fmt2(bottom + 6) << "\" stroke=\"#333333\"/>\n";
    const double xv = (axes == Axes::loglog) ? std::pow(10.0, fx) : fx;
    svg << "<text x=\"" << fmt2(gx) << "\" y=\"" << fmt2(bottom + 22)
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << fmt3(xv) << "</text>\n";
    svg << "<line x1=\"" << fmt2(left - 6) << "\" y1=\"" << fmt2(gy) << "\" x2=\"" << fmt2(left)
        << "\" y2=\"" << fmt2(gy) << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << fmt2(left - 10) << "\" y=\"" << fmt2(gy + 4)
        << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << fmt3(std::pow(10.0, fy)) << "</text>\n";
  }
  svg << "<text x=\"" << fmt2((left + right) / 2) << "\" y=\"" << fmt2(height - 12)
      << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << (axes == Axes::loglog ? "t" : "n") << "</text>\n";
  svg << "<text x=\"20\" y=\"" << fmt2((top + bottom) / 2)
      << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 20 "
      << fmt2((top + bottom) / 2) << ")\">f</text>\n";

  for (std::size_t ti = 0; ti < lines.size(); ++ti) {
    const char* color = plot_colors[ti % (sizeof plot_colors / sizeof plot_colors[0])];
    if (!lines[ti].empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const PlotPoint& pt : lines[ti])
        svg << fmt2(px(pt.x)) << ',' << fmt2(py(pt.y)) << ' ';
      svg << "\"/>\n";
    }
    const double ly = top + 20 + 22 * static_cast<double>(ti);
    svg << "<line x1=\"" << fmt2(right + 12) << "\" y1=\"" << fmt2(ly) << "\" x2=\""
        << fmt2(right + 40) << "\" y2=\"" << fmt2(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << fmt2(right + 46) << "\" y=\"" << fmt2(ly + 4)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << labels[ti] << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("plot: cannot open '" + path + "' for writing");
  os << svg.str();
  os.flush();
  if (!os) throw std::runtime_error("plot: write to '" + path + "' failed");
}

} // namespace symplopt::harness
