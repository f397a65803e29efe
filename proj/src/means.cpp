#include "singtrace/means.hpp"

#include <algorithm>
#include <cmath>

#include "singtrace/error.hpp"
#include "singtrace/numeric.hpp"
#include "singtrace/spaces.hpp"

namespace singtrace {

namespace {

const char* regressor_name(Regressor r) {
  switch (r) {
    case Regressor::kInvLog: return "1/ln t";
    case Regressor::kLogLogOverLog: return "ln ln t/ln t";
    case Regressor::kInvLogSq: return "1/ln^2 t";
    case Regressor::kInv: return "1/t";
    case Regressor::kInvSqrt: return "1/sqrt t";
  }
  return "?";
}

double regressor_value(Regressor r, double u) {
  switch (r) {
    case Regressor::kInvLog: return 1.0 / u;
    case Regressor::kLogLogOverLog: return std::log(u) / u;
    case Regressor::kInvLogSq: return 1.0 / (u * u);
    case Regressor::kInv: return std::exp(-u);
    case Regressor::kInvSqrt: return std::exp(-0.5 * u);
  }
  return 0.0;
}

// (1/x)∫_{x0}^x f with x0 = max(0, first grid point), by trapezoids on the grid.
SampledFunction running_mean(const SampledFunction& f) {
  const double x0 = std::max(0.0, f.grid.front());
  SampledFunction out;
  out.domain = f.domain;
  const auto start = f.interpolate(x0);
  if (!start) return out;
  double acc = 0.0;
  double px = x0;
  double pv = *start;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (f.grid[i] <= x0) continue;
    acc += 0.5 * (pv + f.values[i]) * (f.grid[i] - px);
    px = f.grid[i];
    pv = f.values[i];
    out.grid.push_back(px);
    out.values.push_back(acc / px);
  }
  return out;
}

SampledFunction resample(const SampledFunction& f, Domain domain,
                         const std::function<double(double)>& source_of) {
  SampledFunction out;
  out.domain = domain;
  for (double x : f.grid) {
    if (const auto v = f.interpolate(source_of(x))) {
      out.grid.push_back(x);
      out.values.push_back(*v);
    }
  }
  return out;
}

void require_domain(const SampledFunction& f, Domain d, const char* op) {
  if (f.domain != d) {
    throw Error(ErrorCode::kDomainMismatch,
                std::string(op) + " expects a function on the " +
                    (d == Domain::kRealLine ? "real line" : "multiplicative half-line"));
  }
}

struct TailFit {
  std::vector<double> coefficients;
  double lo = kInf;
  double hi = -kInf;
  double residual = 0.0;
};

TailFit fit_tail(const SampledFunction& f, std::size_t start, const std::vector<Regressor>& regs) {
  std::vector<std::vector<double>> cols(1 + regs.size());
  std::vector<double> y;
  for (std::size_t i = start; i < f.grid.size(); ++i) {
    cols[0].push_back(1.0);
    for (std::size_t j = 0; j < regs.size(); ++j) cols[j + 1].push_back(regressor_value(regs[j], f.grid[i]));
    y.push_back(f.values[i]);
  }
  TailFit out;
  const LinearFit fit = least_squares(cols, y);
  out.coefficients = fit.coefficients;
  out.residual = fit.max_abs_residual;
  for (std::size_t k = 0; k < y.size(); ++k) {
    double d = y[k];
    for (std::size_t j = 0; j < regs.size(); ++j) d -= fit.coefficients[j + 1] * cols[j + 1][k];
    out.lo = std::min(out.lo, d);
    out.hi = std::max(out.hi, d);
  }
  return out;
}

std::string describe_model(const std::vector<Regressor>& regs) {
  std::string s = "a";
  for (std::size_t j = 0; j < regs.size(); ++j) {
    s += " + b" + std::to_string(j + 1) + "*" + regressor_name(regs[j]);
  }
  return s;
}

}  // namespace

void SampledFunction::validate() const {
  if (grid.size() != values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sampled function: grid and values differ in length");
  }
  if (grid.size() < 2) throw Error(ErrorCode::kGridTooShort, "sampled function needs two points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw Error(ErrorCode::kNonFiniteValue, "non-finite abscissa", i + 1);
    if (!std::isfinite(values[i])) throw Error(ErrorCode::kNonFiniteValue, "non-finite sample", i + 1);
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::kNonMonotone, "grid must be strictly increasing", i + 1);
    }
  }
}

std::optional<double> SampledFunction::interpolate(double x) const {
  if (grid.empty()) return std::nullopt;
  const double slack = 1e-12 * std::max(1.0, std::abs(x));
  if (x < grid.front() - slack || x > grid.back() + slack) return std::nullopt;
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - grid.begin());
  const double w = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

SampledFunction apply_transform(const SampledFunction& f, Transform op, double param) {
  f.validate();
  switch (op) {
    case Transform::kCesaro:
      require_domain(f, Domain::kRealLine, "H");
      return running_mean(f);
    case Transform::kLogCesaro:
      require_domain(f, Domain::kHalfLine, "M");
      return running_mean(f);
    case Transform::kDilation:
      if (!(param > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dilation needs a > 0");
      if (f.domain == Domain::kRealLine) {
        return resample(f, f.domain, [param](double x) { return x / param; });
      }
      return resample(f, f.domain, [lp = std::log(param)](double u) { return u - lp; });
    case Transform::kTranslation:
      require_domain(f, Domain::kRealLine, "translation");
      return resample(f, f.domain, [param](double x) { return x + param; });
    case Transform::kPower:
      require_domain(f, Domain::kHalfLine, "power");
      if (!(param > 0.0)) throw Error(ErrorCode::kInvalidArgument, "power needs a > 0");
      return resample(f, f.domain, [param](double u) { return param * u; });
    case Transform::kLog: {
      require_domain(f, Domain::kRealLine, "L");
      SampledFunction out = f;
      out.domain = Domain::kHalfLine;
      return out;
    }
    case Transform::kLogInverse: {
      require_domain(f, Domain::kHalfLine, "L^-1");
      SampledFunction out = f;
      out.domain = Domain::kRealLine;
      return out;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown transform");
}

LimitEstimate limit_estimate(const SampledFunction& g, const LimitConfig& config) {
  g.validate();
  require_domain(g, Domain::kHalfLine, "limit_estimate");
  if (!(config.tail_fraction > 0.0 && config.tail_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tail_fraction must lie in (0, 1]");
  }
  auto tail_start = [&](const SampledFunction& f) {
    const auto n = f.grid.size();
    return std::min(n - 1, static_cast<std::size_t>(std::floor(n * (1.0 - config.tail_fraction))));
  };
  const std::size_t s0 = tail_start(g);
  const double decades = (g.grid.back() - g.grid[s0]) / std::log(10.0);
  if (decades < config.min_tail_decades) {
    throw Error(ErrorCode::kGridTooShort,
                "tail spans " + std::to_string(decades) + " decades; at least " +
                    std::to_string(config.min_tail_decades) + " needed");
  }
  LimitEstimate out;
  out.tolerance = config.tolerance;
  SampledFunction cur = g;
  TailFit first;
  for (int k = 0; k <= config.max_cesaro; ++k) {
    if (k > 0) {
      cur = running_mean(cur);
      if (cur.grid.size() < 4) break;
    }
    const auto& regs = k == 0 ? config.regressors : config.cesaro_regressors;
    const std::size_t start = tail_start(cur);
    if (cur.grid.size() - start < regs.size() + 2) break;
    const TailFit fit = fit_tail(cur, start, regs);
    if (k == 0) first = fit;
    if (fit.hi - fit.lo <= config.tolerance) {
      out.value = fit.coefficients[0];
      out.liminf = std::min(fit.lo, fit.coefficients[0]);
      out.limsup = std::max(fit.hi, fit.coefficients[0]);
      out.converged = true;
      out.cesaro_iterations = k;
      out.model = describe_model(regs);
      out.coefficients = fit.coefficients;
      out.fit_residual = fit.residual;
      out.samples = std::move(cur);
      return out;
    }
  }
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t i = s0; i < g.grid.size(); ++i) {
    lo = std::min(lo, g.values[i]);
    hi = std::max(hi, g.values[i]);
  }
  out.liminf = lo;
  out.limsup = hi;
  out.cesaro_iterations = config.max_cesaro;
  out.model = describe_model(config.regressors);
  out.coefficients = first.coefficients;
  out.fit_residual = first.residual;
  out.samples = g;
  return out;
}

std::vector<double> limit_log_grid(double log_horizon, std::size_t points) {
  if (!(log_horizon > 1.0)) throw Error(ErrorCode::kInvalidArgument, "ln t horizon must exceed 1");
  if (points < 8) throw Error(ErrorCode::kGridTooShort, "limit grid needs at least 8 points");
  return geometric_grid(1.0, log_horizon, points);
}

namespace {

double resolve_horizon(const Profile& x, const DixmierOptions& o) {
  return o.log_horizon > 0.0 ? o.log_horizon : x.limit_log_horizon();
}

void require_membership(const Profile& x, const PsiFunction& psi) {
  const SupResult norm = marcinkiewicz_norm(x, psi);
  if (norm.divergent || !std::isfinite(norm.value)) {
    throw Error(ErrorCode::kHypothesis,
                "'" + x.name() + "' is not in M(" + psi.name() + "): weighted means are unbounded");
  }
}

LimitEstimate estimate_curve(const std::vector<double>& grid, std::vector<double> values,
                             const LimitConfig& cfg) {
  SampledFunction f;
  f.grid = grid;
  f.values = std::move(values);
  return limit_estimate(f, cfg);
}

}  // namespace

LimitEstimate dixmier_estimate(const Profile& x, const PsiFunction& psi, const DixmierOptions& options) {
  require_membership(x, psi);
  const auto grid = limit_log_grid(resolve_horizon(x, options), options.points);
  return estimate_curve(grid, weighted_mean_curve(x, psi, grid), options.limit);
}

double band_distance(const LimitEstimate& a, const LimitEstimate& b) {
  if (a.converged && b.converged) return std::abs(*a.value - *b.value);
  return std::max({0.0, a.liminf - b.limsup, b.liminf - a.limsup});
}

TripleReport prop_equivalence_triple(const Profile& x, const PsiFunction& psi,
                                     const DixmierOptions& options) {
  const PsiDiagnostics diag = psi_diagnostics(psi);
  if (!diag.doubling_to_one || !diag.condition_a) {
    throw Error(ErrorCode::kHypothesis,
                "psi '" + psi.name() + "' fails the doubling or power condition");
  }
  require_membership(x, psi);
  const auto grid = limit_log_grid(resolve_horizon(x, options), options.points);
  const std::size_t n = grid.size();
  std::vector<double> a(n);
  std::vector<double> b(n);
  std::vector<double> c(n);
  const double at_one = truncated_trace(x, 1.0);
  parallel_for(n, [&](std::size_t i) {
    const double u = grid[i];
    const double w = std::exp(-psi.log_value_at_log(u));
    a[i] = weighted_mean_log(x, psi, u);
    const double trunc = truncated_trace_log(x, -u);
    b[i] = trunc * w;
    c[i] = (trunc - at_one) * w;
  });
  TripleReport r;
  r.weighted_mean = estimate_curve(grid, std::move(a), options.limit);
  r.truncated = estimate_curve(grid, std::move(b), options.limit);
  r.truncated_window = estimate_curve(grid, std::move(c), options.limit);
  r.max_distance = std::max({band_distance(r.weighted_mean, r.truncated),
                             band_distance(r.weighted_mean, r.truncated_window),
                             band_distance(r.truncated, r.truncated_window)});
  r.flags_agree = r.weighted_mean.converged == r.truncated.converged &&
                  r.truncated.converged == r.truncated_window.converged;
  return r;
}

}  // namespace singtrace
