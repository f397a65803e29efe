#include "singtrace/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "singtrace/error.hpp"

namespace singtrace {

namespace {

constexpr double kDenseStart = -23.0;  // t ≈ 1e-10

// lim_{t→0} x*(t)·(t/ψ(t)): both the weighted mean and the quasinorm tend
// to x*(0+)/ψ'(0+).
double zero_limit(const Profile& x, const PsiFunction& psi) {
  const double x0 = x.value_at_zero();
  if (x0 == 0.0) return 0.0;
  const double slope = psi.slope_at_zero();
  return slope > 0.0 ? x0 / slope : kInf;
}

SupResult supremum_over_profile(const Profile& x, const PsiFunction& psi,
                                const std::function<double(double)>& ratio, double log_lo) {
  const double horizon = x.default_log_horizon();
  std::vector<double> grid;
  for (double u : x.witness_log_points(horizon)) {
    if (u >= log_lo) grid.push_back(u);
  }
  const bool exact = x.exact_witnesses() && psi.concave_closed_form();
  if (!exact) {
    const auto dense = dense_log_grid(std::max(log_lo, kDenseStart), std::max(horizon, 1.0));
    grid.insert(grid.end(), dense.begin(), dense.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }
  SupResult r = grid.empty() ? SupResult{} : grid_supremum(ratio, grid, !exact);
  r.exact = exact && !r.divergent;
  if (log_lo == -kInf) {
    const double z = zero_limit(x, psi);
    if (z == kInf) {
      r.value = kInf;
      r.divergent = true;
      r.witness_log_t = -kInf;
      r.witness_log_points.clear();
      r.witness_values.clear();
      for (double u = -1.0; u >= -40.0; u -= 3.0) {
        r.witness_log_points.push_back(u);
        r.witness_values.push_back(ratio(u));
      }
    } else if (!r.divergent && z > r.value) {
      r.value = z;
      r.witness_log_t = -kInf;
    }
  }
  return r;
}

}  // namespace

std::vector<double> dense_log_grid(double log_lo, double log_hi) {
  std::vector<double> out;
  const double step = std::log(10.0) / 64.0;
  double u = log_lo;
  const double switch_at = 10.0 * std::log(10.0);
  while (u < std::min(log_hi, switch_at)) {
    out.push_back(u);
    u += step;
  }
  u = std::max(u, switch_at);
  const double ratio = std::exp(1.0 / 64.0);
  while (u < log_hi) {
    out.push_back(u);
    u *= ratio;
  }
  out.push_back(log_hi);
  return out;
}

SupResult grid_supremum(const std::function<double(double)>& f, const std::vector<double>& log_t,
                        bool refine) {
  const std::size_t n = log_t.size();
  std::vector<double> vals(n);
  parallel_for(n, [&](std::size_t i) { vals[i] = f(log_t[i]); });
  SupResult r;
  r.value = -kInf;
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (vals[i] > r.value) {
      r.value = vals[i];
      best = i;
    }
  }
  r.witness_log_t = log_t[best];
  if (r.value == kInf) {
    r.divergent = true;
    return r;
  }
  if (refine && best > 0 && best + 1 < n) {
    const double u = golden_section_max(f, log_t[best - 1], log_t[best + 1], 60);
    const double v = f(u);
    if (v > r.value) {
      r.value = v;
      r.witness_log_t = u;
    }
  }
  if (n >= 8) {
    const std::size_t q0 = n - n / 4;
    bool rising = true;
    for (std::size_t i = q0 + 1; i < n; ++i) {
      if (vals[i] < vals[i - 1] * (1.0 - 1e-12)) {
        rising = false;
        break;
      }
    }
    const double mid = vals[n / 2];
    if (rising && vals.back() > 0.0 && vals.back() >= 1.01 * mid && vals.back() >= 1.01 * vals[q0]) {
      r.divergent = true;
      r.value = kInf;
      r.witness_log_t = kInf;
      for (std::size_t i = n / 2; i < n; ++i) {
        if (r.witness_values.empty() || vals[i] > r.witness_values.back()) {
          r.witness_log_points.push_back(log_t[i]);
          r.witness_values.push_back(vals[i]);
        }
      }
      return r;
    }
    if (rising && log_t.back() > 0.0 && log_t[q0] > 0.0) {
      // bounded increase: extrapolate a + b/ln t to t → ∞
      std::vector<std::vector<double>> cols(2);
      std::vector<double> y;
      for (std::size_t i = q0; i < n; ++i) {
        cols[0].push_back(1.0);
        cols[1].push_back(1.0 / log_t[i]);
        y.push_back(vals[i]);
      }
      if (y.size() >= 3 && log_t[q0] < log_t.back()) {
        const LinearFit fit = least_squares(cols, y);
        const double a = fit.coefficients[0];
        const bool explains_rise = fit.max_abs_residual <= 1e-3 * (vals.back() - vals[q0]);
        if (explains_rise && a > r.value) {
          r.value = a;
          r.witness_log_t = kInf;
          r.exact = false;
        }
      }
    }
  }
  return r;
}

double weighted_mean_log(const Profile& x, const PsiFunction& psi, double u) {
  const double p = x.partial_integral_log(u);
  if (p == 0.0) return 0.0;
  if (p == kInf) return kInf;
  return std::exp(std::log(p) - psi.log_value_at_log(u));
}

double weighted_mean(const Profile& x, const PsiFunction& psi, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "weighted_mean: t must be > 0");
  return weighted_mean_log(x, psi, std::log(t));
}

std::vector<double> weighted_mean_curve(const Profile& x, const PsiFunction& psi,
                                        const std::vector<double>& log_t) {
  std::vector<double> out(log_t.size());
  parallel_for(log_t.size(), [&](std::size_t i) { out[i] = weighted_mean_log(x, psi, log_t[i]); });
  return out;
}

SupResult marcinkiewicz_norm(const Profile& x, const PsiFunction& psi) {
  return supremum_over_profile(
      x, psi, [&](double u) { return weighted_mean_log(x, psi, u); }, -kInf);
}

SupResult log_average_norm(const Profile& x) {
  const PsiFunction psi = PsiFunction::log1p();
  auto ratio = [&](double u) { return weighted_mean_log(x, psi, u); };
  SupResult r = supremum_over_profile(x, psi, ratio, 0.0);
  const double at_one = ratio(0.0);
  if (!r.divergent && at_one > r.value) {
    r.value = at_one;
    r.witness_log_t = 0.0;
  }
  return r;
}

SupResult quasinorm_F(const Profile& x, const PsiFunction& psi) {
  return supremum_over_profile(
      x, psi,
      [&](double u) {
        const double lx = x.log_value_at_log(u);
        if (lx == -kInf) return 0.0;
        return std::exp(u + lx - psi.log_value_at_log(u));
      },
      -kInf);
}

SupResult small_ideal_constant(const Profile& x) {
  // ψ ≡ 1; t·μ_t rises inside each piece, so piece ends carry the sup
  return supremum_over_profile(
      x, PsiFunction::linear(),
      [&](double u) {
        const double lx = x.log_value_at_log(u);
        return lx == -kInf ? 0.0 : std::exp(u + lx);
      },
      std::numeric_limits<double>::lowest());
}

double fundamental_function(const PsiFunction& psi, double t, double p) {
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fundamental_function: t must be > 0");
  if (!(p >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "fundamental_function: p must be >= 1");
  const double u = std::log(t);
  return std::exp((u - psi.log_value_at_log(u)) / p);
}

double truncated_trace(const Profile& x, double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::kInvalidArgument, "truncated_trace: a must be > 0");
  return truncated_trace_log(x, std::log(a));
}

double truncated_trace_log(const Profile& x, double log_a) {
  const double lam = x.log_level_measure_log(log_a);
  if (lam == -kInf) return 0.0;
  return x.partial_integral_log(lam);
}

SeminormReport z1_seminorm(const Profile& x, const Z1Options& options) {
  if (options.k_min < 1 || options.k_max - options.k_min < 3) {
    throw Error(ErrorCode::kInvalidArgument, "z1_seminorm: need at least four grid points");
  }
  SeminormReport r;
  const std::size_t n = static_cast<std::size_t>(options.k_max - options.k_min + 1);
  r.s_grid.resize(n);
  r.values.resize(n);
  r.errors.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.s_grid[i] = std::ldexp(1.0, -(options.k_min + static_cast<int>(i)));
  // the scale c enters as c^{1+s} → c, so the limit is taken on the unscaled profile
  const Profile base = x.unscaled();
  const double c = std::exp(x.log_scale());
  std::vector<double> base_values(n);
  std::vector<double> base_errors(n);
  parallel_for(n, [&](std::size_t i) {
    const double s = r.s_grid[i];
    const Bounded b = base.power_integral(1.0 + s);
    base_values[i] = s * b.value;
    base_errors[i] = s * b.error;
    const double cs = std::exp((1.0 + s) * x.log_scale());
    r.values[i] = cs * base_values[i];
    r.errors[i] = cs * base_errors[i];
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(r.values[i])) {
      throw Error(ErrorCode::kDivergent,
                  "z1_seminorm: integral of x^(1+s) diverges at s = " + std::to_string(r.s_grid[i]) +
                      " (abscissa " + std::to_string(x.power_abscissa()) + ")");
    }
  }
  if (base.power_abscissa() < 1.0) {
    // trace class: s·ζ(1+s) → 0·ζ(1)
    r.converged = true;
    r.coefficients = {0.0, c * base.power_integral(1.0).value};
    r.notes = "trace class; the limit is 0";
    return r;
  }
  // smallest-s half
  const std::size_t start = n / 2;
  std::vector<std::vector<double>> cols(2);
  std::vector<double> y;
  double lo = kInf;
  double hi = -kInf;
  double err = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    cols[0].push_back(1.0);
    cols[1].push_back(r.s_grid[i]);
    y.push_back(base_values[i]);
    lo = std::min(lo, base_values[i]);
    hi = std::max(hi, base_values[i]);
    err = std::max(err, base_errors[i]);
  }
  const LinearFit fit = least_squares(cols, y);
  r.coefficients = {c * fit.coefficients[0], c * fit.coefficients[1]};
  const double a = std::max(0.0, fit.coefficients[0]);
  r.converged = fit.max_abs_residual <= options.tolerance * std::max(1.0, std::abs(a));
  if (r.converged) {
    r.value = c * a;
    r.notes = "extrapolated a + b*s on the smallest-s half";
  } else {
    r.value = c * hi;
    r.notes = "fit residual above tolerance; value is the grid limsup";
  }
  r.lo = c * std::max(0.0, std::min(lo, a) - err);
  r.hi = c * (std::max(hi, a) + err);
  return r;
}

ZpReport zp_seminorm(const Profile& x, double q, const Z1Options& options) {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw Error(ErrorCode::kInvalidArgument, "zp_seminorm: q must be >= 1");
  }
  ZpReport out;
  out.z1_of_power = z1_seminorm(q == 1.0 ? x : x.power(q), options);
  auto transform = [&](double factor) {
    SeminormReport s = out.z1_of_power;
    auto f = [&](double v) { return std::pow(factor * v, 1.0 / q); };
    s.value = f(s.value);
    s.lo = f(s.lo);
    s.hi = f(s.hi);
    return s;
  };
  out.plus = transform(1.0);
  out.norm = transform(q);
  return out;
}

PsiDiagnostics psi_diagnostics(const PsiFunction& psi, std::vector<double> betas,
                               std::vector<double> alphas) {
  PsiDiagnostics d;
  {
    SampledFunction g;
    g.grid = geometric_grid(1.0, 400.0, 600);
    g.values.resize(g.grid.size());
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
      const double u = g.grid[i];
      g.values[i] = std::exp(psi.log_value_at_log(u + kLn2) - psi.log_value_at_log(u));
    }
    LimitConfig cfg;
    cfg.regressors = {Regressor::kInvLog, Regressor::kInvLogSq};
    d.doubling = limit_estimate(g, cfg);
    d.doubling_to_one = d.doubling.converged && std::abs(*d.doubling.value - 1.0) <= 1e-2;
  }
  const auto grid = dense_log_grid(kDenseStart, 1e4);
  for (double beta : betas) {
    if (!(beta > 1.0)) throw Error(ErrorCode::kInvalidArgument, "psi_diagnostics: beta must be > 1");
    d.a_curve.push_back(grid_supremum(
        [&](double u) { return std::exp(psi.log_value_at_log(beta * u) - psi.log_value_at_log(u)); },
        grid, true));
  }
  d.betas = std::move(betas);
  bool finite = !d.a_curve.empty();
  double a_min = kInf;
  for (std::size_t i = 0; i < d.a_curve.size(); ++i) {
    finite = finite && !d.a_curve[i].divergent;
    if (d.betas[i] == *std::min_element(d.betas.begin(), d.betas.end())) a_min = d.a_curve[i].value;
  }
  d.condition_a = finite && a_min - 1.0 <= 0.05;
  for (double alpha : alphas) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "psi_diagnostics: alpha must lie in (0, 1)");
    }
    d.power_bound.push_back(grid_supremum(
        [&](double u) { return std::exp(psi.log_value_at_log(u) - alpha * u); }, grid, true));
  }
  d.alphas = std::move(alphas);
  return d;
}

}  // namespace singtrace
