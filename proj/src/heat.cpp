#include "singtrace/heat.hpp"

#include <algorithm>
#include <cmath>

#include "singtrace/error.hpp"

namespace singtrace {

LogBounded heat_trace_log(const Profile& x, double q, double log_t) {
  if (!(q > 0.0)) throw Error(ErrorCode::kInvalidArgument, "heat trace: q must be > 0");
  if (!std::isfinite(log_t)) throw Error(ErrorCode::kInvalidArgument, "heat trace: t must be > 0 and finite");
  return x.heat_log(q, log_t);
}

Bounded heat_trace(const Profile& x, double q, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "heat trace: t must be > 0");
  const LogBounded b = heat_trace_log(x, q, std::log(t));
  return {std::exp(b.log_value), std::exp(b.log_error)};
}

std::vector<double> default_lambda_grid() { return geometric_grid(2.0, std::ldexp(1.0, 24), 47); }

HeatProfile heat_profile(const Profile& x, double p, double q, const std::vector<double>& lambda_grid) {
  if (!(p > 0.0) || !(q > 0.0)) throw Error(ErrorCode::kInvalidArgument, "heat profile: p, q must be > 0");
  HeatProfile h;
  h.p = p;
  h.q = q;
  h.lambda_grid = lambda_grid;
  const std::size_t n = lambda_grid.size();
  h.values.resize(n);
  h.errors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lambda_grid[i] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "heat profile: λ must be > 0", i + 1);
  }
  parallel_for(n, [&](std::size_t i) {
    const double ll = std::log(lambda_grid[i]);
    const LogBounded b = heat_trace_log(x, q, -(q / p) * ll);
    h.values[i] = std::exp(b.log_value - ll);
    h.errors[i] = std::exp(b.log_error - ll);
  });
  return h;
}

Theorem51Report heat_profile_limit(const Profile& x, double p, double q, const HeatOptions& options) {
  if (!(p >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "heat limit: p must be >= 1");
  Theorem51Report r;
  r.p = p;
  r.q = q;
  r.gamma_factor = gamma(p / q);
  r.profile = heat_profile(x, p, q, options.lambda_grid);
  SampledFunction f;
  for (double l : r.profile.lambda_grid) f.grid.push_back(std::log(l));
  f.values = r.profile.values;
  r.heat = limit_estimate(f, options.limit);
  r.zeta = zeta_limit(x, p, options.zeta);
  r.zeta_side = scale_estimate(r.zeta.estimate, r.gamma_factor / q);
  r.dixmier = dixmier_estimate(p == 1.0 ? x : x.power(p), PsiFunction::psi1(), options.dixmier);
  r.dixmier_side = scale_estimate(r.dixmier, p * r.gamma_factor / q);
  const LimitEstimate* sides[] = {&r.heat, &r.zeta_side, &r.dixmier_side};
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double d = band_distance(*sides[i], *sides[j]);
      r.max_distance = std::max(r.max_distance, d);
      ok = ok && d <= sides[i]->tolerance + sides[j]->tolerance;
    }
  }
  r.band_only = !(r.heat.converged && r.zeta.estimate.converged && r.dixmier.converged);
  r.pass = ok;
  return r;
}

void BetaFunction::validate() const {
  if (grid.size() != values.size() || grid.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "beta: need matching grid and values, at least two");
  }
  if (grid.front() != 0.0 || values.front() != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "beta must start at beta(0) = 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!std::isfinite(values[i])) throw Error(ErrorCode::kNonFiniteValue, "beta: non-finite value", i + 1);
    if (grid[i] < grid[i - 1]) throw Error(ErrorCode::kNonMonotone, "beta: grid must increase", i + 1);
    if (values[i] < values[i - 1]) throw Error(ErrorCode::kNonMonotone, "beta must be non-decreasing", i + 1);
  }
}

BetaFunction make_beta(const std::vector<double>& grid, const std::function<double(double)>& f) {
  BetaFunction b;
  b.grid = grid;
  b.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) b.values[i] = grid[i] == 0.0 ? 0.0 : f(grid[i]);
  b.validate();
  return b;
}

double karamata_transform(const BetaFunction& beta, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::kInvalidArgument, "karamata: r must be > 0");
  beta.validate();
  if (beta.domain_end() / r < 12.0 * std::log(10.0)) {
    throw Error(ErrorCode::kGridTooShort,
                "karamata: beta sampled to " + std::to_string(beta.domain_end()) + ", need " +
                    std::to_string(12.0 * std::log(10.0) * r) + " for r = " + std::to_string(r));
  }
  CompensatedSum sum;
  for (std::size_t i = 1; i < beta.grid.size(); ++i) {
    const double a = beta.grid[i - 1];
    const double b = beta.grid[i];
    const double rise = beta.values[i] - beta.values[i - 1];
    if (rise == 0.0) continue;
    if (b == a) {
      sum.add(rise * std::exp(-a / r) / r);  // jump
    } else {
      // ∫_a^b e^{-t/r}·(rise/(b-a)) dt / r
      sum.add(rise / (b - a) * std::exp(-a / r) * -std::expm1(-(b - a) / r));
    }
  }
  return sum.value();
}

BetaFunction beta_from_heat(const Profile& x, double p, double q, double domain_end) {
  if (!(domain_end > 20.0)) throw Error(ErrorCode::kInvalidArgument, "beta: domain must extend past 20");
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(0.05 * i);
  for (double v = 20.0 * 1.01; v < domain_end; v *= 1.01) grid.push_back(v);
  grid.push_back(domain_end);
  std::vector<double> slope(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    slope[i] = std::exp(heat_trace_log(x, q, -(q / p) * grid[i]).log_value - grid[i]);
  });
  BetaFunction b;
  b.grid = grid;
  b.values.assign(grid.size(), 0.0);
  CompensatedSum acc;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    acc.add(0.5 * (slope[i - 1] + slope[i]) * (grid[i] - grid[i - 1]));
    b.values[i] = std::max(acc.value(), b.values[i - 1]);
  }
  return b;
}

KaramataReport karamata_compare(const BetaFunction& beta, std::vector<Regressor> regressors) {
  beta.validate();
  KaramataReport rep;
  const double r_max = beta.domain_end() / (12.0 * std::log(10.0) + 0.1);
  if (!(r_max > 1000.0)) throw Error(ErrorCode::kGridTooShort, "karamata: beta domain too short");
  rep.r_grid = geometric_grid(1.0, r_max, 48);
  rep.transform.resize(rep.r_grid.size());
  parallel_for(rep.r_grid.size(), [&](std::size_t i) { rep.transform[i] = karamata_transform(beta, rep.r_grid[i]); });
  rep.t_grid = geometric_grid(1.0, beta.domain_end(), 64);
  for (double t : rep.t_grid) {
    const auto it = std::lower_bound(beta.grid.begin(), beta.grid.end(), t);
    std::size_t j = static_cast<std::size_t>(it - beta.grid.begin());
    double v = beta.values.back();
    if (j < beta.grid.size()) {
      if (beta.grid[j] == t || j == 0) {
        v = beta.values[j];
      } else {
        const double w = (t - beta.grid[j - 1]) / (beta.grid[j] - beta.grid[j - 1]);
        v = beta.values[j - 1] + w * (beta.values[j] - beta.values[j - 1]);
      }
    }
    rep.ratio.push_back(v / t);
  }
  LimitConfig cfg;
  cfg.regressors = std::move(regressors);
  SampledFunction a;
  for (double r : rep.r_grid) a.grid.push_back(std::log(r));
  a.values = rep.transform;
  rep.transform_limit = limit_estimate(a, cfg);
  SampledFunction b;
  for (double t : rep.t_grid) b.grid.push_back(std::log(t));
  b.values = rep.ratio;
  rep.ratio_limit = limit_estimate(b, cfg);
  rep.distance = band_distance(rep.transform_limit, rep.ratio_limit);
  return rep;
}

namespace {

struct PowerFit {
  double c = 0.0;
  double d = 0.0;
  double rms = kInf;
  double max_rel = kInf;
};

PowerFit fit_power(const std::vector<double>& t, const std::vector<double>& h, double p) {
  std::vector<std::vector<double>> cols(2);
  std::vector<double> y(t.size(), 1.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    cols[0].push_back(std::pow(t[i], -0.5 * p) / h[i]);
    cols[1].push_back(1.0 / h[i]);
  }
  const LinearFit f = least_squares(cols, y);
  return {f.coefficients[0], f.coefficients[1], f.rms_residual, f.max_abs_residual};
}

}  // namespace

HeatFit heat_asymptotic_fit(const Profile& x, bool cross_validate) {
  constexpr double kPMin = 0.05;
  constexpr double kPMax = 8.0;
  HeatFit out;
  for (int k = 4; k <= 16; ++k) {
    out.t_grid.push_back(std::ldexp(1.0, -k));
    out.values.push_back(heat_trace(x, 2.0, out.t_grid.back()).value);
  }
  for (double v : out.values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      out.diagnostic = "heat trace vanishes or overflows on the grid";
      return out;
    }
  }
  double best_p = kPMin;
  double best = kInf;
  for (double p = kPMin; p <= kPMax + 1e-12; p += 0.01) {
    const double rms = fit_power(out.t_grid, out.values, p).rms;
    if (rms < best) {
      best = rms;
      best_p = p;
    }
  }
  const double lo = std::max(kPMin, best_p - 0.01);
  const double hi = std::min(kPMax, best_p + 0.01);
  out.p_hat = golden_section_max(
      [&](double p) { return -fit_power(out.t_grid, out.values, p).rms; }, lo, hi, 100);
  const PowerFit f = fit_power(out.t_grid, out.values, out.p_hat);
  out.C = f.c;
  out.D = f.d;
  out.max_rel_residual = f.max_rel;
  if (out.p_hat < 0.1 || out.p_hat > kPMax - 0.1) {
    out.diagnostic = "no power law: exponent estimate at the search boundary";
    return out;
  }
  if (out.max_rel_residual > 1e-3 || !(out.C > 0.0)) {
    out.diagnostic = "no power law: fit residual " + std::to_string(out.max_rel_residual);
    return out;
  }
  out.accepted = true;
  out.predicted_residue = 2.0 * out.C / gamma(0.5 * out.p_hat);
  if (cross_validate) {
    try {
      // the pole sits at the abscissa of convergence; p̂ only locates it
      const double abscissa = x.power_abscissa();
      out.validation_p = std::abs(abscissa - out.p_hat) <= 0.02 * out.p_hat ? abscissa : out.p_hat;
      out.residue = residue_estimate(x, out.validation_p);
      const Profile xp = x.power(out.validation_p);
      out.dixmier_side = scale_estimate(dixmier_estimate(xp, PsiFunction::psi1()), out.validation_p);
    } catch (const Error& e) {
      out.diagnostic = std::string("cross-validation skipped: ") + e.what();
    }
  }
  return out;
}

LaplaceSplit laplace_zeta_split(const Profile& x, double s, double q) {
  if (!(q > 0.0)) throw Error(ErrorCode::kInvalidArgument, "laplace: q must be > 0");
  LaplaceSplit out;
  out.s = s;
  out.q = q;
  out.direct = zeta_value(x, s).value;
  const double x0 = x.value_at_zero();
  if (x0 == 0.0) return out;
  const double a = s / q;
  const double w_lo = -40.0 * q / (s - x.power_abscissa()) - 10.0;
  const double w_hi = std::log(800.0) + q * std::log(x0);
  auto integrand = [&](double w) {
    const LogBounded h = heat_trace_log(x, q, w);
    return std::exp(a * w + h.log_value);
  };
  const double lg = log_gamma(a);
  // unit panels near t = 1, coarse ones on the far exponential tail
  auto integrate = [&](double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    double sum = 0.0;
    const double near = std::max(lo, std::min(hi, -40.0));
    if (near > lo) sum += gauss_legendre(integrand, lo, near, 64);
    sum += gauss_legendre(integrand, near, hi, std::max(4, static_cast<int>(std::ceil(hi - near))));
    return std::exp(std::log(sum) - lg);
  };
  out.small_t = integrate(w_lo, std::min(0.0, w_hi));
  out.large_t = integrate(0.0, std::max(0.0, w_hi));
  out.total = out.small_t + out.large_t;
  out.rel_diff = std::abs(out.total - out.direct) / out.direct;
  return out;
}

}  // namespace singtrace
