#include "singtrace/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "singtrace/error.hpp"

namespace singtrace {

namespace {

constexpr double kAbscissaMargin = 1e-7;

}  // namespace

Bounded zeta_value(const Profile& x, double s) {
  if (!std::isfinite(s)) throw Error(ErrorCode::kInvalidArgument, "zeta: s must be finite");
  const double abscissa = x.power_abscissa();
  if (s - abscissa < kAbscissaMargin) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "zeta(" << s << ") diverges or is too close to the abscissa " << abscissa;
    throw Error(ErrorCode::kDivergent, msg.str());
  }
  return x.power_integral(s);
}

std::vector<double> default_r_grid() { return geometric_grid(2.0, std::ldexp(1.0, 20), 19); }

LimitConfig zeta_limit_config() {
  LimitConfig c;
  c.regressors = {Regressor::kInv};
  return c;
}

Bounded scaled_zeta(const Profile& x, double p, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "scaled zeta: h must be > 0");
  const Bounded z = zeta_value(x, p + h);
  return {h * z.value, h * z.error};
}

ZetaCurve zeta_curve(const Profile& x, double p, const std::vector<double>& r_grid) {
  if (!(p > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zeta: p must be > 0");
  ZetaCurve c;
  c.p = p;
  c.r_grid = r_grid;
  const std::size_t n = r_grid.size();
  c.s_grid.resize(n);
  c.values.resize(n);
  c.errors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(r_grid[i] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zeta: r must be > 0", i + 1);
    c.s_grid[i] = p + 1.0 / r_grid[i];
    zeta_value(x, c.s_grid[i]);  // reject before spawning work
  }
  parallel_for(n, [&](std::size_t i) {
    const Bounded b = scaled_zeta(x, p, 1.0 / r_grid[i]);
    c.values[i] = b.value;
    c.errors[i] = b.error;
  });
  return c;
}

namespace {

ZetaLimit limit_from_curve(const Profile& x, ZetaCurve curve, const LimitConfig& cfg) {
  ZetaLimit out;
  SampledFunction f;
  f.grid.resize(curve.r_grid.size());
  for (std::size_t i = 0; i < f.grid.size(); ++i) f.grid[i] = std::log(curve.r_grid[i]);
  f.values = curve.values;
  out.estimate = limit_estimate(f, cfg);
  if (curve.p == 1.0 && out.estimate.converged) out.psi1_norm = marcinkiewicz_norm(x, PsiFunction::psi1());
  out.curve = std::move(curve);
  return out;
}

}  // namespace

ZetaLimit zeta_limit(const Profile& x, double p, const ZetaOptions& options) {
  return limit_from_curve(x, zeta_curve(x, p, options.r_grid), options.limit);
}

ZetaLimit residue_estimate(const Profile& x, double p, const ZetaOptions& options) {
  return limit_from_curve(x, zeta_curve(x, p, options.r_grid), options.limit);
}

LimitEstimate scale_estimate(const LimitEstimate& e, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::kInvalidArgument, "scale factor must be > 0");
  LimitEstimate out = e;
  if (out.value) *out.value *= c;
  out.liminf *= c;
  out.limsup *= c;
  out.tolerance *= c;
  for (double& v : out.coefficients) v *= c;
  out.fit_residual *= c;
  for (double& v : out.samples.values) v *= c;
  return out;
}

Theorem47Report theorem47_check(const Profile& x, double p, const ZetaOptions& zeta,
                                const DixmierOptions& dixmier) {
  Theorem47Report r;
  r.p = p;
  r.zeta = zeta_limit(x, p, zeta);
  const Profile xp = p == 1.0 ? x : x.power(p);
  r.dixmier = dixmier_estimate(xp, PsiFunction::psi1(), dixmier);
  r.scaled_dixmier = scale_estimate(r.dixmier, p);
  r.distance = band_distance(r.zeta.estimate, r.scaled_dixmier);
  r.band_only = !(r.zeta.estimate.converged && r.dixmier.converged);
  r.pass = r.distance <= r.zeta.estimate.tolerance + r.scaled_dixmier.tolerance;
  for (std::size_t i = 0; i < r.zeta.curve.r_grid.size(); ++i) {
    const double rr = r.zeta.curve.r_grid[i];
    const double lhs = r.zeta.curve.values[i];
    const double h = 1.0 / (p * rr);
    const double rhs = p * h * xp.power_integral(1.0 + h).value;
    const double gap = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
    r.convexification_gap = std::max(r.convexification_gap, lhs == rhs ? 0.0 : gap);
  }
  return r;
}

}  // namespace singtrace
