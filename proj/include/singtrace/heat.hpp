#pragma once

#include <optional>
#include <string>
#include <vector>

#include "singtrace/means.hpp"
#include "singtrace/numeric.hpp"
#include "singtrace/profile.hpp"
#include "singtrace/spaces.hpp"
#include "singtrace/zeta.hpp"

namespace singtrace {

/// τ(e^{−t·T^{−q}}) = Σ exp(−t·μ_n^{−q}); zero singular values contribute 0.
Bounded heat_trace(const Profile& x, double q, double t);
/// Same with t = e^{log_t}, result as logs.
LogBounded heat_trace_log(const Profile& x, double q, double log_t);

/// F(λ) = λ^{-1}·τ(exp(−T^{−q}λ^{−q/p})) on a λ grid.
struct HeatProfile {
  double p = 1.0;
  double q = 2.0;
  std::vector<double> lambda_grid;
  std::vector<double> values;
  std::vector<double> errors;
};

/// λ from 2 to 2^24, two points per octave.
std::vector<double> default_lambda_grid();
HeatProfile heat_profile(const Profile& x, double p, double q,
                         const std::vector<double>& lambda_grid = default_lambda_grid());

struct HeatOptions {
  std::vector<double> lambda_grid = default_lambda_grid();
  /// a + b/λ over the last 40% of the grid
  LimitConfig limit = [] {
    LimitConfig c;
    c.tail_fraction = 0.4;
    c.regressors = {Regressor::kInv};
    return c;
  }();
  ZetaOptions zeta{};
  DixmierOptions dixmier{};
};

struct Theorem51Report {
  double p = 1.0;
  double q = 2.0;
  double gamma_factor = 1.0;   // Γ(p/q)
  HeatProfile profile;
  LimitEstimate heat;          // lim F(λ)
  ZetaLimit zeta;
  LimitEstimate zeta_side;     // (1/q)Γ(p/q)·lim (1/r)ζ(p + 1/r)
  LimitEstimate dixmier;       // τ_ω(x^p) with ψ₁
  LimitEstimate dixmier_side;  // (p/q)Γ(p/q)·τ_ω(x^p)
  double max_distance = 0.0;
  bool band_only = false;
  bool pass = false;
};

Theorem51Report heat_profile_limit(const Profile& x, double p, double q,
                                   const HeatOptions& options = {});

/// Non-decreasing β on [0, U] with β(0) = 0, linear between samples.
struct BetaFunction {
  std::vector<double> grid;
  std::vector<double> values;

  void validate() const;
  double domain_end() const { return grid.back(); }
};

/// Samples f on the grid (grid must start at 0).
BetaFunction make_beta(const std::vector<double>& grid, const std::function<double(double)>& f);

/// h(r)/r with h(r) = ∫_0^∞ e^{−t/r} dβ(t). Throws kGridTooShort unless
/// e^{−U/r} < 1e-12.
double karamata_transform(const BetaFunction& beta, double r);

/// β(μ) = ∫_0^μ e^{−v}·τ(exp(−e^{−vq/p}T^{−q})) dv, so that dβ/dv = F(e^v).
BetaFunction beta_from_heat(const Profile& x, double p, double q, double domain_end);

struct KaramataReport {
  std::vector<double> r_grid;
  std::vector<double> transform;  // h(r)/r
  std::vector<double> t_grid;
  std::vector<double> ratio;      // β(t)/t
  LimitEstimate transform_limit;
  LimitEstimate ratio_limit;
  double distance = 0.0;
};

/// Both sides of the Karamata identity, extrapolated with the given
/// regressors over ln r and ln t. The r grid runs up to U/27.7.
KaramataReport karamata_compare(const BetaFunction& beta,
                                std::vector<Regressor> regressors = {Regressor::kInvSqrt,
                                                                     Regressor::kInv});

struct HeatFit {
  bool accepted = false;
  std::string diagnostic;
  double p_hat = 0.0;
  double C = 0.0;
  double D = 0.0;               // constant lower-order term
  double max_rel_residual = 0.0;
  double predicted_residue = 0.0;  // 2C/Γ(p̂/2)
  std::vector<double> t_grid;
  std::vector<double> values;
  /// exponent used for cross-validation: the abscissa of convergence when
  /// it lies within 2% of p̂, else p̂
  double validation_p = 0.0;
  std::optional<ZetaLimit> residue;           // lim (s − p)ζ(s)
  std::optional<LimitEstimate> dixmier_side;  // p·τ_ω(x^p)
};

/// Fits τ(e^{−tT^{−2}}) ≈ C·t^{−p/2} + D on t = 2^{−k}, k = 4..16.
HeatFit heat_asymptotic_fit(const Profile& x, bool cross_validate = true);


/// ζ(s) = (1/Γ(s/q))∫_0^∞ t^{s/q−1}τ(e^{−tT^{−q}}) dt split at t = 1.
struct LaplaceSplit {
  double s = 0.0;
  double q = 2.0;
  double small_t = 0.0;  // ζ₁: t in (0, 1)
  double large_t = 0.0;  // ζ₂: t in (1, ∞)
  double total = 0.0;
  double direct = 0.0;   // zeta_value
  double rel_diff = 0.0;
};
LaplaceSplit laplace_zeta_split(const Profile& x, double s, double q);

}  // namespace singtrace
