#pragma once

#include <optional>
#include <string>
#include <vector>

#include "singtrace/profile.hpp"
#include "singtrace/psi.hpp"

namespace singtrace {

enum class Domain {
  kRealLine,        // abscissae are u ∈ ℝ
  kHalfLine,        // multiplicative half-line; abscissae stored as ln t
};

/// Function sampled on an increasing grid. On the half-line the stored
/// abscissae are ln t, so grids uniform in ln t are uniform in storage.
struct SampledFunction {
  Domain domain = Domain::kHalfLine;
  std::vector<double> grid;
  std::vector<double> values;

  void validate() const;
  /// Linear interpolation in the stored coordinate; nullopt outside the grid.
  std::optional<double> interpolate(double x) const;
};

enum class Transform {
  kCesaro,        // H(f)(u) = (1/u)∫_0^u f                     (real line)
  kLogCesaro,     // M(g)(t) = (1/ln t)∫_1^t g(s) ds/s           (half-line)
  kDilation,      // D_a(f)(x) = f(x/a)                          (both)
  kTranslation,   // T_b(f)(x) = f(x + b)                        (real line)
  kPower,         // P^a(g)(t) = g(t^a)                          (half-line)
  kLog,           // L(f) = f∘ln: real line → half-line
  kLogInverse,    // L^{-1}(g) = g∘exp: half-line → real line
};

/// Applies the transform; the result lives on the part of the grid where
/// it is defined (u > 0 for H, t > 1 for M, inside the source range for
/// resampling transforms). Throws kDomainMismatch on the wrong domain.
SampledFunction apply_transform(const SampledFunction& f, Transform op, double param = 1.0);

enum class Regressor {
  kInvLog,          // 1/ln t
  kLogLogOverLog,   // ln ln t / ln t
  kInvLogSq,        // 1/ln² t
  kInv,             // 1/t
  kInvSqrt,         // 1/√t
};

struct LimitConfig {
  double tail_fraction = 0.5;
  double tolerance = 1e-3;
  int max_cesaro = 3;
  std::vector<Regressor> regressors{Regressor::kInvLog};
  /// regressors used once at least one Cesàro mean has been taken
  std::vector<Regressor> cesaro_regressors{Regressor::kInvLog, Regressor::kLogLogOverLog};
  double min_tail_decades = 2.0;
};

/// Numerical stand-in for an ω-limit as t → ∞: the band [liminf, limsup]
/// that every admissible invariant state must respect, and a single value
/// only when the (smoothed, detrended) tail collapses below tolerance.
struct LimitEstimate {
  std::optional<double> value;
  double liminf = 0.0;
  double limsup = 0.0;
  bool converged = false;
  int cesaro_iterations = 0;
  std::string model;
  std::vector<double> coefficients;
  double fit_residual = 0.0;
  double tolerance = 0.0;
  SampledFunction samples;

  double width() const { return limsup - liminf; }
  /// value when converged, otherwise the band midpoint
  double central() const { return value ? *value : 0.5 * (liminf + limsup); }
};

/// Throws kGridTooShort when the tail spans fewer than min_tail_decades.
LimitEstimate limit_estimate(const SampledFunction& g, const LimitConfig& config = {});

struct DixmierOptions {
  /// ln t horizon; 0 selects the profile's limit horizon
  double log_horizon = 0.0;
  std::size_t points = 2000;
  LimitConfig limit{};
};

/// ω-lim a(x, t) with a(x, t) = (1/ψ(t))∫_0^t x*. Throws kHypothesis when x
/// is not in M(ψ).
LimitEstimate dixmier_estimate(const Profile& x, const PsiFunction& psi,
                               const DixmierOptions& options = {});

/// ln t grid from t = e to the horizon, geometric in ln t.
std::vector<double> limit_log_grid(double log_horizon, std::size_t points);

struct TripleReport {
  LimitEstimate weighted_mean;     // (1/ψ(t))∫_0^t μ
  LimitEstimate truncated;         // (1/ψ(t))·τ(T χ_{(1/t,∞)}(T))
  LimitEstimate truncated_window;  // (1/ψ(t))·τ(T χ_{(1/t,1)}(T))
  /// largest pairwise gap: |value difference| when both converged, band
  /// distance otherwise
  double max_distance = 0.0;
  bool flags_agree = true;
};

/// Evaluates the three equivalent Dixmier expressions. ψ must satisfy the
/// doubling and power conditions (psi_diagnostics), else kHypothesis.
TripleReport prop_equivalence_triple(const Profile& x, const PsiFunction& psi,
                                     const DixmierOptions& options = {});

/// Distance between two bands (0 when they overlap).
double band_distance(const LimitEstimate& a, const LimitEstimate& b);

}  // namespace singtrace
