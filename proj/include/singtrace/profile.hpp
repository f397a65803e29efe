#pragma once

#include <memory>
#include <string>
#include <vector>

#include "singtrace/numeric.hpp"
#include "singtrace/spectrum.hpp"
#include "singtrace/step_function.hpp"

namespace singtrace {

namespace detail {
class ProfileModel;
}

/// Value and absolute error bound, both kept as natural logs so that heat
/// traces at tiny t (values like e^{7000}) do not overflow.
struct LogBounded {
  double log_value = -kInf;
  double log_error = -kInf;
};

/// The singular value function s ↦ μ_s of a positive compact operator: a
/// non-increasing function on (0, ∞). Built from a Spectrum (unit pieces,
/// μ_n on (n-1, n]), from a StepFunction, or from one of the analytic corpus
/// models. Cheap to copy; the underlying model is immutable and shared.
class Profile {
 public:
  Profile(const Spectrum& spectrum);        // NOLINT(google-explicit-constructor)
  Profile(const StepFunction& step);        // NOLINT(google-explicit-constructor)

  /// z(t) = n/2^{n²} on (2^{(n-1)²}, 2^{n²}], z = 1 on (0, 1], raised to
  /// `exponent`. Pieces exist for every n; `witness_count` bounds the pieces
  /// used for supremum witnesses.
  static Profile counterexample(double exponent, int witness_count);
  /// μ_s = 1/(1+s).
  static Profile reciprocal();

  Profile scaled(double factor) const;
  Profile power(double exponent) const;
  Profile renamed(std::string name) const;
  /// The same profile with scale factor 1.
  Profile unscaled() const;

  const std::string& name() const noexcept { return name_; }
  std::string kind() const;
  double log_scale() const noexcept { return log_scale_; }
  double exponent() const noexcept { return exponent_; }

  /// ln μ at t = e^u (−∞ where μ vanishes).
  double log_value_at_log(double u) const;
  double value_at_log(double u) const { return std::exp(log_value_at_log(u)); }
  double value_at(double t) const;

  /// ∫_0^{e^u} μ^s; u = +∞ gives the full integral (+∞ if divergent).
  Bounded partial_power_integral_log(double u, double s) const;
  double partial_integral_log(double u) const { return partial_power_integral_log(u, 1.0).value; }
  /// ∫_0^∞ μ^s = Σ μ_n^s for spectra.
  Bounded power_integral(double s) const { return partial_power_integral_log(kInf, s); }

  /// ∫_0^∞ exp(−t μ^{−q}) with t = e^{log_t}; μ = 0 contributes nothing.
  LogBounded heat_log(double q, double log_t) const;

  /// ln λ_a: log-measure of {μ > a}.
  double log_level_measure(double a) const;
  double log_level_measure_log(double log_a) const;

  /// ∫ μ^s < ∞ iff s > abscissa (0 for finite support).
  double power_abscissa() const;
  bool finite_support() const;
  double value_at_zero() const;

  /// ln t horizon for supremum searches (witness sets).
  double default_log_horizon() const;
  /// ln t horizon for limit estimation along t → ∞.
  double limit_log_horizon() const;
  /// ln t abscissae of piece right ends (or sample points) up to the horizon.
  std::vector<double> witness_log_points(double log_horizon) const;
  /// True when ratios of the form P(t)/ψ(t) and t·μ(t)/ψ(t) attain their
  /// suprema at the witness points (true piecewise-constant models).
  bool exact_witnesses() const;

 private:
  Profile(std::shared_ptr<const detail::ProfileModel> model, std::string name);

  std::shared_ptr<const detail::ProfileModel> model_;
  std::string name_;
  double log_scale_ = 0.0;
  double exponent_ = 1.0;
};

}  // namespace singtrace
