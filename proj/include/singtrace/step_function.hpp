#pragma once

#include <optional>
#include <span>
#include <vector>

namespace singtrace {

/// Piecewise-constant function on [0, ∞). Piece i covers (t_{i-1}, t_i] with
/// t_0 = 0, and breakpoints are stored as natural logs so that abscissae like
/// 2^900 stay representable. `beyond_last` is the value on (t_k, ∞).
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> log_breakpoints, std::vector<double> values,
               double beyond_last = 0.0);

  /// Pieces of unit length: value[i] on (i, i+1].
  static StepFunction unit_pieces(std::span<const double> values);
  /// Pieces with the given lengths (all > 0), laid end to end from 0.
  static StepFunction from_lengths(std::span<const double> values,
                                   std::span<const double> lengths);

  const std::vector<double>& log_breakpoints() const noexcept { return log_breakpoints_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double beyond_last() const noexcept { return beyond_last_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  /// Non-increasing values and zero beyond the last breakpoint.
  bool rearranged() const noexcept { return rearranged_; }

  /// ln(t_i - t_{i-1}).
  double log_piece_length(std::size_t i) const;
  double value_at(double t) const;
  double value_at_log(double log_t) const;

 private:
  std::vector<double> log_breakpoints_;
  std::vector<double> values_;
  double beyond_last_ = 0.0;
  bool rearranged_ = true;
};

/// λ_t = measure of {f > t}, stored in log form. For t in
/// [levels[j-1], levels[j]) (levels[-1] = 0) the measure is exp(log_measures[j]);
/// λ_t = 0 for t >= levels.back(). Levels are the distinct positive values of
/// f in increasing order, so log_measures is non-increasing.
struct DistributionCurve {
  std::vector<double> levels;
  std::vector<double> log_measures;

  double log_lambda(double t) const;
  double lambda(double t) const;
};

namespace rearrange {

StepFunction decreasing_rearrangement(const StepFunction& f);
DistributionCurve distribution_function(const StepFunction& f);
StepFunction mu_from_distribution(const DistributionCurve& lambda);

/// ∫_0^t f; t = +∞ gives the total (+∞ if beyond_last > 0).
double partial_integral(const StepFunction& f, double t);
double partial_integral_log(const StepFunction& f, double log_t);

struct SubmajorizationResult {
  bool holds = true;
  /// ln t of the breakpoint with the largest excess ∫x* - ∫y*.
  std::optional<double> witness_log_t;
  double worst_excess = 0.0;
};
/// x ≺≺ y: ∫_0^t x* <= ∫_0^t y* for all t. Both partial integrals are
/// piecewise linear, so checking the merged breakpoints (plus t → ∞) is exact.
SubmajorizationResult submajorization_leq(const StepFunction& x, const StepFunction& y);

StepFunction pointwise_product(const StepFunction& f, const StepFunction& g);
StepFunction pointwise_power(const StepFunction& f, double exponent);

}  // namespace rearrange
}  // namespace singtrace
