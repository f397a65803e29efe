#include "singtrace/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "singtrace/error.hpp"
#include "singtrace/numeric.hpp"

namespace singtrace {

StepFunction::StepFunction(std::vector<double> log_breakpoints, std::vector<double> values,
                           double beyond_last)
    : log_breakpoints_(std::move(log_breakpoints)),
      values_(std::move(values)),
      beyond_last_(beyond_last) {
  if (log_breakpoints_.size() != values_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "StepFunction: breakpoints and values differ in length");
  }
  if (!std::isfinite(beyond_last_) || beyond_last_ < 0.0) {
    throw Error(ErrorCode::kNonFiniteValue, "StepFunction: beyond_last must be finite and >= 0");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || !std::isfinite(log_breakpoints_[i])) {
      throw Error(ErrorCode::kNonFiniteValue, "StepFunction: non-finite entry", i + 1);
    }
    if (values_[i] < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "StepFunction: negative value", i + 1);
    }
    if (i > 0 && !(log_breakpoints_[i] > log_breakpoints_[i - 1])) {
      throw Error(ErrorCode::kNonMonotone,
                  "StepFunction: breakpoints must be strictly increasing", i + 1);
    }
  }
  rearranged_ = beyond_last_ == 0.0 &&
                std::is_sorted(values_.rbegin(), values_.rend());
}

StepFunction StepFunction::unit_pieces(std::span<const double> values) {
  std::vector<double> bps(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) bps[i] = std::log(static_cast<double>(i + 1));
  return StepFunction(std::move(bps), std::vector<double>(values.begin(), values.end()));
}

StepFunction StepFunction::from_lengths(std::span<const double> values,
                                        std::span<const double> lengths) {
  if (values.size() != lengths.size()) {
    throw Error(ErrorCode::kInvalidArgument, "from_lengths: size mismatch");
  }
  std::vector<double> bps(values.size());
  double cum = -kInf;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
      throw Error(ErrorCode::kInvalidArgument, "from_lengths: lengths must be positive", i + 1);
    }
    cum = log_add_exp(cum, std::log(lengths[i]));
    bps[i] = cum;
  }
  return StepFunction(std::move(bps), std::vector<double>(values.begin(), values.end()));
}

double StepFunction::log_piece_length(std::size_t i) const {
  if (i == 0) return log_breakpoints_[0];
  return log_sub_exp(log_breakpoints_[i], log_breakpoints_[i - 1]);
}

double StepFunction::value_at_log(double log_t) const {
  const auto it = std::lower_bound(log_breakpoints_.begin(), log_breakpoints_.end(), log_t);
  if (it == log_breakpoints_.end()) return beyond_last_;
  return values_[static_cast<std::size_t>(it - log_breakpoints_.begin())];
}

double StepFunction::value_at(double t) const {
  return value_at_log(t > 0.0 ? std::log(t) : -kInf);
}

double DistributionCurve::log_lambda(double t) const {
  const auto it = std::upper_bound(levels.begin(), levels.end(), t);
  if (it == levels.end()) return -kInf;
  return log_measures[static_cast<std::size_t>(it - levels.begin())];
}

double DistributionCurve::lambda(double t) const { return std::exp(log_lambda(t)); }

namespace rearrange {
namespace {

struct Level {
  double value;
  double log_length;
};

// Distinct positive values in decreasing order with their total measure.
// Shared by the rearrangement and the distribution function so both see the
// same arithmetic.
std::vector<Level> grouped_levels(const StepFunction& f) {
  if (f.beyond_last() != 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "rearrangement requires a function vanishing beyond its last breakpoint");
  }
  std::vector<std::size_t> order;
  order.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values()[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return f.values()[a] > f.values()[b];
  });
  std::vector<Level> levels;
  for (std::size_t idx : order) {
    const double v = f.values()[idx];
    const double ll = f.log_piece_length(idx);
    if (!levels.empty() && levels.back().value == v) {
      levels.back().log_length = log_add_exp(levels.back().log_length, ll);
    } else {
      levels.push_back({v, ll});
    }
  }
  return levels;
}

// ln of the cumulative measures of the grouped levels.
std::vector<double> cumulative_log_measures(const std::vector<Level>& levels) {
  std::vector<double> cum(levels.size());
  double acc = -kInf;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    acc = log_add_exp(acc, levels[j].log_length);
    cum[j] = acc;
  }
  return cum;
}

}  // namespace

StepFunction decreasing_rearrangement(const StepFunction& f) {
  const auto levels = grouped_levels(f);
  const auto cum = cumulative_log_measures(levels);
  std::vector<double> values(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j) values[j] = levels[j].value;
  return StepFunction(cum, std::move(values));
}

DistributionCurve distribution_function(const StepFunction& f) {
  if (f.rearranged()) {
    // breakpoints already are the cumulative measures; reading them keeps λ exact
    DistributionCurve out;
    const auto& v = f.values();
    for (std::size_t i = v.size(); i-- > 0;) {
      if (v[i] <= 0.0) continue;
      if (!out.levels.empty() && out.levels.back() == v[i]) continue;
      std::size_t last = i;
      while (last + 1 < v.size() && v[last + 1] == v[i]) ++last;
      out.levels.push_back(v[i]);
      out.log_measures.push_back(f.log_breakpoints()[last]);
    }
    return out;
  }
  const auto levels = grouped_levels(f);
  const auto cum = cumulative_log_measures(levels);
  DistributionCurve out;
  out.levels.resize(levels.size());
  out.log_measures.resize(levels.size());
  const std::size_t m = levels.size();
  for (std::size_t j = 0; j < m; ++j) {
    out.levels[j] = levels[m - 1 - j].value;
    out.log_measures[j] = cum[m - 1 - j];
  }
  return out;
}

StepFunction mu_from_distribution(const DistributionCurve& lambda) {
  if (lambda.levels.size() != lambda.log_measures.size()) {
    throw Error(ErrorCode::kInvalidArgument, "DistributionCurve: size mismatch");
  }
  std::vector<double> bps;
  std::vector<double> values;
  // μ_s = inf{t : λ_t <= s}; walk from the highest level down.
  for (std::size_t k = lambda.levels.size(); k-- > 0;) {
    const double lm = lambda.log_measures[k];
    if (lm == -kInf) continue;
    if (!bps.empty()) {
      if (lm < bps.back()) {
        throw Error(ErrorCode::kNonMonotone, "DistributionCurve must be non-increasing", k + 1);
      }
      if (lm == bps.back()) continue;  // plateau: the inf picks the larger level already stored
    }
    bps.push_back(lm);
    values.push_back(lambda.levels[k]);
  }
  return StepFunction(std::move(bps), std::move(values));
}

double partial_integral_log(const StepFunction& f, double log_t) {
  if (std::isnan(log_t)) throw Error(ErrorCode::kInvalidArgument, "partial_integral: NaN t");
  CompensatedSum sum;
  const auto& bps = f.log_breakpoints();
  double prev = -kInf;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f.values()[i];
    if (bps[i] <= log_t) {
      if (v > 0.0) sum.add(std::exp(std::log(v) + f.log_piece_length(i)));
      prev = bps[i];
      continue;
    }
    if (v > 0.0 && log_t > prev) sum.add(std::exp(std::log(v) + log_sub_exp(log_t, prev)));
    return sum.value();
  }
  if (f.beyond_last() > 0.0 && log_t > prev) {
    if (log_t == kInf) return kInf;
    sum.add(std::exp(std::log(f.beyond_last()) + log_sub_exp(log_t, prev)));
  }
  return sum.value();
}

double partial_integral(const StepFunction& f, double t) {
  if (t < 0.0) throw Error(ErrorCode::kInvalidArgument, "partial_integral: t must be >= 0");
  return partial_integral_log(f, t > 0.0 ? std::log(t) : -kInf);
}

SubmajorizationResult submajorization_leq(const StepFunction& x, const StepFunction& y) {
  const StepFunction xs = x.rearranged() ? x : decreasing_rearrangement(x);
  const StepFunction ys = y.rearranged() ? y : decreasing_rearrangement(y);
  std::vector<double> merged;
  merged.reserve(xs.size() + ys.size());
  std::merge(xs.log_breakpoints().begin(), xs.log_breakpoints().end(),
             ys.log_breakpoints().begin(), ys.log_breakpoints().end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  // running partial integrals along the merged grid
  SubmajorizationResult result;
  result.worst_excess = -kInf;
  std::size_t ix = 0;
  std::size_t iy = 0;
  CompensatedSum px;
  CompensatedSum py;
  double prev = -kInf;
  auto advance = [](const StepFunction& f, std::size_t& i, double from, double to,
                    CompensatedSum& acc) {
    while (i < f.size() && f.log_breakpoints()[i] < to) ++i;
    if (i >= f.size()) return;
    const double v = f.values()[i];
    if (v > 0.0) acc.add(std::exp(std::log(v) + log_sub_exp(to, from)));
  };
  for (double u : merged) {
    advance(xs, ix, prev, u, px);
    advance(ys, iy, prev, u, py);
    prev = u;
    const double excess = px.value() - py.value();
    const double slack = 1e-13 * std::max({1.0, std::abs(px.value()), std::abs(py.value())});
    if (excess > result.worst_excess) {
      result.worst_excess = excess;
      result.witness_log_t = u;
    }
    if (excess > slack) result.holds = false;
  }
  if (merged.empty()) result.worst_excess = 0.0;
  if (result.holds) result.witness_log_t.reset();
  return result;
}

StepFunction pointwise_product(const StepFunction& f, const StepFunction& g) {
  std::vector<double> merged;
  std::merge(f.log_breakpoints().begin(), f.log_breakpoints().end(),
             g.log_breakpoints().begin(), g.log_breakpoints().end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  std::vector<double> values(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    values[i] = f.value_at_log(merged[i]) * g.value_at_log(merged[i]);
  }
  return StepFunction(std::move(merged), std::move(values), f.beyond_last() * g.beyond_last());
}

StepFunction pointwise_power(const StepFunction& f, double exponent) {
  if (!(exponent > 0.0)) throw Error(ErrorCode::kInvalidArgument, "pointwise_power: exponent must be > 0");
  std::vector<double> values(f.values());
  for (double& v : values) v = std::pow(v, exponent);
  return StepFunction(f.log_breakpoints(), std::move(values), std::pow(f.beyond_last(), exponent));
}

}  // namespace rearrange
}  // namespace singtrace
