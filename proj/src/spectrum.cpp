#include "singtrace/spectrum.hpp"

#include <cmath>

#include "singtrace/error.hpp"

namespace singtrace {

double tail_value(const SpectrumTail& tail, double n) {
  if (const auto* p = std::get_if<PowerTail>(&tail)) {
    return p->coefficient * std::pow(n, -p->exponent);
  }
  if (const auto* o = std::get_if<LogLogOscillatingTail>(&tail)) {
    const double y = n + o->offset;
    return (o->level + o->amplitude * std::sin(std::log(std::log(y)))) / y;
  }
  return 0.0;
}

Spectrum::Spectrum(std::vector<double> head, SpectrumTail tail, std::string name)
    : head_(std::move(head)), tail_(tail), name_(std::move(name)) {
  for (std::size_t i = 0; i < head_.size(); ++i) {
    const double v = head_[i];
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "spectrum: non-finite value", i + 1);
    if (v < 0.0) throw Error(ErrorCode::kInvalidArgument, "spectrum: negative value", i + 1);
    if (i > 0 && v > head_[i - 1]) {
      throw Error(ErrorCode::kNonMonotone,
                  "spectrum: head must be non-increasing (mu_" + std::to_string(i + 1) +
                      " > mu_" + std::to_string(i) + ")",
                  i + 1);
    }
  }
  if (const auto* p = std::get_if<PowerTail>(&tail_)) {
    if (!(p->coefficient > 0.0) || !std::isfinite(p->coefficient) || !(p->exponent > 0.0) ||
        !std::isfinite(p->exponent)) {
      throw Error(ErrorCode::kInvalidArgument, "spectrum: tail needs coefficient > 0 and exponent > 0");
    }
  }
  if (const auto* o = std::get_if<LogLogOscillatingTail>(&tail_)) {
    // the tail must be positive and decreasing from its first index on
    const double first = static_cast<double>(tail_start()) + o->offset;
    if (!(o->amplitude >= 0.0) || !(first > std::exp(1.0)) ||
        !(o->level - o->amplitude * (1.0 + 1.0 / std::log(first)) > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "spectrum: oscillating tail parameters do not give a decreasing sequence");
    }
  }
  if (has_tail() && !head_.empty()) {
    const double next = tail_value(tail_, static_cast<double>(tail_start()));
    if (head_.back() < next) {
      throw Error(ErrorCode::kTailContinuity,
                  "spectrum: tail value " + std::to_string(next) + " at index " +
                      std::to_string(tail_start()) + " exceeds last head value",
                  tail_start());
    }
  }
}

double Spectrum::mu(double n) const {
  if (!(n >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "spectrum: index must be >= 1");
  const double idx = std::ceil(n);
  if (idx <= static_cast<double>(head_.size())) return head_[static_cast<std::size_t>(idx) - 1];
  return tail_value(tail_, idx);
}

}  // namespace singtrace
