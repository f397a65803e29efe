#pragma once

#include <string>
#include <variant>
#include <vector>

namespace singtrace {

/// μ_n = coefficient · n^{-exponent} for n beyond the head.
struct PowerTail {
  double coefficient = 1.0;
  double exponent = 1.0;
};

/// μ_n = (level + amplitude·sin(ln ln(n + offset))) / (n + offset) beyond the
/// head. Shifted form of the slowly oscillating sequence (2 + sin(ln ln m))/m.
struct LogLogOscillatingTail {
  double level = 2.0;
  double amplitude = 1.0;
  double offset = 2.0;
};

using SpectrumTail = std::variant<std::monostate, PowerTail, LogLogOscillatingTail>;

/// Singular values μ_1 >= μ_2 >= ... >= 0: an explicit head plus an optional
/// analytic tail starting at index head().size() + 1.
class Spectrum {
 public:
  Spectrum() = default;
  /// Validates the invariants; throws Error with the offending 1-based index.
  explicit Spectrum(std::vector<double> head, SpectrumTail tail = {}, std::string name = {});

  const std::vector<double>& head() const noexcept { return head_; }
  const SpectrumTail& tail() const noexcept { return tail_; }
  const std::string& name() const noexcept { return name_; }
  bool has_tail() const noexcept { return !std::holds_alternative<std::monostate>(tail_); }
  std::size_t tail_start() const noexcept { return head_.size() + 1; }

  /// μ_n for n >= 1 (tail evaluated analytically).
  double mu(double n) const;

 private:
  std::vector<double> head_;
  SpectrumTail tail_;
  std::string name_;
};

double tail_value(const SpectrumTail& tail, double n);

}  // namespace singtrace
