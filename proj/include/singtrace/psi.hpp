#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace singtrace {

enum class PsiKind { kPsi1, kPsiP, kLogSq, kLog1p, kLinear, kCustom };

/// Concave normalizing function ψ with ψ(0) = 0. Every evaluation goes
/// through the log form u = ln t ↦ ln ψ(e^u), which stays finite for
/// abscissae far beyond double range.
class PsiFunction {
 public:
  /// t·ln 2 on [0, 1], ln(1 + t) beyond.
  static PsiFunction psi1();
  /// t on [0, 1], t^{1-1/p} beyond; p > 1.
  static PsiFunction psi_p(double p);
  /// ln²(1 + t).
  static PsiFunction log_sq();
  /// ln(1 + t).
  static PsiFunction log1p();
  /// ψ(t) = t.
  static PsiFunction linear();
  /// `log_eval` maps u to ln ψ(e^u).
  static PsiFunction custom(std::string name, std::function<double(double)> log_eval);
  /// Piecewise-linear through (t_i, ψ_i), linear to the origin below t_0 and
  /// a power law fitted to the last two points beyond t_n.
  static PsiFunction tabulated(std::vector<double> t, std::vector<double> psi,
                               std::string name = "custom");

  PsiKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double p() const noexcept { return p_; }

  double log_value_at_log(double u) const { return log_eval_(u); }
  double value_at_log(double u) const;
  double operator()(double t) const;
  /// lim_{t→0} ψ(t)/t.
  double slope_at_zero() const;
  /// Catalog entries whose concavity on all of (0, ∞) makes piecewise
  /// supremum arguments exact.
  bool concave_closed_form() const noexcept;

 private:
  PsiFunction(PsiKind kind, std::string name, double p, std::function<double(double)> log_eval)
      : kind_(kind), name_(std::move(name)), p_(p), log_eval_(std::move(log_eval)) {}

  PsiKind kind_;
  std::string name_;
  double p_ = 1.0;
  std::function<double(double)> log_eval_;
};

/// Parses "psi1", "psi_p:<p>", "log2" (also "log_sq"), "log1p" / "psi0",
/// "linear" and "custom:<json file>" (keys "t" and "psi").
PsiFunction make_psi(const std::string& spec);

/// Checks monotonicity and concavity on a geometric grid and growth to ∞;
/// returns an empty string when all hold, else a description of the first
/// violation.
std::string check_psi_invariants(const PsiFunction& psi);

}  // namespace singtrace
