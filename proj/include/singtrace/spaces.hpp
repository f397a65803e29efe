#pragma once

#include <functional>
#include <string>
#include <vector>

#include "singtrace/means.hpp"
#include "singtrace/numeric.hpp"
#include "singtrace/profile.hpp"
#include "singtrace/psi.hpp"

namespace singtrace {

/// Supremum of a ratio along t ∈ (0, ∞) with the abscissa where it occurs.
struct SupResult {
  double value = 0.0;
  /// ln t of the maximizing candidate; −∞ when the sup is the t → 0 limit,
  /// +∞ when it is the t → ∞ limit
  double witness_log_t = 0.0;
  bool divergent = false;
  /// true when the candidate set provably contains the supremum
  bool exact = true;
  /// growing witness sequence (ln t, ratio) when divergent
  std::vector<double> witness_log_points;
  std::vector<double> witness_values;
};

/// a(x, t) = (1/ψ(t))∫_0^t x* with t = e^u.
double weighted_mean_log(const Profile& x, const PsiFunction& psi, double u);
double weighted_mean(const Profile& x, const PsiFunction& psi, double t);
std::vector<double> weighted_mean_curve(const Profile& x, const PsiFunction& psi,
                                        const std::vector<double>& log_t);

/// ‖x‖_{M(ψ)} = sup_t a(x, t); +∞ (divergent) when a is unbounded.
SupResult marcinkiewicz_norm(const Profile& x, const PsiFunction& psi);
/// sup_{u ≥ 1} (1/ln(1+u))∫_0^u x*: the L^{1,∞} norm without the [0, 1]
/// normalization of ψ₁.
SupResult log_average_norm(const Profile& x);
/// F_ψ(x) = sup_t t·x*(t)/ψ(t).
SupResult quasinorm_F(const Profile& x, const PsiFunction& psi);

/// sup_s s·μ_s with witness; +∞ when unbounded.
SupResult small_ideal_constant(const Profile& x);

/// ‖χ_{[0,t)}‖_{M(ψ)} = sup_s min(s, t)/ψ(s) = t/ψ(t), and its 1/p power for
/// the p-convexified space.
double fundamental_function(const PsiFunction& psi, double t, double p = 1.0);

/// Sum of singular values strictly above level a: ∫_0^{λ_a} μ.
double truncated_trace(const Profile& x, double a);
/// Same with the level given as ln a.
double truncated_trace_log(const Profile& x, double log_a);

struct SeminormReport {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool converged = false;
  std::vector<double> s_grid;
  std::vector<double> values;
  std::vector<double> errors;
  std::vector<double> coefficients;
  std::string notes;
};

struct Z1Options {
  int k_min = 3;
  int k_max = 20;
  double tolerance = 1e-3;
};

/// limsup_{s↓0} s·∫ x*^{1+s}, extrapolated with a + b·s on the small-s half
/// of the grid s = 2^{-k}. Throws kDivergent when some grid integral is
/// infinite.
SeminormReport z1_seminorm(const Profile& x, const Z1Options& options = {});

struct ZpReport {
  SeminormReport z1_of_power;  // z1 of x^q
  SeminormReport norm;         // (q·z1(x^q))^{1/q}
  SeminormReport plus;         // z1(x^q)^{1/q}
};
ZpReport zp_seminorm(const Profile& x, double q, const Z1Options& options = {});

struct PsiDiagnostics {
  LimitEstimate doubling;                 // ψ(2t)/ψ(t) as t → ∞
  bool doubling_to_one = false;
  std::vector<double> betas;
  std::vector<SupResult> a_curve;         // A(β) = sup ψ(t^β)/ψ(t)
  bool condition_a = false;               // A finite and A(β) → 1 as β ↓ 1
  std::vector<double> alphas;
  std::vector<SupResult> power_bound;     // C(α) = sup ψ(t)/t^α
};
PsiDiagnostics psi_diagnostics(const PsiFunction& psi,
                               std::vector<double> betas = {1.01, 1.1, 1.5, 2.0, 3.0},
                               std::vector<double> alphas = {0.1, 0.25, 0.5, 0.75});

/// Supremum of f over a ln t grid with golden-section refinement around
/// the best point, a t → ∞ extrapolation candidate and a growth test for
/// divergence.
SupResult grid_supremum(const std::function<double(double)>& f, const std::vector<double>& log_t,
                        bool refine);
/// Dense ln t grid: 64 points per decade up to t = 10^10, then geometric in
/// ln t, up to the horizon.
std::vector<double> dense_log_grid(double log_lo, double log_hi);

}  // namespace singtrace
