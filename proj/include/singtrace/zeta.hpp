#pragma once

#include <optional>
#include <vector>

#include "singtrace/means.hpp"
#include "singtrace/numeric.hpp"
#include "singtrace/profile.hpp"
#include "singtrace/spaces.hpp"

namespace singtrace {

/// ζ(s) = ∫_0^∞ μ^s, with the error bound of the tail summation. Throws
/// kDivergent unless s exceeds the abscissa of convergence by 1e-7.
Bounded zeta_value(const Profile& x, double s);

/// (1/r)·ζ(p + 1/r) on an r grid.
struct ZetaCurve {
  double p = 1.0;
  std::vector<double> r_grid;
  std::vector<double> s_grid;  // p + 1/r
  std::vector<double> values;
  std::vector<double> errors;
};

/// 19 points geometric from 2 to 2^20.
std::vector<double> default_r_grid();
/// a + b/r over the last half of the r grid.
LimitConfig zeta_limit_config();

struct ZetaOptions {
  std::vector<double> r_grid = default_r_grid();
  LimitConfig limit = zeta_limit_config();
};

struct ZetaLimit {
  ZetaCurve curve;
  LimitEstimate estimate;
  /// M(ψ₁) norm, computed when p = 1 and the limit converged: a finite
  /// limit forces membership in L^{1,∞}.
  std::optional<SupResult> psi1_norm;
};

/// h·ζ(p + h) for h > 0.
Bounded scaled_zeta(const Profile& x, double p, double h);

ZetaCurve zeta_curve(const Profile& x, double p, const std::vector<double>& r_grid);
ZetaLimit zeta_limit(const Profile& x, double p, const ZetaOptions& options = {});
/// lim_{s↓p} (s − p)ζ(s) on s = p + 1/r: sample for sample the zeta_limit
/// data.
ZetaLimit residue_estimate(const Profile& x, double p, const ZetaOptions& options = {});

struct Theorem47Report {
  double p = 1.0;
  ZetaLimit zeta;
  LimitEstimate dixmier;         // τ_ω(x^p) with ψ₁
  LimitEstimate scaled_dixmier;  // p·τ_ω(x^p)
  double distance = 0.0;
  bool band_only = false;
  bool pass = false;
  /// max relative gap between (1/r)ζ_x(p + 1/r) and p·(1/(pr))ζ_{x^p}(1 + 1/(pr))
  double convexification_gap = 0.0;
};

/// ζ-limit against p times the Dixmier trace of x^p.
Theorem47Report theorem47_check(const Profile& x, double p, const ZetaOptions& zeta = {},
                                const DixmierOptions& dixmier = {});

/// Multiplies value and band by c > 0.
LimitEstimate scale_estimate(const LimitEstimate& e, double c);

}  // namespace singtrace
