#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace singtrace {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// A value together with an absolute error bound.
struct Bounded {
  double value = 0.0;
  double error = 0.0;
};

/// Neumaier's variant of Kahan summation. Order-dependent but deterministic.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Accumulates exp(x_i) without overflow; value is returned as a log.
class LogSum {
 public:
  void add_log(double log_term) noexcept;
  double log_value() const noexcept;

 private:
  double max_ = -kInf;
  CompensatedSum scaled_;
};

/// ln(e^a + e^b)
double log_add_exp(double a, double b) noexcept;
/// ln(e^a - e^b) for a >= b; -inf when equal.
double log_sub_exp(double a, double b) noexcept;
/// ln(1 + e^u), stable for all u.
double log1p_exp(double u) noexcept;

/// Γ(z) for z > 0. Throws Error(kInvalidArgument) otherwise.
double gamma(double z);
/// ln Γ(z) for z > 0.
double log_gamma(double z);
/// ln Γ(a, z), the upper incomplete gamma function; -inf when it underflows.
double log_upper_gamma(double a, double z);

/// Least-squares fit y ≈ Σ c_j·column_j with diagnostics.
struct LinearFit {
  std::vector<double> coefficients;
  double max_abs_residual = 0.0;
  double rms_residual = 0.0;
};
LinearFit least_squares(const std::vector<std::vector<double>>& columns,
                        std::span<const double> y);

struct GaussLegendreRule {
  std::array<double, 16> nodes{};
  std::array<double, 16> weights{};
};
/// 16-point Gauss-Legendre nodes and weights on [-1, 1].
const GaussLegendreRule& gauss_legendre16();

/// Composite 16-point Gauss-Legendre on [a, b] split into `panels` panels.
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels);

/// Golden-section maximization of a unimodal f on [a, b].
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          int iterations = 80);

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Each
/// index must write only its own output slot, so results do not depend on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// `count` points geometrically spaced from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);
/// `count` points uniformly spaced from lo to hi inclusive.
std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

}  // namespace singtrace
