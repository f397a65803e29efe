#include "singtrace/numeric.hpp"

#include <algorithm>
#include <array>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "singtrace/error.hpp"

namespace singtrace {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNonFiniteValue: return "non_finite_value";
    case ErrorCode::kNonMonotone: return "non_monotone";
    case ErrorCode::kTailContinuity: return "tail_continuity";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kDivergent: return "divergent";
    case ErrorCode::kDomainMismatch: return "domain_mismatch";
    case ErrorCode::kGridTooShort: return "grid_too_short";
    case ErrorCode::kHypothesis: return "hypothesis";
  }
  return "unknown";
}

void LogSum::add_log(double log_term) noexcept {
  if (log_term == -kInf) return;
  if (log_term > max_) {
    // rescale existing accumulation to the new maximum
    const double factor = (max_ == -kInf) ? 0.0 : std::exp(max_ - log_term);
    const double old = scaled_.value() * factor;
    scaled_ = CompensatedSum{};
    scaled_.add(old);
    max_ = log_term;
  }
  scaled_.add(std::exp(log_term - max_));
}

double LogSum::log_value() const noexcept {
  if (max_ == -kInf) return -kInf;
  return max_ + std::log(scaled_.value());
}

double log_add_exp(double a, double b) noexcept {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sub_exp(double a, double b) noexcept {
  if (b == -kInf) return a;
  if (b >= a) return -kInf;
  const double d = b - a;
  return a + (d > -kLn2 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d)));
}

double log1p_exp(double u) noexcept {
  if (u > 0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

double gamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma: argument must be positive and finite");
  }
  return std::tgamma(z);
}

double log_gamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw Error(ErrorCode::kInvalidArgument, "log_gamma: argument must be positive and finite");
  }
  return std::lgamma(z);
}

double log_upper_gamma(double a, double z) {
  if (z <= 0.0) return log_gamma(a);
  const double q = boost::math::gamma_q(a, z);
  if (q > 0.0) return std::log(q) + std::lgamma(a);
  // Γ(a,z) ~ z^{a-1} e^{-z} (1 + (a-1)/z + ...) for large z
  const double log_lead = (a - 1.0) * std::log(z) - z;
  return log_lead + std::log1p((a - 1.0) / z);
}

LinearFit least_squares(const std::vector<std::vector<double>>& columns,
                        std::span<const double> y) {
  const std::size_t m = y.size();
  const std::size_t n = columns.size();
  if (n == 0 || m < n) {
    throw Error(ErrorCode::kInvalidArgument, "least_squares: not enough samples");
  }
  // modified Gram-Schmidt QR
  std::vector<std::vector<double>> q(columns);
  std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += q[k][i] * q[j][i];
      r[k][j] = dot;
      for (std::size_t i = 0; i < m; ++i) q[j][i] -= dot * q[k][i];
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm += q[j][i] * q[j][i];
    norm = std::sqrt(norm);
    r[j][j] = norm;
    if (norm == 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "least_squares: rank-deficient design");
    }
    for (std::size_t i = 0; i < m; ++i) q[j][i] /= norm;
  }
  std::vector<double> qty(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) qty[j] += q[j][i] * y[i];
  }
  LinearFit fit;
  fit.coefficients.assign(n, 0.0);
  for (std::size_t jj = n; jj-- > 0;) {
    double acc = qty[jj];
    for (std::size_t k = jj + 1; k < n; ++k) acc -= r[jj][k] * fit.coefficients[k];
    fit.coefficients[jj] = acc / r[jj][jj];
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < n; ++j) pred += fit.coefficients[j] * columns[j][i];
    const double res = y[i] - pred;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(res));
    sq += res * res;
  }
  fit.rms_residual = std::sqrt(sq / static_cast<double>(m));
  return fit;
}

namespace {

GaussLegendreRule build_gauss_legendre16() {
  GaussLegendreRule rule;
  auto& nodes = rule.nodes;
  auto& weights = rule.weights;
  {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre16() {
  static const GaussLegendreRule rule = build_gauss_legendre16();
  return rule;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels) {
  const auto& rule = gauss_legendre16();
  const double h = (b - a) / panels;
  CompensatedSum total;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int i = 0; i < 16; ++i) {
      total.add(0.5 * h * rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]));
    }
  }
  return total.value();
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          int iterations) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iterations && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(llo + step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * i;
  out.back() = hi;
  return out;
}

}  // namespace singtrace
