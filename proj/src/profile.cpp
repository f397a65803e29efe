#include "singtrace/profile.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "singtrace/error.hpp"

namespace singtrace {
namespace detail {

namespace {

constexpr std::size_t kExplicitIndex = 1'000'000;
constexpr std::size_t kHeatExplicitIndex = 20'000;
constexpr std::size_t kPrefixBlock = 1024;
constexpr double kLogUnderflow = -700.0;
constexpr double kRoundoff = 4e-16;
// beyond this index the unit pieces are integrated as a continuum
constexpr double kLogContinuum = 50.0 * kLn2;

const std::vector<double>& log_index_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kExplicitIndex + 2);
    t[0] = -kInf;
    for (std::size_t n = 1; n < t.size(); ++n) t[n] = std::log(static_cast<double>(n));
    return t;
  }();
  return table;
}

double log_index(std::size_t n) {
  return n < kExplicitIndex + 2 ? log_index_table()[n] : std::log(static_cast<double>(n));
}

// Index of the unit piece (n-1, n] containing t = e^u.
double piece_index(double u) {
  if (u <= 0.0) return 1.0;
  return std::max(1.0, std::ceil(std::exp(u) * (1.0 - 1e-14)));
}

// ∫_a^b exp(phi(v)) dv with 16-point panels of width width(v), in log form.
template <class Phi, class Width>
double log_integrate(const Phi& phi, double a, double b, const Width& width) {
  const auto& rule = gauss_legendre16();
  LogSum acc;
  double v = a;
  while (v < b) {
    const double h = std::min(std::max(width(v), 1e-6), b - v);
    const double mid = v + 0.5 * h;
    for (int i = 0; i < 16; ++i) {
      acc.add_log(std::log(0.5 * h * rule.weights[i]) + phi(mid + 0.5 * h * rule.nodes[i]));
    }
    v += h;
  }
  return acc.log_value();
}

Bounded add(Bounded a, Bounded b) { return {a.value + b.value, a.error + b.error}; }

}  // namespace

class TailModel {
 public:
  virtual ~TailModel() = default;
  /// ln μ at a real index x >= 1.
  virtual double log_f(double x) const = 0;
  virtual double log_f_index(std::size_t n) const { return log_f(static_cast<double>(n)); }
  /// ln μ at the index e^v, valid for huge v.
  virtual double log_f_log(double v) const = 0;
  /// d ln μ / d ln x at the index e^v.
  virtual double elasticity_log(double v) const = 0;
  /// ∫_{x0}^{e^{v1}} μ^s dx; v1 may be +∞.
  virtual Bounded integral_pow(double x0, double v1, double s) const = 0;
  /// ∫_{x0}^∞ exp(−t μ^{−q}) dx.
  virtual LogBounded integral_heat(double x0, double q, double log_t) const = 0;
  /// ln of the real index where μ crosses level a.
  virtual double log_crossing(double log_a) const = 0;
  virtual double abscissa() const = 0;
  virtual bool tabulate() const { return false; }
};

class PowerTailModel final : public TailModel {
 public:
  explicit PowerTailModel(const PowerTail& t)
      : log_c_(std::log(t.coefficient)), alpha_(t.exponent) {}

  double log_f(double x) const override { return log_c_ - alpha_ * std::log(x); }
  double log_f_index(std::size_t n) const override { return log_c_ - alpha_ * log_index(n); }
  double log_f_log(double v) const override { return log_c_ - alpha_ * v; }
  double elasticity_log(double) const override { return -alpha_; }

  Bounded integral_pow(double x0, double v1, double s) const override {
    const double sigma = alpha_ * s;
    const double l0 = std::log(x0);
    if (v1 <= l0) return {};
    double value;
    if (v1 == kInf) {
      if (sigma <= 1.0) return {kInf, 0.0};
      value = std::exp(s * log_c_ + (1.0 - sigma) * l0) / (sigma - 1.0);
    } else if (sigma == 1.0) {
      value = std::exp(s * log_c_) * (v1 - l0);
    } else {
      value = std::exp(s * log_c_ + (1.0 - sigma) * l0) * std::expm1((1.0 - sigma) * (v1 - l0)) /
              (1.0 - sigma);
    }
    return {value, 8.0 * kRoundoff * std::abs(value)};
  }

  LogBounded integral_heat(double x0, double q, double log_t) const override {
    // ∫ exp(−k x^γ) dx = (1/γ) k^{−1/γ} Γ(1/γ, k x0^γ)
    const double g = alpha_ * q;
    const double log_k = log_t - q * log_c_;
    const double log_z = log_k + g * std::log(x0);
    if (log_z > 700.0) return {};
    const double lv = -std::log(g) - log_k / g + log_upper_gamma(1.0 / g, std::exp(log_z));
    return {lv, lv + std::log(1e-13)};
  }

  double log_crossing(double log_a) const override { return (log_c_ - log_a) / alpha_; }
  double abscissa() const override { return 1.0 / alpha_; }

 private:
  double log_c_;
  double alpha_;
};

/// (A + B sin(ln ln y)) / y with y = x + offset. Integrals are taken in
/// v = ln y, where the integrand varies on the scale of v itself.
class LogLogTailModel final : public TailModel {
 public:
  explicit LogLogTailModel(const LogLogOscillatingTail& t)
      : a_(t.level), b_(t.amplitude), offset_(t.offset) {}

  double log_f(double x) const override {
    const double ly = std::log(x + offset_);
    return std::log(g(std::log(ly))) - ly;
  }
  double log_f_log(double v) const override {
    if (v < 30.0) return log_f(std::exp(v));
    return std::log(g(std::log(v))) - v;
  }
  double elasticity_log(double v) const override {
    double ly = v;
    double ratio = 1.0;
    if (v < 30.0) {
      const double x = std::exp(v);
      ly = std::log(x + offset_);
      ratio = x / (x + offset_);
    }
    const double w = std::log(ly);
    return ratio * (b_ * std::cos(w) / (ly * g(w)) - 1.0);
  }

  Bounded integral_pow(double x0, double v1, double s) const override {
    const double y0 = std::log(x0 + offset_);
    const double y1 = to_y(v1);
    if (y1 <= y0) return {};
    if (s == 1.0) {
      const double value = antiderivative(y1) - antiderivative(y0);
      return {value, 8.0 * kRoundoff * std::abs(value) * y1};
    }
    const double log_hi = s * std::log(a_ + b_);
    const double margin = 45.0 + s * std::log((a_ + b_) / (a_ - b_));
    double lo = y0;
    double hi = y1;
    double skipped = 0.0;
    if (s > 1.0) {
      const double cut = y0 + margin / (s - 1.0);
      if (cut < hi) {
        hi = cut;
        skipped = std::exp(log_hi + (1.0 - s) * cut) / (s - 1.0);
      }
    } else {
      if (y1 == kInf) return {kInf, 0.0};
      const double cut = y1 - margin / (1.0 - s);
      if (cut > lo) {
        lo = cut;
        skipped = std::exp(log_hi + (1.0 - s) * cut) / (1.0 - s);
      }
    }
    const double rate = std::abs(1.0 - s);
    const double lv = log_integrate(
        [&](double y) { return s * std::log(g(std::log(y))) + (1.0 - s) * y; }, lo, hi,
        [&](double y) { return std::min(0.05 * y, 0.5 / rate); });
    const double value = std::exp(lv);
    return {value, 1e-12 * value + skipped};
  }

  LogBounded integral_heat(double x0, double q, double log_t) const override {
    // exponent of the integrand in y: y − exp(log_t + q·y − q·ln g(ln y))
    const double y0 = std::log(x0 + offset_);
    const double centre_lo = std::log(a_ - b_) - log_t / q;
    const double centre_hi = std::log(a_ + b_) - log_t / q;
    const double lo = std::max(y0, centre_lo - 60.0);
    const double hi = std::max(lo, centre_hi) + std::log(800.0 + std::max(lo, centre_hi)) / q + 1.0;
    const double lv = log_integrate(
        [&](double y) {
          return y - std::exp(log_t + q * y - q * std::log(g(std::log(y))));
        },
        lo, hi, [&](double y) { return std::min(0.05 * y, 0.2 / std::max(q, 1.0)); });
    double le = lv + std::log(1e-12);
    if (lo > y0) le = log_add_exp(le, lo);
    return {lv, le};
  }

  double log_crossing(double log_a) const override {
    double lo = std::max(1.0 + 1e-9, std::log(a_ - b_) - log_a - 1.0);
    double hi = std::max(lo + 1.0, std::log(a_ + b_) - log_a + 1.0);
    auto h = [&](double y) { return std::log(g(std::log(y))) - y - log_a; };
    if (h(lo) <= 0.0) return from_y(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) > 0.0 ? lo : hi) = mid;
    }
    return from_y(0.5 * (lo + hi));
  }

  double abscissa() const override { return 1.0; }
  bool tabulate() const override { return true; }

 private:
  double g(double w) const { return a_ + b_ * std::sin(w); }
  // ∫ (A + B sin ln y) dy
  double antiderivative(double y) const {
    const double w = std::log(y);
    return a_ * y + 0.5 * b_ * y * (std::sin(w) - std::cos(w));
  }
  double to_y(double v) const {
    if (v == kInf || v >= 30.0) return v;
    return std::log(std::exp(v) + offset_);
  }
  double from_y(double y) const {
    if (y >= 30.0) return y;
    const double x = std::exp(y) - offset_;
    return x > 0.0 ? std::log(x) : -kInf;
  }

  double a_;
  double b_;
  double offset_;
};

class ProfileModel {
 public:
  virtual ~ProfileModel() = default;
  virtual std::string kind() const = 0;
  virtual double log_value(double u) const = 0;
  virtual Bounded partial_power(double u, double s) const = 0;
  virtual LogBounded heat(double q, double log_t) const = 0;
  virtual double log_level(double log_a) const = 0;
  virtual double abscissa() const = 0;
  virtual bool finite_support() const = 0;
  virtual double log_value_at_zero() const = 0;
  virtual double default_log_horizon() const = 0;
  virtual double limit_log_horizon() const = 0;
  virtual std::vector<double> witnesses(double log_horizon) const = 0;
  virtual bool exact_witnesses() const = 0;
};

namespace {

// Rearranged finite step function.
class StepModel final : public ProfileModel {
 public:
  explicit StepModel(const StepFunction& f) {
    const StepFunction r = f.rearranged() ? f : rearrange::decreasing_rearrangement(f);
    const std::size_t n = r.size();
    log_right_ = r.log_breakpoints();
    log_value_.resize(n);
    log_length_.resize(n);
    prefix_.assign(n + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = r.values()[i];
      log_value_[i] = v > 0.0 ? std::log(v) : -kInf;
      log_length_[i] = r.log_piece_length(i);
      if (v > 0.0) acc.add(std::exp(log_value_[i] + log_length_[i]));
      prefix_[i + 1] = acc.value();
    }
  }

  std::string kind() const override { return "step"; }

  double log_value(double u) const override {
    const auto it = std::lower_bound(log_right_.begin(), log_right_.end(), u);
    if (it == log_right_.end()) return -kInf;
    return log_value_[static_cast<std::size_t>(it - log_right_.begin())];
  }

  Bounded partial_power(double u, double s) const override {
    const std::size_t full = static_cast<std::size_t>(
        std::upper_bound(log_right_.begin(), log_right_.end(), u) - log_right_.begin());
    double partial = 0.0;
    if (full < log_right_.size() && log_value_[full] > -kInf) {
      const double left = full == 0 ? -kInf : log_right_[full - 1];
      if (u > left) partial = std::exp(s * log_value_[full] + log_sub_exp(u, left));
    }
    double value;
    if (s == 1.0) {
      value = prefix_[full] + partial;
    } else {
      CompensatedSum acc;
      for (std::size_t i = 0; i < full; ++i) {
        if (log_value_[i] == -kInf) break;
        acc.add(std::exp(s * log_value_[i] + log_length_[i]));
      }
      acc.add(partial);
      value = acc.value();
    }
    return {value, kRoundoff * static_cast<double>(full + 1) * value};
  }

  LogBounded heat(double q, double log_t) const override {
    LogSum value;
    LogSum error;
    for (std::size_t i = 0; i < log_value_.size(); ++i) {
      if (log_value_[i] == -kInf) break;
      const double term = -std::exp(log_t - q * log_value_[i]);
      if (term < kLogUnderflow) {
        // values are non-increasing, so every later term is smaller
        LogSum rest;
        for (std::size_t j = i; j < log_value_.size(); ++j) rest.add_log(log_length_[j]);
        error.add_log(rest.log_value() + std::max(term, kLogUnderflow));
        break;
      }
      value.add_log(term + log_length_[i]);
    }
    error.add_log(value.log_value() + std::log(kRoundoff * static_cast<double>(log_value_.size() + 1)));
    return {value.log_value(), error.log_value()};
  }

  double log_level(double log_a) const override {
    const auto it = std::find_if(log_value_.begin(), log_value_.end(),
                                 [&](double lv) { return !(lv > log_a); });
    const std::size_t k = static_cast<std::size_t>(it - log_value_.begin());
    return k == 0 ? -kInf : log_right_[k - 1];
  }

  double abscissa() const override { return 0.0; }
  bool finite_support() const override { return true; }
  double log_value_at_zero() const override {
    return log_value_.empty() ? -kInf : log_value_.front();
  }
  double default_log_horizon() const override {
    return log_right_.empty() ? 0.0 : log_right_.back();
  }
  double limit_log_horizon() const override {
    return std::max(40.0, default_log_horizon() + 20.0);
  }
  std::vector<double> witnesses(double log_horizon) const override {
    std::vector<double> out;
    for (double u : log_right_) {
      if (u > log_horizon) break;
      out.push_back(u);
    }
    return out;
  }
  bool exact_witnesses() const override { return true; }

 private:
  std::vector<double> log_right_;
  std::vector<double> log_value_;
  std::vector<double> log_length_;
  std::vector<double> prefix_;
};

// Unit pieces: μ_n on (n-1, n], head followed by an analytic tail.
class SequenceModel final : public ProfileModel {
 public:
  explicit SequenceModel(const Spectrum& spectrum) : n_(spectrum.head().size()) {
    log_head_.resize(n_);
    head_prefix_.assign(n_ + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t i = 0; i < n_; ++i) {
      const double v = spectrum.head()[i];
      log_head_[i] = v > 0.0 ? std::log(v) : -kInf;
      acc.add(v);
      head_prefix_[i + 1] = acc.value();
    }
    if (const auto* p = std::get_if<PowerTail>(&spectrum.tail())) {
      tail_ = std::make_unique<PowerTailModel>(*p);
    } else if (const auto* o = std::get_if<LogLogOscillatingTail>(&spectrum.tail())) {
      tail_ = std::make_unique<LogLogTailModel>(*o);
    }
    explicit_end_ = std::max(n_, kExplicitIndex);
  }

  std::string kind() const override { return "spectrum"; }

  double log_value(double u) const override {
    const double n = piece_index(u);
    if (n <= static_cast<double>(n_)) return log_head_[static_cast<std::size_t>(n) - 1];
    if (!tail_) return -kInf;
    if (u > kLogContinuum) return tail_->log_f_log(u);
    return tail_log(static_cast<std::size_t>(n));
  }

  Bounded partial_power(double u, double s) const override {
    if (u == -kInf) return {};
    const double nd = static_cast<double>(n_);
    if (u < kLogContinuum && std::exp(u) <= nd) {
      const double t = std::exp(u);
      const auto m = static_cast<std::size_t>(std::floor(t));
      const double frac = t - static_cast<double>(m);
      double value = head_sum(m, s);
      if (m < n_ && frac > 0.0 && log_head_[m] > -kInf) value += frac * std::exp(s * log_head_[m]);
      return {value, kRoundoff * (nd + 1.0) * value};
    }
    Bounded total{head_sum(n_, s), 0.0};
    total.error = kRoundoff * (nd + 1.0) * total.value;
    if (!tail_) return total;
    if (u == kInf && s <= tail_->abscissa()) return {kInf, 0.0};
    const double log_k = log_index(explicit_end_);
    if (u <= log_k) {
      const double t = std::exp(u);
      const auto m = static_cast<std::size_t>(std::floor(t));
      const double frac = t - static_cast<double>(m);
      total = add(total, tail_sum(m, s));
      if (frac > 0.0) total.value += frac * std::exp(s * tail_log(m + 1));
      return total;
    }
    total = add(total, tail_sum(explicit_end_, s));
    return add(total, euler_maclaurin(u, s));
  }

  LogBounded heat(double q, double log_t) const override {
    LogSum value;
    LogSum error;
    auto finish = [&] {
      error.add_log(value.log_value() + std::log(kRoundoff * 64.0));
      return LogBounded{value.log_value(), error.log_value()};
    };
    for (std::size_t i = 0; i < n_; ++i) {
      if (log_head_[i] == -kInf) return finish();
      const double term = -std::exp(log_t - q * log_head_[i]);
      if (term < kLogUnderflow) {
        error.add_log(std::log(static_cast<double>(n_ - i)) + std::max(term, kLogUnderflow));
        if (tail_) {
          const auto rest = tail_->integral_heat(static_cast<double>(n_), q, log_t);
          error.add_log(log_add_exp(rest.log_value, rest.log_error));
        }
        return finish();
      }
      value.add_log(term);
    }
    if (!tail_) return finish();
    const std::size_t k = std::max(n_, std::min(kHeatExplicitIndex, explicit_end_));
    for (std::size_t n = n_ + 1; n <= k; ++n) {
      const double term = -std::exp(log_t - q * tail_log(n));
      if (term < kLogUnderflow) {
        // decreasing terms: the remainder is at most F(n) + ∫_n^∞ F
        const auto rest = tail_->integral_heat(static_cast<double>(n), q, log_t);
        error.add_log(std::max(term, kLogUnderflow));
        error.add_log(log_add_exp(rest.log_value, rest.log_error));
        return finish();
      }
      value.add_log(term);
    }
    // Σ_{n>k} F(n) = ∫_k^∞ F − F(k)/2 − F'(k)/12 + R
    const double kd = static_cast<double>(k);
    const double log_kd = std::log(kd);
    const double inner = std::exp(log_t - q * tail_->log_f(kd));
    const double log_fk = -inner;
    const double el = tail_->elasticity_log(log_kd);
    const double r1 = inner * q * el / kd;  // F'/F
    const auto integral = tail_->integral_heat(kd, q, log_t);
    const double m = std::max(integral.log_value, log_fk);
    if (m > -kInf) {
      const double lin =
          std::exp(integral.log_value - m) - std::exp(log_fk - m) * (0.5 + r1 / 12.0);
      if (lin > 0.0) value.add_log(m + std::log(lin));
      const double second = r1 * r1 + std::abs(r1) * (q * std::abs(el) + 1.0) / kd;
      error.add_log(log_fk + std::log(0.01 * second + 1e-300));
      error.add_log(integral.log_error);
    }
    return finish();
  }

  double log_level(double log_a) const override {
    const auto it = std::find_if(log_head_.begin(), log_head_.end(),
                                 [&](double lv) { return !(lv > log_a); });
    const std::size_t count = static_cast<std::size_t>(it - log_head_.begin());
    if (count < n_ || !tail_) return count == 0 ? -kInf : std::log(static_cast<double>(count));
    if (log_a == -kInf) return kInf;
    const double lx = tail_->log_crossing(log_a);
    if (lx > kLogContinuum) return lx;
    const double total = std::max(static_cast<double>(n_), std::ceil(std::exp(lx)) - 1.0);
    return total > 0.0 ? std::log(total) : -kInf;
  }

  double abscissa() const override { return tail_ ? tail_->abscissa() : 0.0; }
  bool finite_support() const override { return !tail_; }
  double log_value_at_zero() const override {
    if (n_ > 0) return log_head_[0];
    return tail_ ? tail_->log_f(1.0) : -kInf;
  }
  double default_log_horizon() const override {
    const double head_end = n_ > 0 ? std::log(static_cast<double>(n_)) : 0.0;
    if (!tail_) return head_end;
    return std::max(40.0, head_end + 20.0);
  }
  double limit_log_horizon() const override {
    const double head_end = n_ > 0 ? std::log(static_cast<double>(n_)) : 0.0;
    // the oscillating tail needs several periods of sin(ln ln t)
    if (tail_ && tail_->tabulate()) return std::max(7.3e5, head_end + 20.0);
    return tail_ ? std::max(1e4, head_end + 20.0) : std::max(40.0, head_end + 20.0);
  }
  std::vector<double> witnesses(double log_horizon) const override {
    std::vector<double> out;
    for (std::size_t n = 1; n <= n_; ++n) {
      const double u = log_index(n);
      if (u > log_horizon) return out;
      out.push_back(u);
    }
    if (!tail_) return out;
    // integer right ends, 64 per decade
    const double step = std::log(10.0) / 64.0;
    double last = static_cast<double>(n_);
    for (double u = std::log(std::max(1.0, last)) + step; u <= log_horizon; u += step) {
      const double n = u < kLogContinuum ? std::round(std::exp(u)) : std::exp(u);
      if (n <= last) continue;
      last = n;
      out.push_back(u < kLogContinuum ? std::log(n) : u);
    }
    return out;
  }
  bool exact_witnesses() const override { return !tail_; }

 private:
  double head_sum(std::size_t m, double s) const {
    if (s == 1.0) return head_prefix_[m];
    CompensatedSum acc;
    for (std::size_t i = 0; i < m; ++i) {
      if (log_head_[i] == -kInf) break;
      acc.add(std::exp(s * log_head_[i]));
    }
    return acc.value();
  }

  void build_tables() const {
    std::call_once(tables_once_, [this] {
      const std::size_t count = explicit_end_ - n_;
      if (tail_->tabulate()) {
        tail_values_.resize(count);
        for (std::size_t j = 0; j < count; ++j) tail_values_[j] = tail_->log_f_index(n_ + 1 + j);
      }
    });
  }

  // block prefix sums of μ_n^s over the explicit tail, cached per exponent
  const std::vector<double>& block_prefix(double s) const {
    std::lock_guard<std::mutex> lock(prefix_mutex_);
    const auto it = prefix_cache_.find(s);
    if (it != prefix_cache_.end()) return it->second;
    const std::size_t count = explicit_end_ - n_;
    std::vector<double> prefix(count / kPrefixBlock + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t j = 0; j < count; ++j) {
      if (j % kPrefixBlock == 0) prefix[j / kPrefixBlock] = acc.value();
      acc.add(std::exp(s * tail_log(n_ + 1 + j)));
    }
    if (count % kPrefixBlock == 0) prefix[count / kPrefixBlock] = acc.value();
    return prefix_cache_.emplace(s, std::move(prefix)).first->second;
  }

  // ln μ_n for n in the explicit tail range (or beyond it)
  double tail_log(std::size_t n) const {
    if (!tail_values_.empty() && n > n_ && n <= explicit_end_) return tail_values_[n - n_ - 1];
    return tail_->log_f_index(n);
  }

  // Σ_{n=N+1}^{m} μ_n^s for m <= explicit_end_
  Bounded tail_sum(std::size_t m, double s) const {
    if (m <= n_) return {};
    build_tables();
    CompensatedSum acc;
    std::size_t from = n_ + 1;
    if (m - n_ >= kPrefixBlock) {
      const std::size_t block = (m - n_) / kPrefixBlock;
      acc.add(block_prefix(s)[block]);
      from = n_ + 1 + block * kPrefixBlock;
    }
    for (std::size_t n = from; n <= m; ++n) acc.add(std::exp(s * tail_log(n)));
    const double value = acc.value();
    return {value, kRoundoff * std::sqrt(static_cast<double>(m)) * value};
  }

  // Σ_{K<n<=t} μ_n^s (t = e^u, u may be +∞) by Euler-Maclaurin from K.
  Bounded euler_maclaurin(double u, double s) const {
    const double kd = static_cast<double>(explicit_end_);
    const double log_kd = std::log(kd);
    auto f_at = [&](double v) { return std::exp(s * tail_->log_f_log(v)); };
    auto df_ratio = [&](double v) { return s * tail_->elasticity_log(v); };
    auto second = [&](double v, double fv) {
      const double e = std::abs(df_ratio(v));
      return fv * e * (e + 1.0) * std::exp(-2.0 * v);
    };
    const double fk = f_at(log_kd);
    const double dfk = fk * df_ratio(log_kd) / kd;
    Bounded out;
    if (u == kInf) {
      const Bounded integral = tail_->integral_pow(kd, kInf, s);
      out.value = integral.value - 0.5 * fk - dfk / 12.0;
      out.error = integral.error + 0.01 * second(log_kd, fk);
      return out;
    }
    double v_end = u;
    double frac_term = 0.0;
    double extra = 0.0;
    if (u < kLogContinuum) {
      const double t = std::exp(u);
      const double m = std::floor(t);
      v_end = std::log(m);
      frac_term = (t - m) * std::exp(s * tail_->log_f(m + 1.0));
    } else {
      extra = f_at(u);
    }
    const Bounded integral = tail_->integral_pow(kd, v_end, s);
    const double fm = f_at(v_end);
    const double dfm = fm * df_ratio(v_end) * std::exp(-v_end);
    out.value = integral.value + 0.5 * (fm - fk) + (dfm - dfk) / 12.0 + frac_term;
    out.error = integral.error + 0.01 * (second(log_kd, fk) + second(v_end, fm)) + extra;
    return out;
  }

  std::size_t n_;
  std::vector<double> log_head_;
  std::vector<double> head_prefix_;
  std::unique_ptr<TailModel> tail_;
  std::size_t explicit_end_ = 0;
  mutable std::once_flag tables_once_;
  mutable std::vector<double> tail_values_;
  mutable std::mutex prefix_mutex_;
  mutable std::map<double, std::vector<double>> prefix_cache_;
};

// z(t) = n/2^{n²} on (2^{(n−1)²}, 2^{n²}], z = 1 on (0, 1].
class CounterexampleModel final : public ProfileModel {
 public:
  explicit CounterexampleModel(int witness_count) : witness_count_(witness_count) {}

  std::string kind() const override { return "counterexample"; }

  static double right(double n) { return n * n * kLn2; }
  static double log_val(double n) { return n == 0.0 ? 0.0 : std::log(n) - n * n * kLn2; }
  static double log_len(double n) {
    if (n == 0.0) return 0.0;
    return n * n * kLn2 + std::log1p(-std::exp((1.0 - 2.0 * n) * kLn2));
  }

  static double piece(double u) {
    if (u <= 0.0) return 0.0;
    double n = std::ceil(std::sqrt(u / kLn2));
    while (right(n) < u) n += 1.0;
    while (n > 1.0 && right(n - 1.0) >= u) n -= 1.0;
    return n;
  }

  double log_value(double u) const override { return log_val(piece(u)); }

  Bounded partial_power(double u, double s) const override {
    if (u == -kInf) return {};
    CompensatedSum acc;
    if (u == kInf) {
      if (s <= 1.0) return {kInf, 0.0};
      const double n_peak = std::sqrt(s / (2.0 * (s - 1.0) * kLn2)) + 1.0;
      double largest = -kInf;
      for (double n = 0.0;; n += 1.0) {
        const double lt = s * log_val(n) + log_len(n);
        largest = std::max(largest, lt);
        acc.add(std::exp(lt));
        if (n > n_peak && lt < largest - 40.0) break;
      }
      const double value = acc.value();
      return {value, 1e-16 * value + value * std::exp(-40.0)};
    }
    const double last = piece(u);
    for (double n = 0.0; n < last; n += 1.0) acc.add(std::exp(s * log_val(n) + log_len(n)));
    const double left = last == 0.0 ? -kInf : right(last - 1.0);
    acc.add(std::exp(s * log_val(last) + log_sub_exp(std::min(u, right(last)), left)));
    const double value = acc.value();
    return {value, kRoundoff * (last + 1.0) * value};
  }

  LogBounded heat(double q, double log_t) const override {
    LogSum value;
    LogSum error;
    double largest = -kInf;
    for (double n = 0.0;; n += 1.0) {
      const double lt = log_len(n) - std::exp(log_t - q * log_val(n));
      if (lt < kLogUnderflow) {
        error.add_log(kLogUnderflow + log_len(n));
      } else {
        value.add_log(lt);
      }
      largest = std::max(largest, lt);
      // −exp(log_t − q·ln z_n) eventually wins over the piece length
      if (n > 2.0 && lt < largest - 50.0 && log_t - q * log_val(n) > std::log(log_len(n) + 800.0)) {
        break;
      }
    }
    error.add_log(value.log_value() + std::log(1e-14));
    return {value.log_value(), error.log_value()};
  }

  double log_level(double log_a) const override {
    if (log_a == -kInf) return kInf;
    if (log_a >= 0.0) return -kInf;
    double n = 0.0;
    while (log_val(n + 1.0) > log_a) n += 1.0;
    return right(n);
  }

  double abscissa() const override { return 1.0; }
  bool finite_support() const override { return false; }
  double log_value_at_zero() const override { return 0.0; }
  double default_log_horizon() const override { return right(witness_count_); }
  double limit_log_horizon() const override {
    return right(std::max(witness_count_, 1000));
  }
  std::vector<double> witnesses(double log_horizon) const override {
    std::vector<double> out;
    for (double n = 0.0; right(n) <= log_horizon; n += 1.0) out.push_back(right(n));
    return out;
  }
  bool exact_witnesses() const override { return true; }

 private:
  int witness_count_;
};

// μ_s = 1/(1+s)
class ReciprocalModel final : public ProfileModel {
 public:
  std::string kind() const override { return "reciprocal"; }
  double log_value(double u) const override { return -log1p_exp(u); }
  Bounded partial_power(double u, double s) const override {
    if (u == -kInf) return {};
    if (u == kInf) {
      if (s <= 1.0) return {kInf, 0.0};
      return {1.0 / (s - 1.0), kRoundoff / (s - 1.0)};
    }
    const double l = log1p_exp(u);
    const double value = s == 1.0 ? l : std::expm1((1.0 - s) * l) / (1.0 - s);
    return {value, 8.0 * kRoundoff * std::abs(value)};
  }
  LogBounded heat(double q, double log_t) const override {
    // ∫_1^∞ e^{−t y^q} dy = (1/q) t^{−1/q} Γ(1/q, t)
    if (log_t > 700.0) return {};
    const double lv =
        -std::log(q) - log_t / q + log_upper_gamma(1.0 / q, std::exp(log_t));
    return {lv, lv + std::log(1e-13)};
  }
  double log_level(double log_a) const override {
    if (log_a == -kInf) return kInf;
    if (log_a >= 0.0) return -kInf;
    return std::log(-std::expm1(log_a)) - log_a;
  }
  double abscissa() const override { return 1.0; }
  bool finite_support() const override { return false; }
  double log_value_at_zero() const override { return 0.0; }
  double default_log_horizon() const override { return 40.0; }
  double limit_log_horizon() const override { return 40.0; }
  std::vector<double> witnesses(double) const override { return {}; }
  bool exact_witnesses() const override { return false; }
};

}  // namespace
}  // namespace detail

Profile::Profile(std::shared_ptr<const detail::ProfileModel> model, std::string name)
    : model_(std::move(model)), name_(std::move(name)) {}

Profile::Profile(const Spectrum& spectrum)
    : Profile(std::make_shared<detail::SequenceModel>(spectrum),
              spectrum.name().empty() ? "spectrum" : spectrum.name()) {}

Profile::Profile(const StepFunction& step)
    : Profile(std::make_shared<detail::StepModel>(step), "step") {}

Profile Profile::counterexample(double exponent, int witness_count) {
  if (witness_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "counterexample: n_max must be >= 1");
  }
  Profile p(std::make_shared<detail::CounterexampleModel>(witness_count), "counterexample_z");
  return exponent == 1.0 ? p : p.power(exponent);
}

Profile Profile::reciprocal() {
  return Profile(std::make_shared<detail::ReciprocalModel>(), "small_ideal");
}

Profile Profile::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::kInvalidArgument, "scaled: factor must be positive and finite");
  }
  Profile out(*this);
  out.log_scale_ += std::log(factor);
  return out;
}

Profile Profile::power(double exponent) const {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::kInvalidArgument, "power: exponent must be positive and finite");
  }
  Profile out(*this);
  out.log_scale_ *= exponent;
  out.exponent_ *= exponent;
  return out;
}

Profile Profile::renamed(std::string name) const {
  Profile out(*this);
  out.name_ = std::move(name);
  return out;
}

Profile Profile::unscaled() const {
  Profile out(*this);
  out.log_scale_ = 0.0;
  return out;
}

std::string Profile::kind() const { return model_->kind(); }

double Profile::log_value_at_log(double u) const {
  const double lv = model_->log_value(u);
  return lv == -kInf ? -kInf : log_scale_ + exponent_ * lv;
}

double Profile::value_at(double t) const {
  if (t < 0.0 || std::isnan(t)) throw Error(ErrorCode::kInvalidArgument, "value_at: t must be >= 0");
  return value_at_log(t > 0.0 ? std::log(t) : -kInf);
}

Bounded Profile::partial_power_integral_log(double u, double s) const {
  if (!(s > 0.0) || std::isnan(u)) {
    throw Error(ErrorCode::kInvalidArgument, "partial_power_integral: s must be > 0");
  }
  Bounded r = model_->partial_power(u, exponent_ * s);
  if (log_scale_ != 0.0) {
    const double factor = std::exp(s * log_scale_);
    r.value *= factor;
    r.error *= factor;
  }
  return r;
}

LogBounded Profile::heat_log(double q, double log_t) const {
  if (!(q > 0.0) || std::isnan(log_t)) {
    throw Error(ErrorCode::kInvalidArgument, "heat: q must be > 0");
  }
  return model_->heat(exponent_ * q, log_t - q * log_scale_);
}

double Profile::log_level_measure(double a) const {
  if (a < 0.0 || std::isnan(a)) throw Error(ErrorCode::kInvalidArgument, "level: a must be >= 0");
  if (a == 0.0) return model_->log_level(-kInf);
  return log_level_measure_log(std::log(a));
}

double Profile::log_level_measure_log(double log_a) const {
  if (std::isnan(log_a)) throw Error(ErrorCode::kInvalidArgument, "level: ln a is NaN");
  return model_->log_level((log_a - log_scale_) / exponent_);
}

double Profile::power_abscissa() const { return model_->abscissa() / exponent_; }
bool Profile::finite_support() const { return model_->finite_support(); }
double Profile::value_at_zero() const {
  const double lv = model_->log_value_at_zero();
  return lv == -kInf ? 0.0 : std::exp(log_scale_ + exponent_ * lv);
}
double Profile::default_log_horizon() const { return model_->default_log_horizon(); }
double Profile::limit_log_horizon() const { return model_->limit_log_horizon(); }
std::vector<double> Profile::witness_log_points(double log_horizon) const {
  return model_->witnesses(log_horizon);
}
bool Profile::exact_witnesses() const { return model_->exact_witnesses(); }

}  // namespace singtrace
