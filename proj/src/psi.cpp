#include "singtrace/psi.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "singtrace/error.hpp"
#include "singtrace/numeric.hpp"

namespace singtrace {

PsiFunction PsiFunction::psi1() {
  return PsiFunction(PsiKind::kPsi1, "psi1", 1.0, [](double u) {
    if (u <= 0.0) return u + std::log(kLn2);
    return std::log(log1p_exp(u));
  });
}

PsiFunction PsiFunction::psi_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::kInvalidArgument, "psi_p requires p > 1");
  }
  const double e = 1.0 - 1.0 / p;
  char buf[64];
  std::snprintf(buf, sizeof buf, "psi_p:%g", p);
  return PsiFunction(PsiKind::kPsiP, buf, p, [e](double u) { return u <= 0.0 ? u : e * u; });
}

PsiFunction PsiFunction::log_sq() {
  return PsiFunction(PsiKind::kLogSq, "log2", 1.0,
                     [](double u) { return 2.0 * std::log(log1p_exp(u)); });
}

PsiFunction PsiFunction::log1p() {
  return PsiFunction(PsiKind::kLog1p, "log1p", 1.0,
                     [](double u) { return std::log(log1p_exp(u)); });
}

PsiFunction PsiFunction::linear() {
  return PsiFunction(PsiKind::kLinear, "linear", 1.0, [](double u) { return u; });
}

PsiFunction PsiFunction::custom(std::string name, std::function<double(double)> log_eval) {
  if (!log_eval) throw Error(ErrorCode::kInvalidArgument, "custom psi needs an evaluator");
  return PsiFunction(PsiKind::kCustom, std::move(name), 1.0, std::move(log_eval));
}

PsiFunction PsiFunction::tabulated(std::vector<double> t, std::vector<double> psi,
                                   std::string name) {
  if (t.size() != psi.size() || t.size() < 2) {
    throw Error(ErrorCode::kSchema, "tabulated psi needs at least two (t, psi) pairs");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(psi[i] > 0.0) || !std::isfinite(t[i]) || !std::isfinite(psi[i])) {
      throw Error(ErrorCode::kSchema, "tabulated psi: entries must be positive and finite", i + 1);
    }
    if (i > 0 && (!(t[i] > t[i - 1]) || psi[i] < psi[i - 1])) {
      throw Error(ErrorCode::kNonMonotone, "tabulated psi must be increasing", i + 1);
    }
  }
  std::vector<double> lt(t.size());
  std::vector<double> lp(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    lt[i] = std::log(t[i]);
    lp[i] = std::log(psi[i]);
  }
  const std::size_t n = t.size();
  const double tail_exponent = (lp[n - 1] - lp[n - 2]) / (lt[n - 1] - lt[n - 2]);
  auto eval = [t, psi, lt, lp, tail_exponent](double u) {
    if (u <= lt.front()) return lp.front() + (u - lt.front());
    if (u >= lt.back()) return lp.back() + tail_exponent * (u - lt.back());
    const double x = std::exp(u);
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
    return std::log(psi[j - 1] + w * (psi[j] - psi[j - 1]));
  };
  return PsiFunction(PsiKind::kCustom, std::move(name), 1.0, eval);
}

double PsiFunction::value_at_log(double u) const { return std::exp(log_eval_(u)); }

double PsiFunction::operator()(double t) const {
  if (t < 0.0 || std::isnan(t)) throw Error(ErrorCode::kInvalidArgument, "psi: t must be >= 0");
  if (t == 0.0) return 0.0;
  return value_at_log(std::log(t));
}

double PsiFunction::slope_at_zero() const {
  switch (kind_) {
    case PsiKind::kPsi1: return kLn2;
    case PsiKind::kPsiP:
    case PsiKind::kLog1p:
    case PsiKind::kLinear: return 1.0;
    case PsiKind::kLogSq: return 0.0;
    case PsiKind::kCustom: break;
  }
  return std::exp(log_eval_(-40.0) + 40.0);
}

bool PsiFunction::concave_closed_form() const noexcept {
  return kind_ == PsiKind::kPsi1 || kind_ == PsiKind::kPsiP || kind_ == PsiKind::kLog1p ||
         kind_ == PsiKind::kLinear;
}

PsiFunction make_psi(const std::string& spec) {
  if (spec == "psi1") return PsiFunction::psi1();
  if (spec == "log2" || spec == "log_sq") return PsiFunction::log_sq();
  if (spec == "log1p" || spec == "psi0") return PsiFunction::log1p();
  if (spec == "linear") return PsiFunction::linear();
  if (spec.rfind("psi_p:", 0) == 0) {
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(spec.substr(6), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != spec.size() - 6) {
      throw Error(ErrorCode::kInvalidArgument, "psi_p: cannot parse exponent in '" + spec + "'");
    }
    return PsiFunction::psi_p(p);
  }
  if (spec.rfind("custom:", 0) == 0) {
    const std::string path = spec.substr(7);
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open psi table '" + path + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
      return PsiFunction::tabulated(doc.at("t").get<std::vector<double>>(),
                                    doc.at("psi").get<std::vector<double>>(), "custom:" + path);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchema, std::string("psi table: ") + e.what());
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown psi '" + spec + "'");
}

std::string check_psi_invariants(const PsiFunction& psi) {
  // sample ψ on a geometric grid t = 10^{-6} .. 10^{12}
  constexpr int kPerDecade = 16;
  std::vector<double> u;
  for (int k = -6 * kPerDecade; k <= 12 * kPerDecade; ++k) {
    u.push_back(std::log(10.0) * k / kPerDecade);
  }
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = psi.value_at_log(u[i]);
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (v[i] < v[i - 1] * (1.0 - 1e-12)) return "not non-decreasing near t = " + std::to_string(std::exp(u[i]));
  }
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    // chord slope must not increase
    const double s1 = (v[i] - v[i - 1]) / (std::exp(u[i]) - std::exp(u[i - 1]));
    const double s2 = (v[i + 1] - v[i]) / (std::exp(u[i + 1]) - std::exp(u[i]));
    if (s2 > s1 * (1.0 + 1e-9) + 1e-300) return "not concave near t = " + std::to_string(std::exp(u[i]));
  }
  if (!(psi.value_at_log(200.0) > psi.value_at_log(100.0))) return "does not grow without bound";
  return {};
}

}  // namespace singtrace
