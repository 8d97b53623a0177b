#include "lml/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lml::oracle {

namespace {

long double sigmoid_ld(long double t) {
  const long double z = std::exp(-std::fabs(t));
  return t >= 0 ? 1.0L / (1.0L + z) : z / (1.0L + z);
}

long double g_ld(std::span<const double> x, int k, long double nu) {
  long double s = 0.0L;
  for (double xi : x) s += sigmoid_ld(static_cast<long double>(xi) + nu);
  return s - k;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

}  // namespace

LmlPoint reference_project(std::span<const double> x, int k,
                           const OracleConfig& cfg) {
  validate_logits(x);
  validate_k(x.size(), k);

  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  long double lo = -static_cast<long double>(*mx) - 1.0L;
  long double hi = -static_cast<long double>(*mn) + 1.0L;
  for (long double step = 1.0L; g_ld(x, k, lo) > 0; step *= 2) lo -= step;
  for (long double step = 1.0L; g_ld(x, k, hi) < 0; step *= 2) hi += step;

  for (int it = 0; it < 10000 && hi - lo > cfg.bisection_tol; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const long double g = g_ld(x, k, mid);
    if (g == 0) {
      lo = hi = mid;
      break;
    }
    (g < 0 ? lo : hi) = mid;
  }
  const long double nu = 0.5L * (lo + hi);

  LmlPoint out;
  out.k = k;
  out.dual = static_cast<double>(nu);
  out.probs.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out.probs[i] = static_cast<double>(sigmoid_ld(static_cast<long double>(x[i]) + nu));
  return out;
}

KktReport check_kkt(std::span<const double> x, const LmlPoint& y,
                    const OracleConfig& cfg) {
  if (x.size() != y.size())
    throw std::invalid_argument("check_kkt: size mismatch");
  KktReport r;
  long double sum = 0.0L;
  const long double nu = y.dual;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double yi = y.probs[i];
    sum += yi;
    r.interior = r.interior && yi > 0.0 && yi < 1.0;
    const long double target = sigmoid_ld(static_cast<long double>(x[i]) + nu);
    r.stationarity = std::max(
        r.stationarity, static_cast<double>(std::fabs(yi - target)));
    const double logit = std::log(yi) - std::log1p(-yi);
    r.logit_spread = std::max(r.logit_spread,
                              std::abs(logit - x[i] - y.dual));
  }
  r.feasibility = static_cast<double>(std::fabs(sum - y.k));
  r.passed = r.interior && r.stationarity <= cfg.kkt_tol &&
             r.feasibility <= 1e-8 * static_cast<double>(x.size());
  return r;
}

std::vector<double> finite_diff_jvp(const VectorFn& f,
                                    std::span<const double> x,
                                    std::span<const double> direction,
                                    double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (direction.size() != x.size())
    throw std::invalid_argument("direction has wrong length");
  std::vector<double> plus(x.begin(), x.end());
  std::vector<double> minus(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    plus[i] += step * direction[i];
    minus[i] -= step * direction[i];
  }
  std::vector<double> out = f(plus);
  const std::vector<double> fm = f(minus);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (out[i] - fm[i]) / (2.0 * step);
  return out;
}

std::vector<double> finite_diff_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double fp = f(probe);
    probe[i] = x[i] - step;
    const double fm = f(probe);
    probe[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

double relative_error(std::span<const double> a, std::span<const double> b,
                      double floor) {
  if (a.size() != b.size())
    throw std::invalid_argument("relative_error: size mismatch");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double scale = std::max(norm(a), norm(b));
  const double d = norm(diff);
  return scale < floor ? d : d / scale;
}

}  // namespace lml::oracle
