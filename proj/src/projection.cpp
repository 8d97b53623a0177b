#include "lml/projection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "lml/sigmoid.hpp"

namespace lml {

namespace {

// Sum accumulated in index order; every caller relies on this for
// reproducibility across serial and parallel evaluation.
double sigmoid_sum(std::span<const double> x, double nu) {
  double acc = 0.0;
  for (double xi : x) acc += sigmoid(xi + nu);
  return acc;
}

void evaluate_samples(std::span<const double> x, int k,
                      std::span<const double> nus, std::span<double> gs,
                      bool parallel) {
  const std::size_t d = nus.size();
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t workers =
      parallel ? std::min<std::size_t>(d, hw > 1 ? hw : 1) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < d; ++i) gs[i] = sigmoid_sum(x, nus[i]) - k;
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < d; i += workers)
        gs[i] = sigmoid_sum(x, nus[i]) - k;
    });
  }
}

// k-th and (k+1)-th largest entries (1-based order statistics).
std::pair<double, double> order_statistics(std::span<const double> x, int k) {
  std::vector<double> v(x.begin(), x.end());
  const auto kth = v.begin() + (k - 1);
  std::nth_element(v.begin(), kth, v.end(), std::greater<>());
  const double next = *std::max_element(kth + 1, v.end());
  return {*kth, next};
}

}  // namespace

void SolverConfig::validate() const {
  if (samples_per_iter < 2)
    throw std::invalid_argument("samples_per_iter must be at least 2");
  if (!(saturation_offset > 0.0) || !std::isfinite(saturation_offset))
    throw std::invalid_argument("saturation_offset must be positive");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("tolerance must be positive");
  if (residual_tolerance < 0.0)
    throw std::invalid_argument("residual_tolerance must be non-negative");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
}

void validate_logits(std::span<const double> x) {
  if (x.size() < 2)
    throw std::invalid_argument("score vector needs at least 2 entries, got " +
                                std::to_string(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      throw std::invalid_argument("score " + std::to_string(i) +
                                  " is not finite");
  }
}

void validate_k(std::size_t n, int k) {
  if (k < 1 || static_cast<std::size_t>(k) >= n) {
    throw std::domain_error(
        "k must satisfy 1 <= k <= n-1 (n=" + std::to_string(n) +
        ", k=" + std::to_string(k) +
        "); k=0 or k=n leaves no interior point to project onto");
  }
}

double g_dual(std::span<const double> x, int k, double nu) {
  validate_logits(x);
  validate_k(x.size(), k);
  if (!std::isfinite(nu)) throw std::invalid_argument("nu is not finite");
  return sigmoid_sum(x, nu) - k;
}

DualBracket initial_bracket(std::span<const double> x, int k,
                            const SolverConfig& cfg) {
  validate_logits(x);
  validate_k(x.size(), k);
  cfg.validate();

  const auto [kth, next] = order_statistics(x, k);
  double lo_offset = cfg.saturation_offset;
  double hi_offset = cfg.saturation_offset;
  DualBracket br{-kth - lo_offset, -next + hi_offset};

  // g tends to -k and n-k at the extremes, so both loops terminate.
  while (sigmoid_sum(x, br.lo) - k > 0.0) {
    lo_offset *= 2.0;
    br.lo = -kth - lo_offset;
  }
  while (sigmoid_sum(x, br.hi) - k < 0.0) {
    hi_offset *= 2.0;
    br.hi = -next + hi_offset;
  }
  return br;
}

DualSolution find_dual(std::span<const double> x, int k,
                       const SolverConfig& cfg) {
  DualBracket br = initial_bracket(x, k, cfg);
  const auto d = static_cast<std::size_t>(cfg.samples_per_iter);
  std::vector<double> nus(d);
  std::vector<double> gs(d);

  int iter = 0;
  while (br.width() > cfg.tolerance) {
    if (iter == cfg.max_iters) {
      throw ConvergenceError("dual bracketing did not converge in " +
                             std::to_string(cfg.max_iters) +
                             " iterations (bracket width " +
                             std::to_string(br.width()) + ")");
    }
    ++iter;

    const double step = br.width() / static_cast<double>(d - 1);
    nus.front() = br.lo;
    nus.back() = br.hi;
    for (std::size_t i = 1; i + 1 < d; ++i)
      nus[i] = br.lo + step * static_cast<double>(i);
    evaluate_samples(x, k, nus, gs, cfg.parallel);

    for (std::size_t i = 0; i < d; ++i) {
      if (gs[i] == 0.0) return {nus[i], iter, 0.0};
    }

    // gs.front() < 0 < gs.back() holds by construction, so i_lo < d-1.
    std::size_t i_lo = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (gs[i] < 0.0) i_lo = i;
    }
    const DualBracket next{nus[i_lo], nus[i_lo + 1]};
    if (next.lo == br.lo && next.hi == br.hi) break;  // no representable split
    br = next;

    const double mid = 0.5 * (br.lo + br.hi);
    if (std::abs(sigmoid_sum(x, mid) - k) <= cfg.residual_tolerance)
      return {mid, iter, br.width()};
  }
  return {0.5 * (br.lo + br.hi), iter, br.width()};
}

LmlPoint lml_project(std::span<const double> x, int k,
                     const SolverConfig& cfg) {
  const DualSolution sol = find_dual(x, k, cfg);
  LmlPoint out;
  out.k = k;
  out.dual = sol.nu;
  out.iterations = sol.iterations;
  out.probs.resize(x.size());
  // Saturated coordinates are pulled back to the nearest interior doubles.
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    out.probs[i] = std::clamp(sigmoid(x[i] + sol.nu), lo, hi);
  return out;
}

std::vector<double> lml_backward(const LmlPoint& y,
                                 std::span<const double> grad_out) {
  if (grad_out.size() != y.size()) {
    throw std::invalid_argument("upstream gradient has length " +
                                std::to_string(grad_out.size()) +
                                ", projection has length " +
                                std::to_string(y.size()));
  }
  for (double g : grad_out) {
    if (!std::isfinite(g))
      throw std::invalid_argument("upstream gradient is not finite");
  }

  // h = 1/y + 1/(1-y), so h^{-1} = y(1-y).
  const std::size_t n = y.size();
  std::vector<double> h_inv(n);
  double h_inv_sum = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = std::clamp(y.probs[i], kBackwardClamp, 1.0 - kBackwardClamp);
    h_inv[i] = yi * (1.0 - yi);
    h_inv_sum += h_inv[i];
    weighted += h_inv[i] * grad_out[i];
  }
  const double d_nu = weighted / h_inv_sum;

  std::vector<double> grad_x(n);
  for (std::size_t i = 0; i < n; ++i)
    grad_x[i] = h_inv[i] * (grad_out[i] - d_nu);
  return grad_x;
}

}  // namespace lml
