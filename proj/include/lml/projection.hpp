#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lml {

/// Parameters of the multi-sample bracketing solver for the dual variable.
struct SolverConfig {
  int samples_per_iter = 10;     ///< points of g evaluated per iteration (endpoints included)
  double saturation_offset = 7.0;
  double tolerance = 1e-12;      ///< stop once the bracket is at most this wide
  double residual_tolerance = 1e-14;
  int max_iters = 100;
  bool parallel = false;         ///< evaluate the per-iteration samples on worker threads

  void validate() const;
};

/// Interval [lo, hi] with g(lo) <= 0 <= g(hi).
struct DualBracket {
  double lo;
  double hi;

  double width() const { return hi - lo; }
};

struct DualSolution {
  double nu = 0.0;
  int iterations = 0;
  double width = 0.0;  ///< width of the last bracket (0 on an exact hit)
};

/// Interior point of the (n,k) polytope together with its optimal dual.
struct LmlPoint {
  std::vector<double> probs;
  int k = 0;
  double dual = 0.0;
  int iterations = 0;

  std::size_t size() const { return probs.size(); }
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws std::invalid_argument unless x has at least two entries, all finite.
void validate_logits(std::span<const double> x);

// Throws std::domain_error unless 1 <= k <= n-1.
void validate_k(std::size_t n, int k);

/// g(nu) = sum_i sigmoid(x_i + nu) - k. Strictly increasing in nu.
double g_dual(std::span<const double> x, int k, double nu);

/// Saturation-based starting bracket. Both endpoint signs are checked and
/// each side's offset is doubled until the bracket straddles the root.
DualBracket initial_bracket(std::span<const double> x, int k,
                            const SolverConfig& cfg = {});

/// Root of g by repeated d-point linear sampling of the current bracket.
///
/// Every iteration evaluates g at `samples_per_iter` equally spaced points
/// of [lo, hi], endpoints included, and keeps the adjacent pair around the
/// last negative sample. An exact zero sample is returned immediately.
/// Otherwise the loop stops once the bracket is no wider than
/// `cfg.tolerance` or |g(midpoint)| <= `cfg.residual_tolerance`, and the
/// midpoint is returned. Sums over x are accumulated in index order for
/// every sample, so parallel and serial runs give bit-identical results.
DualSolution find_dual(std::span<const double> x, int k,
                       const SolverConfig& cfg = {});

/// Projection of x onto the interior of {0 < y < 1, sum(y) = k} under the
/// binary-entropy regularizer: y = sigmoid(x + nu*).
LmlPoint lml_project(std::span<const double> x, int k,
                     const SolverConfig& cfg = {});

/// Lower clamp applied to y (and 1-y) before forming the KKT Hessian.
inline constexpr double kBackwardClamp = 1e-12;

/// Gradient of a loss w.r.t. x given its gradient w.r.t. y = lml_project(x, k).
/// Solves the KKT system of the projection in closed form; the result always
/// sums to zero.
std::vector<double> lml_backward(const LmlPoint& y,
                                 std::span<const double> grad_out);

}  // namespace lml
