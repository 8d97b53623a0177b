#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lml/projection.hpp"

// Reference routines for checking the library. They intentionally avoid the
// multi-sample solver and work in extended precision where it matters.
namespace lml::oracle {

struct OracleConfig {
  double bisection_tol = 1e-14;
  double fd_step = 1e-6;
  double kkt_tol = 1e-9;
};

/// Plain two-point bisection on g, in long double, from a bracket that is
/// widened until its endpoint signs are verified.
LmlPoint reference_project(std::span<const double> x, int k,
                           const OracleConfig& cfg = {});

struct KktReport {
  double stationarity = 0.0;  ///< max_i |y_i - sigmoid(x_i + nu)|
  double logit_spread = 0.0;  ///< max_i |log(y_i/(1-y_i)) - x_i - nu| (informational)
  double feasibility = 0.0;   ///< |sum(y) - k|
  bool interior = true;
  bool passed = false;
};

/// First-order optimality of y for the projection of x, with nu = y.dual.
///
/// Stationarity is measured as the distance between y and sigmoid(x + nu),
/// i.e. the logit condition mapped back to probability space, where the
/// rounding of y itself is bounded. Passes when stationarity <= kkt_tol,
/// feasibility <= 1e-8 n and every coordinate is interior.
KktReport check_kkt(std::span<const double> x, const LmlPoint& y,
                    const OracleConfig& cfg = {});

using VectorFn = std::function<std::vector<double>(std::span<const double>)>;

/// (f(x + h v) - f(x - h v)) / 2h
std::vector<double> finite_diff_jvp(const VectorFn& f,
                                    std::span<const double> x,
                                    std::span<const double> direction,
                                    double step = 1e-6);

/// Central-difference gradient of a scalar function, one coordinate at a time.
std::vector<double> finite_diff_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double step = 1e-6);

/// ||a - b|| / max(||a||, ||b||), or ||a - b|| when both norms are below
/// `floor`.
double relative_error(std::span<const double> a, std::span<const double> b,
                      double floor = 1e-12);

}  // namespace lml::oracle
