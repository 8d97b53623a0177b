#include "lml/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lml {

double binary_entropy(std::span<const double> y) {
  double h = 0.0;
  for (double v : y) {
    if (!(v > 0.0 && v < 1.0))
      throw std::domain_error("binary entropy needs entries in (0,1), got " +
                              std::to_string(v));
    h -= v * std::log(v) + (1.0 - v) * std::log1p(-v);
  }
  return h;
}

double shannon_entropy(std::span<const double> y) {
  double h = 0.0;
  for (double v : y) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::domain_error("entropy needs positive entries, got " +
                              std::to_string(v));
    h -= v * std::log(v);
  }
  return h;
}

Penalty parse_penalty(std::string_view name) {
  if (name == "binary") return Penalty::kBinary;
  if (name == "shannon") return Penalty::kShannon;
  throw std::invalid_argument("unknown penalty '" + std::string(name) +
                              "' (expected binary or shannon)");
}

std::string_view penalty_name(Penalty p) {
  return p == Penalty::kBinary ? "binary" : "shannon";
}

std::vector<SurfacePoint> entropy_surface_grid(int n, int k, Penalty penalty,
                                               int resolution) {
  if (n != 3 && n != 4)
    throw std::domain_error("surface grids support n = 3 or 4, got " +
                            std::to_string(n));
  if (k < 1 || k > n - 1)
    throw std::domain_error("k must satisfy 1 <= k <= n-1 (n=" +
                            std::to_string(n) + ", k=" + std::to_string(k) + ")");
  if (resolution < 2)
    throw std::invalid_argument("resolution must be at least 2");

  const int free = n - 1;
  std::vector<int> idx(static_cast<std::size_t>(free), 0);
  std::vector<SurfacePoint> out;
  const auto inside = [](double v) {
    return v > kSurfaceMargin && v < 1.0 - kSurfaceMargin;
  };

  while (true) {
    SurfacePoint p;
    p.y.resize(static_cast<std::size_t>(n));
    double sum = 0.0;
    bool ok = true;
    for (int i = 0; i < free; ++i) {
      p.y[i] = static_cast<double>(idx[i]) / resolution;
      sum += p.y[i];
      ok = ok && inside(p.y[i]);
    }
    p.y[free] = static_cast<double>(k) - sum;
    if (ok && inside(p.y[free])) {
      p.penalty = penalty == Penalty::kBinary ? binary_entropy(p.y)
                                              : shannon_entropy(p.y);
      out.push_back(std::move(p));
    }

    // Odometer increment, last free coordinate fastest.
    int pos = free - 1;
    while (pos >= 0 && idx[pos] == resolution) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  return out;
}

}  // namespace lml
