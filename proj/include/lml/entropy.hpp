#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace lml {

/// -sum(y log y + (1-y) log(1-y)); every entry must lie strictly in (0,1).
double binary_entropy(std::span<const double> y);

/// -sum(y log y); every entry must be positive.
double shannon_entropy(std::span<const double> y);

enum class Penalty { kBinary, kShannon };

Penalty parse_penalty(std::string_view name);
std::string_view penalty_name(Penalty p);

struct SurfacePoint {
  std::vector<double> y;
  double penalty;
};

inline constexpr double kSurfaceMargin = 1e-6;

/// Entropy penalty sampled on the interior of the (n,k) polytope.
///
/// The first n-1 coordinates run over the grid {0, 1/r, ..., 1} (r =
/// resolution) and the last one is fixed by sum(y) = k; points with any
/// coordinate within kSurfaceMargin of 0 or 1 are dropped. Rows come out in
/// lexicographic order of the free coordinates. Only n in {3, 4} is supported.
std::vector<SurfacePoint> entropy_surface_grid(int n, int k, Penalty penalty,
                                               int resolution);

}  // namespace lml
