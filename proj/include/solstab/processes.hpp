#pragma once

#include <cstdint>
#include <vector>

#include "solstab/core.hpp"

namespace solstab {

/// Discretized Brownian realization on [0, x_max]: per-cell increments dW and
/// their sum W_{x_max}.
struct BrownianPath {
    PathGrid grid;
    std::vector<double> increments;
    double terminal = 0.0;
};

/// Two-state Markov (telegraph) realization on the grid of its own internal
/// variable; values are +-amplitude.
struct TelegraphPath {
    PathGrid grid;
    std::vector<double> values;
    double amplitude = 1.0;
    double rate = 1.0;
};

/// Standard Brownian increments: independent N(0, dx) per cell.
BrownianPath sample_brownian(std::uint64_t seed, const PathGrid& grid);

/// Wraps externally supplied increments (zero paths, negated paths, ...).
BrownianPath make_brownian(const PathGrid& grid, std::vector<double> increments);

/// Stationary telegraph process on {-a, +a} with switching rate lambda,
/// sampled exactly at the grid points. Requires dx < 1/(10 lambda).
TelegraphPath sample_telegraph(std::uint64_t seed, const PathGrid& grid, double a, double lambda);

/// nu(x / epsilon^2) / epsilon by nearest-cell lookup; the path must have been
/// generated on [0, R/epsilon^2].
double scaled_noise_value(const TelegraphPath& path, double epsilon, double x);

}  // namespace solstab
