#include "solstab/processes.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "solstab/rng.hpp"

namespace solstab {

BrownianPath sample_brownian(std::uint64_t seed, const PathGrid& grid) {
    if (grid.n_steps < 2) throw std::invalid_argument("sample_brownian: invalid grid");
    Rng rng(seed);
    const double sqrt_dx = std::sqrt(grid.dx());
    BrownianPath path{grid, std::vector<double>(grid.n_steps), 0.0};
    double sum = 0.0;
    for (auto& dw : path.increments) {
        dw = sqrt_dx * rng.gaussian();
        sum += dw;
    }
    path.terminal = sum;
    return path;
}

BrownianPath make_brownian(const PathGrid& grid, std::vector<double> increments) {
    if (static_cast<int>(increments.size()) != grid.n_steps)
        throw std::invalid_argument("make_brownian: increment count does not match grid");
    double sum = 0.0;
    for (double dw : increments) sum += dw;
    return BrownianPath{grid, std::move(increments), sum};
}

TelegraphPath sample_telegraph(std::uint64_t seed, const PathGrid& grid, double a, double lambda) {
    if (!(a > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("sample_telegraph: a and lambda must be positive");
    if (grid.dx() >= 1.0 / (10.0 * lambda))
        throw std::invalid_argument("sample_telegraph: grid under-resolves the switching rate");
    Rng rng(seed);
    TelegraphPath path{grid, std::vector<double>(grid.n_steps), a, lambda};
    // Exact transition probability of the two-state chain over one cell.
    const double flip_p = 0.5 * (1.0 - std::exp(-2.0 * lambda * grid.dx()));
    double v = rng.uniform() < 0.5 ? a : -a;
    for (auto& out : path.values) {
        out = v;
        if (rng.uniform() < flip_p) v = -v;
    }
    return path;
}

double scaled_noise_value(const TelegraphPath& path, double epsilon, double x) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("scaled_noise_value: epsilon must be positive");
    const double s = x / (epsilon * epsilon);
    if (s < 0.0 || s > path.grid.x_max * (1.0 + 1e-12))
        throw std::out_of_range("scaled_noise_value: x/eps^2 outside the path domain");
    auto idx = static_cast<std::size_t>(s / path.grid.dx());
    if (idx >= path.values.size()) idx = path.values.size() - 1;
    return path.values[idx] / epsilon;
}

}  // namespace solstab
