#pragma once

#include <cmath>
#include <stdexcept>

namespace spde {

// Uniform grid 0 = t_0 < t_1 < ... < t_n = T.  Node values are computed as
// horizon*i/n so the endpoints are exact.
struct TimeGrid {
    double horizon;
    int n_steps;

    TimeGrid(double horizon_, int n_steps_) : horizon(horizon_), n_steps(n_steps_) {
        if (!(horizon > 0.0) || !std::isfinite(horizon))
            throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
        if (n_steps < 1)
            throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
    }

    double dt() const { return horizon / n_steps; }
    double t(int i) const { return horizon * i / n_steps; }
    int n_points() const { return n_steps + 1; }
};

}  // namespace spde
