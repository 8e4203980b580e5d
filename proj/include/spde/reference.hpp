#pragma once

#include <cstdint>
#include <vector>

#include "spde/fbm.hpp"
#include "spde/grid.hpp"
#include "spde/montecarlo.hpp"

namespace spde::reference {

// The mode path by direct O(n^2) summation of the exponential
// convolution instead of the one-step recursion, on the same weights.
// `noise` holds the driving path at every grid node.
std::vector<double> fou_path_direct(double mu, double x0, const TimeGrid& grid,
                                    const std::vector<double>& noise);

// sample_fbm_paths without the worker loop parallelism.
FbmPathSet sample_fbm_paths_serial(const TimeGrid& grid, double hurst, int n_modes,
                                   std::uint64_t seed, const FbmOptions& opts = {});

// run_mc as a plain loop; the fixed slot layout makes the report
// bit-identical to the parallel version.
McReport run_mc_serial(const McConfig& cfg);

}  // namespace spde::reference
