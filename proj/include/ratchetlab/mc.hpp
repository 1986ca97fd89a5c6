#pragma once

#include <cstdint>
#include <vector>

#include "ratchetlab/lattice.hpp"

namespace ratchetlab {

/// Monte Carlo configuration. Paths are simulated with independent RNG
/// streams derived from (seed, path index), so results are reproducible and
/// unaffected by the thread count, and enlarging `paths` extends rather than
/// reshuffles the sample.
struct McConfig {
    std::int64_t paths = 1;
    double dt = 1e-4;
    std::uint64_t seed = 0;
    bool wrap = false;
    int threads = 0;
};

/// Euler-Maruyama endpoint samples of the flashing diffusion
///   dY = eta(t) * mu(Y) dt + dB,
/// where eta switches Off/On per (tau1, tau2) and is evaluated at the left
/// endpoint of each step. dt must not exceed min(tau1, tau2)/100. With
/// cfg.wrap the endpoints are reduced mod L.
std::vector<double> simulate_flashing(const RatchetParams& params, const McConfig& cfg,
                                      double t_end, double y0);

/// Same integrator with the potential permanently on (the plain ratchet
/// diffusion dX = mu(X) dt + dB).
std::vector<double> simulate_ratchet(const RatchetParams& params, const McConfig& cfg,
                                     double t_end, double y0);

/// Kolmogorov-Smirnov statistic between the empirical CDF of the samples and
/// the CDF of a lattice distribution (a step function at positions i/n).
double ks_distance(const std::vector<double>& samples, const LatticeDistribution& dist);

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    std::int64_t count = 0;
};

/// Equal-width histogram of the samples over [lo, hi).
std::vector<HistogramBin> histogram(const std::vector<double>& samples, double lo, double hi,
                                    int bins);

}  // namespace ratchetlab
