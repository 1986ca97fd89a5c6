#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "ratchetlab/lattice.hpp"

namespace ratchetlab {

/// Peak decomposition of a multi-peaked lattice density: per-region masses,
/// interpolated peak heights, and the overall mean displacement.
struct PeakStats {
    std::array<double, 3> areas{};
    std::array<double, 3> heights{};
    double mean = 0.0;
};

/// The two potential maxima bracketing the central minimum at 0:
/// (alpha*L - L, alpha*L), which are the integers (l - L, l). These split the
/// line into the left / center / right peak regions.
std::pair<double, double> peak_partition_boundaries(const RatchetParams& params);

/// Region masses, peak heights and mean of a distribution. Regions are
/// left-closed: (-inf, b_left), [b_left, b_right), [b_right, inf), so a
/// lattice site on a boundary counts toward the region on its right (the
/// convention that reproduces the reference tables; it only matters for
/// weak drift, where the boundary sites still carry ~1e-4 of mass).
/// Heights are the linearly interpolated rescaled density evaluated at the
/// three potential minima -L, 0, L; under weak drift the density mode sits
/// one node off the minimum, so this is not the same as the region maximum.
PeakStats peak_stats(const LatticeDistribution& dist, const RatchetParams& params);

/// Standard normal CDF (via erfc; accurate to ~1e-15).
double normal_cdf(double x);

/// Areas a centered normal with sigma = sqrt(tau1) puts on the three peak
/// regions: (Phi(b_left/s), Phi(b_right/s) - Phi(b_left/s), 1 - Phi(b_right/s)).
std::array<double, 3> normal_reference_areas(double tau1, const RatchetParams& params);

struct SweepRow {
    double key = 0.0;  // lambda or n
    PeakStats stats;
};

/// Evolves a point mass at 0 through one flash cycle for each lambda and
/// tabulates peak statistics. Rows are independent and run in parallel.
std::vector<SweepRow> lambda_sweep(const std::vector<double>& lambdas, const RatchetParams& base,
                                   int n, int threads = 0);

/// Same sweep over the lattice refinement n at fixed drift.
std::vector<SweepRow> n_sweep(const std::vector<int>& ns, const RatchetParams& base,
                              int threads = 0);

struct TauCell {
    Rational tau1{1, 1};
    Rational tau2{1, 1};
    int m = 0;
    int n_used = 0;
    double mubar = 0.0;
    double rate = 0.0;  // mubar / (tau1 + tau2)
    bool evaluated = false;
};

struct TauSweepResult {
    std::vector<TauCell> cells;
    int best_index = -1;  // -1 when nothing was evaluated
};

/// Grid search for the flash timing maximizing the long-run displacement per
/// unit time, mubar / (tau1 + tau2). For each pair the refinement is the
/// smallest multiple of its m that is >= n_floor; cells whose refinement
/// would exceed max_n (when > 0) are skipped and left unevaluated. Ties go to
/// the smaller tau1 + tau2.
TauSweepResult optimize_tau(const RatchetParams& base,
                            const std::vector<std::pair<Rational, Rational>>& grid, int n_floor,
                            int max_n = 0, int threads = 0);

}  // namespace ratchetlab
