#pragma once

#include <cstdint>
#include <vector>

#include "ratchetlab/model.hpp"

namespace ratchetlab {

/// Exact probability distribution of a walk on the integer lattice.
///
/// Index i of `masses` refers to lattice site `offset + i`; the physical
/// position of site j is j / n_scale. After k steps from a point mass the
/// support lives on a single parity class, so every other entry is a
/// structural zero; the array keeps them (simpler indexing, 2x memory).
/// `steps_taken` is the walk's global step clock, used for parity checks and
/// for resuming an evolution mid-schedule.
struct LatticeDistribution {
    std::int64_t offset = 0;
    std::vector<double> masses;
    int n_scale = 1;
    std::int64_t steps_taken = 0;

    static LatticeDistribution point_mass(std::int64_t site, int n_scale);

    std::int64_t min_site() const { return offset; }
    std::int64_t max_site() const { return offset + static_cast<std::int64_t>(masses.size()) - 1; }
    double mass_at(std::int64_t site) const;

    /// Compensated sums; after 48k steps naive accumulation would already
    /// cost a digit or two.
    double total_mass() const;
    double mean_position() const;

    /// Drops exact zeros at both ends so the array edges are true support.
    void trim();

    /// True when all nonzero cells share one index parity.
    bool single_parity() const;
};

/// Integer step counts for one flash cycle at lattice refinement n.
/// steps_off = n^2*tau1 and steps_on = n^2*tau2 are exact integers because n
/// must be a multiple of m, the smallest integer with m^2*tau1 and m^2*tau2
/// both integral.
struct FlashingSchedule {
    int n = 1;
    std::int64_t steps_off = 0;
    std::int64_t steps_on = 0;
    int m = 1;

    static FlashingSchedule make(const RatchetParams& params, int n);

    std::int64_t cycle_steps() const { return steps_off + steps_on; }
};

/// Smallest positive integer m with m^2*tau1 and m^2*tau2 both integers,
/// found by exhaustive search in exact arithmetic.
int compute_m(const Rational& tau1, const Rational& tau2);

/// One step of the simple symmetric walk: mass[j] <- (old[j-1] + old[j+1])/2.
LatticeDistribution step_symmetric(const LatticeDistribution& dist);

/// One step of the refined ratchet walk: forward probability p0 at sites with
/// mod(j, L*n) < l*n and p1 elsewhere (non-negative remainder for j < 0),
/// where (p0, p1) use rho = 1 - lambda/n. Requires lambda < n.
LatticeDistribution step_ratchet(const LatticeDistribution& dist, const RatchetParams& params,
                                 int n);

/// A run of consecutive steps in one phase.
struct PhaseRun {
    FlashingPhase phase = FlashingPhase::Off;
    std::int64_t steps = 0;
};

/// Evolves a distribution through an explicit phase sequence. This is the
/// workhorse behind evolve_flashing and the wrapped-chain analysis; it does
/// not consult the step clock for phases.
LatticeDistribution evolve_sequence(const LatticeDistribution& initial,
                                    const RatchetParams& params, int n,
                                    const std::vector<PhaseRun>& runs);

/// Evolves total_steps steps of the alternating schedule (steps_off symmetric
/// steps, then steps_on ratchet steps, repeating). The phase of each step is
/// determined by the distribution's global step clock, so an evolution can be
/// split into batches or resumed from a checkpoint and the phases still line
/// up; a fresh distribution starts in the Off phase.
/// Total mass is verified to 1e-12 afterwards (conservation is asserted, not
/// restored).
LatticeDistribution evolve_flashing(const LatticeDistribution& initial,
                                    const RatchetParams& params,
                                    const FlashingSchedule& schedule, std::int64_t total_steps);

struct DensityPoint {
    std::int64_t site = 0;
    double position = 0.0;
    double density = 0.0;
};

/// Histogram heights at the occupied lattice sites: density = mass / spacing,
/// where the spacing is 2/n for a single-parity distribution (the usual case
/// after a point-mass evolution) and 1/n when both parities carry mass.
/// Linear interpolation between the returned points is the plotted density.
std::vector<DensityPoint> rescaled_density(const LatticeDistribution& dist);

}  // namespace ratchetlab
