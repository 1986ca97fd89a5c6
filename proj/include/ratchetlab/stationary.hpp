#pragma once

#include <cstdint>
#include <vector>

#include "ratchetlab/lattice.hpp"

namespace ratchetlab {

/// Which walk takes the appended irreducibility step (see below).
enum class ExtraStepKind { None, Symmetric, Ratchet };

/// One-cycle transition matrix of the flashing walk wrapped onto Z_{L*n}.
/// Row i is the law of the wrapped walk after one full flash cycle started
/// at state i. When both L*n and n^2*(tau1+tau2) are even the plain cycle
/// chain splits into two parity classes, so one extra step is appended to
/// restore irreducibility; `cycle_steps` includes it and `extra` records
/// which kind was used.
struct WrappedCycleMatrix {
    int size = 0;
    std::int64_t cycle_steps = 0;
    ExtraStepKind extra = ExtraStepKind::None;
    std::vector<double> rows;

    double entry(int i, int j) const {
        return rows[static_cast<std::size_t>(i) * size + static_cast<std::size_t>(j)];
    }
};

struct StationaryOptions {
    /// Step kind appended when the parity fix is required. The natural
    /// reading is Symmetric (the step after a full cycle is the first step
    /// of the next Off phase); Ratchet is kept as the alternative convention.
    ExtraStepKind extra_step = ExtraStepKind::Symmetric;
    int threads = 0;
};

/// True when the one-cycle wrapped chain is parity-split and needs the
/// appended step.
bool needs_parity_fix(const RatchetParams& params, const FlashingSchedule& schedule);

/// Builds the wrapped one-cycle matrix by evolving a point mass from every
/// start state (rows are independent and run in parallel). Verifies row
/// stochasticity to 1e-10 and irreducibility by reachability scan.
WrappedCycleMatrix build_wrapped_matrix(const RatchetParams& params,
                                        const FlashingSchedule& schedule,
                                        const StationaryOptions& opts = {});

/// Stationary distribution of the wrapped cycle matrix. Power iteration from
/// the uniform vector (tolerance 1e-13 on iterates, averaging the last two
/// iterates if the chain is 2-periodic), falling back to a dense linear
/// solve; fails if neither route reaches residual 1e-10.
/// A custom start vector may be supplied for cross-checking.
std::vector<double> stationary_distribution(const WrappedCycleMatrix& mat,
                                            const std::vector<double>* start = nullptr);

/// Sup-norm of nu*P - nu.
double stationary_residual(const WrappedCycleMatrix& mat, const std::vector<double>& nu);

/// Re-indexes a wrapped stationary vector to physical positions: wrapped
/// position x keeps its site if x < alpha*L and moves to x - L otherwise,
/// giving a distribution supported on [-(1-alpha)*L, alpha*L). On this
/// footing the density is unimodal rather than U-shaped.
LatticeDistribution recenter(const std::vector<double>& pibar, const RatchetParams& params,
                             int n);

struct StationaryResult {
    WrappedCycleMatrix matrix;
    std::vector<double> pibar;
    LatticeDistribution pibar_recentered;
    double mubar = 0.0;
    double residual = 0.0;
};

/// Full pipeline: matrix, stationary law, recentering, and the stationary
/// mean displacement per flash cycle.
///
/// The mean displacement is an unwrapped-line quantity: the recentered
/// stationary law is evolved through one cycle (including the appended
/// parity step, which is mean-neutral when symmetric) and the displacement
/// is mean(final) - mean(start). Evolving the whole mixture at once equals
/// the pibar-weighted average of per-start mean increments, by linearity.
StationaryResult analyze_stationary(const RatchetParams& params, const FlashingSchedule& schedule,
                                    const StationaryOptions& opts = {});

/// Stationary mean displacement per flash cycle (mubar of analyze_stationary).
double mean_displacement_stationary(const RatchetParams& params, const FlashingSchedule& schedule,
                                    const StationaryOptions& opts = {});

/// Independent route for the same quantity: evolve pibar on the wrapped
/// chain and accumulate the expected one-step increment, sum_j nu(j) *
/// (2*p(j) - 1), over every step of the cycle. Used as a consistency check
/// against the unwrapped computation.
double mean_displacement_tracked(const RatchetParams& params, const FlashingSchedule& schedule,
                                 const std::vector<double>& pibar, ExtraStepKind extra);

}  // namespace ratchetlab
