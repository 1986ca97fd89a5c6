#pragma once

#include <vector>

#include "ratchetlab/model.hpp"

namespace ratchetlab {

/// A nearest-neighbor random walk on the cycle Z_size with state-dependent
/// forward probabilities. forward[j] = P(j -> j+1 mod size); the backward
/// probability is the complement. All entries must lie strictly in (0, 1).
struct CycleChain {
    int size = 0;
    std::vector<double> forward;

    double backward(int j) const { return 1.0 - forward[static_cast<std::size_t>(j)]; }
};

/// The capital-dependent game on Z_L with win probability p0 at states
/// j mod L < l and p1 elsewhere, parameterized by rho in (0, 1) so the game
/// is asymptotically fair:
///   p0 = rho^((1-alpha)/alpha) / (1 + rho^((1-alpha)/alpha)),
///   p1 = 1 / (1 + rho),
/// with alpha = l / L_period.
struct GameBSpec {
    int l = 1;
    int L_period = 3;
    double rho = 1.0 / 3.0;
    double p0 = 0.1;
    double p1 = 0.75;

    static GameBSpec make(double rho, int l, int L_period);

    double alpha() const { return static_cast<double>(l) / L_period; }
};

/// Fair-game probabilities (p0, p1) for a given rho in (0, 1).
/// Rejects rho outside the open interval.
std::pair<double, double> p0_p1_from_rho(double rho, int l, int L_period);

/// Inverts the fairness constraint: the p1 matching a given p0 in (0, 1/2),
/// p1 = 1 / (1 + (p0/(1-p0))^(alpha/(1-alpha))).
double solve_p1_from_p0(double p0, double alpha);

/// Stationary measure of the fair game, evaluated from its closed form (the
/// detailed-balance solution), normalized to sum 1.
std::vector<double> invariant_measure_b(const GameBSpec& spec);

/// Coin-flip game: forward probability 1/2 at every state.
CycleChain game_a_chain(int size);

/// One-step chain of the fair game on Z_L.
CycleChain game_b_chain(const GameBSpec& spec);

/// Random mixture: play the coin flip with probability c, the fair game
/// otherwise. c must lie strictly in (0, 1).
CycleChain mixture_chain(double c, const GameBSpec& spec);

/// Refined cycle chain on Z_{L*n}: forward probability p0 where
/// mod(j, L*n) < l*n and p1 elsewhere, with rho = 1 - lambda/n.
/// Requires lambda < n; n = 1 recovers the plain game chain.
CycleChain refined_ratchet_chain(const RatchetParams& params, int n);

/// Stationary distribution of a cycle chain by dense linear solve.
/// Detailed balance is not assumed; mixtures and pattern products need the
/// general route.
std::vector<double> stationary_cycle(const CycleChain& chain);

/// Stationary distribution of an arbitrary row-stochastic matrix (row-major,
/// size x size) by dense linear solve. Used for pattern products.
std::vector<double> stationary_dense(const std::vector<double>& matrix, int size);

/// Long-run mean profit per step: sum_j nu(j) * (2*forward[j] - 1) under the
/// chain's stationary distribution.
double mean_profit_single(const CycleChain& chain);

/// Mean profit per step of the random mixture c*A + (1-c)*B.
double mean_profit_mixture(double c, const GameBSpec& spec);

/// Expected profit accumulated over one period of the pattern A^r B^s,
/// starting from the stationary distribution of the (r+s)-step product chain.
double mean_profit_pattern(int r, int s, const GameBSpec& spec);

}  // namespace ratchetlab
