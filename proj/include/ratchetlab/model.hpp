#pragma once

#include <cstdint>

#include "ratchetlab/rational.hpp"

namespace ratchetlab {

/// Parameters of the sawtooth diffusion model.
///
/// The potential has period `L_period` with its minimum at 0 and its maximum
/// at `alpha * L_period`, where alpha = l / L_period is a reduced fraction.
/// The drift strength is given either as gamma or as lambda; the two are tied
/// together by gamma = lambda * (1 - alpha) / 2, and both are stored.
/// Phase durations tau1 (free diffusion) and tau2 (ratchet on) are exact
/// rationals so integer step counts can be derived for any admissible lattice
/// refinement.
struct RatchetParams {
    int l = 1;
    int L_period = 4;
    double alpha = 0.25;
    double gamma = 0.0;
    double lam = 0.0;
    Rational tau1{12, 5};
    Rational tau2{12, 5};

    /// Builds params from the drift-rate form. lam >= 0; lam == 0 is the
    /// degenerate driftless model (allowed, useful as a null case).
    static RatchetParams from_lambda(int l, int L_period, double lam, Rational tau1,
                                     Rational tau2);

    /// Same validation, drift given as gamma = lam * (1 - alpha) / 2.
    static RatchetParams from_gamma(int l, int L_period, double gamma, Rational tau1,
                                    Rational tau2);

    /// alpha == 1/2 gives a symmetric tooth: legal, but no directed transport.
    bool is_symmetric() const { return 2 * l == L_period; }
};

/// Which half of the flash cycle is active at time t.
enum class FlashingPhase { Off, On };

/// Phase of the continuous-time schedule: Off while mod(t, tau1+tau2) < tau1.
FlashingPhase phase_at(double t, const RatchetParams& p);

/// Piecewise-linear sawtooth potential, period L, minimum 0 at multiples of L
/// and maximum L at alpha*L. Total function of x.
double sawtooth_potential(double x, const RatchetParams& p);

/// Drift -gamma * V'(x): -gamma/alpha on [kL, kL+alpha*L), gamma/(1-alpha) on
/// [kL+alpha*L, (k+1)L). Right-continuous at the breakpoints.
double drift(double x, const RatchetParams& p);

/// Invariant density C*exp(-2*gamma*V(x)) of the ratchet diffusion,
/// normalized so one period integrates to 1. The constant is closed-form:
/// the two exponential pieces integrate to (1 - exp(-2*gamma*L)) / (2*gamma).
double invariant_density(double x, const RatchetParams& p);

/// Normalization constant of the invariant density (exposed for tests).
double invariant_density_constant(const RatchetParams& p);

/// Forward probabilities of the refined ratchet walk at refinement n, using
/// rho = 1 - lambda/n: returns (p0, p1) for sites below/above the tooth peak.
/// lambda == 0 gives exactly (1/2, 1/2); lambda >= n is rejected.
std::pair<double, double> ratchet_step_probs(const RatchetParams& p, int n);

}  // namespace ratchetlab
