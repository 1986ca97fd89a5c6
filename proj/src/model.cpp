#include "ratchetlab/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ratchetlab {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string ns = text.substr(0, slash);
        const std::string ds = text.substr(slash + 1);
        std::size_t used = 0;
        const std::int64_t n = std::stoll(ns, &used);
        if (used != ns.size()) throw std::invalid_argument("bad rational numerator: " + text);
        const std::int64_t d = std::stoll(ds, &used);
        if (used != ds.size()) throw std::invalid_argument("bad rational denominator: " + text);
        return {n, d};
    }
    // Decimal literal: split on '.', scale by a power of ten. No exponents.
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_dot = false;
    bool seen_digit = false;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("bad decimal literal: " + text);
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9')
            throw std::invalid_argument("bad rational/decimal literal: " + text);
        seen_digit = true;
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
        if (num < 0 || den < 0) throw std::invalid_argument("rational literal overflow: " + text);
    }
    if (!seen_digit) throw std::invalid_argument("bad rational/decimal literal: " + text);
    return {negative ? -num : num, den};
}

namespace {

void validate_shape(int l, int L_period, const Rational& tau1, const Rational& tau2) {
    if (l < 1 || L_period < 2 || l >= L_period)
        throw std::invalid_argument("require 0 < l < L for alpha = l/L in (0,1)");
    if (std::gcd(l, L_period) != 1)
        throw std::invalid_argument("l and L must be coprime");
    if (!tau1.positive() || !tau2.positive())
        throw std::invalid_argument("tau1 and tau2 must be positive");
}

}  // namespace

RatchetParams RatchetParams::from_lambda(int l, int L_period, double lam, Rational tau1,
                                         Rational tau2) {
    validate_shape(l, L_period, tau1, tau2);
    if (!(lam >= 0.0) || !std::isfinite(lam))
        throw std::invalid_argument("lambda must be finite and >= 0");
    RatchetParams p;
    p.l = l;
    p.L_period = L_period;
    p.alpha = static_cast<double>(l) / L_period;
    p.lam = lam;
    p.gamma = lam * (1.0 - p.alpha) / 2.0;
    p.tau1 = tau1;
    p.tau2 = tau2;
    return p;
}

RatchetParams RatchetParams::from_gamma(int l, int L_period, double gamma, Rational tau1,
                                        Rational tau2) {
    validate_shape(l, L_period, tau1, tau2);
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma must be finite and >= 0");
    const double alpha = static_cast<double>(l) / L_period;
    return from_lambda(l, L_period, 2.0 * gamma / (1.0 - alpha), tau1, tau2);
}

FlashingPhase phase_at(double t, const RatchetParams& p) {
    const double period = p.tau1.value() + p.tau2.value();
    double r = std::fmod(t, period);
    if (r < 0) r += period;
    return r < p.tau1.value() ? FlashingPhase::Off : FlashingPhase::On;
}

namespace {

// Reduce x mod L to [0, L); exact multiples of L map to 0.
inline double reduce_period(double x, double L) {
    double r = x - L * std::floor(x / L);
    if (r >= L) r -= L;  // guards the r == L rounding case
    return r;
}

}  // namespace

double sawtooth_potential(double x, const RatchetParams& p) {
    const double L = static_cast<double>(p.L_period);
    const double r = reduce_period(x, L);
    const double peak = p.alpha * L;
    return r <= peak ? r / p.alpha : (L - r) / (1.0 - p.alpha);
}

double drift(double x, const RatchetParams& p) {
    const double L = static_cast<double>(p.L_period);
    const double r = reduce_period(x, L);
    const double peak = p.alpha * L;
    return r < peak ? -p.gamma / p.alpha : p.gamma / (1.0 - p.alpha);
}

double invariant_density_constant(const RatchetParams& p) {
    const double L = static_cast<double>(p.L_period);
    if (p.gamma == 0.0) return 1.0 / L;  // flat potential: uniform density
    return 2.0 * p.gamma / (1.0 - std::exp(-2.0 * p.gamma * L));
}

double invariant_density(double x, const RatchetParams& p) {
    return invariant_density_constant(p) * std::exp(-2.0 * p.gamma * sawtooth_potential(x, p));
}

std::pair<double, double> ratchet_step_probs(const RatchetParams& p, int n) {
    if (n < 1) throw std::invalid_argument("refinement n must be >= 1");
    if (!(p.lam < n))
        throw std::invalid_argument(
            "lambda must be < n so that rho = 1 - lambda/n stays positive");
    const double rho = 1.0 - p.lam / n;
    const double w = std::pow(rho, (1.0 - p.alpha) / p.alpha);
    return {w / (1.0 + w), 1.0 / (1.0 + rho)};
}

}  // namespace ratchetlab
