#include "ratchetlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ratchetlab/errors.hpp"

namespace ratchetlab {

namespace {

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

double kahan_sum(const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace

LatticeDistribution LatticeDistribution::point_mass(std::int64_t site, int n_scale) {
    if (n_scale < 1) throw std::invalid_argument("n_scale must be >= 1");
    LatticeDistribution d;
    d.offset = site;
    d.masses = {1.0};
    d.n_scale = n_scale;
    d.steps_taken = 0;
    return d;
}

double LatticeDistribution::mass_at(std::int64_t site) const {
    if (site < offset || site > max_site()) return 0.0;
    return masses[static_cast<std::size_t>(site - offset)];
}

double LatticeDistribution::total_mass() const { return kahan_sum(masses); }

double LatticeDistribution::mean_position() const {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double x =
            masses[i] * (static_cast<double>(offset + static_cast<std::int64_t>(i)) / n_scale);
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

void LatticeDistribution::trim() {
    std::size_t lo = 0;
    std::size_t hi = masses.size();
    while (lo < hi && masses[lo] == 0.0) ++lo;
    while (hi > lo && masses[hi - 1] == 0.0) --hi;
    if (lo == hi) {
        masses.clear();
        return;
    }
    if (lo > 0 || hi < masses.size()) {
        masses.erase(masses.begin() + static_cast<std::ptrdiff_t>(hi), masses.end());
        masses.erase(masses.begin(), masses.begin() + static_cast<std::ptrdiff_t>(lo));
        offset += static_cast<std::int64_t>(lo);
    }
}

bool LatticeDistribution::single_parity() const {
    int seen = -1;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (masses[i] == 0.0) continue;
        const int par = static_cast<int>(floor_mod(offset + static_cast<std::int64_t>(i), 2));
        if (seen < 0)
            seen = par;
        else if (seen != par)
            return false;
    }
    return true;
}

int compute_m(const Rational& tau1, const Rational& tau2) {
    if (!tau1.positive() || !tau2.positive())
        throw std::invalid_argument("tau1 and tau2 must be positive");
    // tau reduced: den | m^2 * num iff den | m^2.
    const std::int64_t d1 = tau1.den;
    const std::int64_t d2 = tau2.den;
    for (std::int64_t m = 1; m <= 1'000'000; ++m) {
        const std::int64_t mm = m * m;
        if (mm % d1 == 0 && mm % d2 == 0) return static_cast<int>(m);
    }
    throw std::invalid_argument("no admissible m below 10^6; tau denominators too large");
}

FlashingSchedule FlashingSchedule::make(const RatchetParams& params, int n) {
    if (n < 1) throw std::invalid_argument("refinement n must be >= 1");
    FlashingSchedule s;
    s.m = compute_m(params.tau1, params.tau2);
    if (n % s.m != 0)
        throw std::invalid_argument("n must be a multiple of m=" + std::to_string(s.m));
    s.n = n;
    const std::int64_t nn = static_cast<std::int64_t>(n) * n;
    s.steps_off = nn * params.tau1.num / params.tau1.den;
    s.steps_on = nn * params.tau2.num / params.tau2.den;
    if (s.steps_off < 1 || s.steps_on < 1)
        throw std::invalid_argument("phase durations give zero lattice steps");
    return s;
}

namespace {

// -----------------------------------------------------------------------
// Single-step operators (reference implementations; handle any input).
// -----------------------------------------------------------------------

LatticeDistribution step_general(const LatticeDistribution& dist, const double* fwd_table,
                                 const double* bwd_table, std::int64_t table_base, double p_half,
                                 bool symmetric) {
    LatticeDistribution out;
    out.n_scale = dist.n_scale;
    out.steps_taken = dist.steps_taken + 1;
    out.offset = dist.offset - 1;
    out.masses.assign(dist.masses.size() + 2, 0.0);
    auto src = [&](std::int64_t site) -> double { return dist.mass_at(site); };
    for (std::size_t i = 0; i < out.masses.size(); ++i) {
        const std::int64_t site = out.offset + static_cast<std::int64_t>(i);
        if (symmetric) {
            out.masses[i] = p_half * (src(site - 1) + src(site + 1));
        } else {
            const double f = fwd_table[site - 1 - table_base];
            const double b = bwd_table[site + 1 - table_base];
            out.masses[i] = src(site - 1) * f + src(site + 1) * b;
        }
    }
    out.trim();
    return out;
}

}  // namespace

LatticeDistribution step_symmetric(const LatticeDistribution& dist) {
    return step_general(dist, nullptr, nullptr, 0, 0.5, true);
}

LatticeDistribution step_ratchet(const LatticeDistribution& dist, const RatchetParams& params,
                                 int n) {
    if (dist.n_scale != n)
        throw std::invalid_argument("distribution n_scale does not match requested n");
    const auto [p0, p1] = ratchet_step_probs(params, n);
    const std::int64_t N = static_cast<std::int64_t>(params.L_period) * n;
    const std::int64_t ln = static_cast<std::int64_t>(params.l) * n;
    const std::int64_t base = dist.offset - 2;
    const std::size_t len = dist.masses.size() + 4;
    std::vector<double> fwd(len), bwd(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double f = floor_mod(base + static_cast<std::int64_t>(i), N) < ln ? p0 : p1;
        fwd[i] = f;
        bwd[i] = 1.0 - f;
    }
    return step_general(dist, fwd.data(), bwd.data(), base, 0.0, false);
}

namespace {

// -----------------------------------------------------------------------
// Fast evolution kernels.
//
// Compact mode (single-parity input, e.g. any point-mass start): slot t of
// the compact array holds the mass at site lo + 2t, and one step maps to the
// contiguous stencil dst[q] = src[q]*f + src[q+1]*b. The coefficient pair
// (f, b) is piecewise constant along q because the ratchet probabilities have
// period L*n in the site index, so the loop runs in constant-coefficient
// segments.
//
// Full mode (mixed parity): plain windowed stencil over every site with
// precomputed per-site probability tables.
// -----------------------------------------------------------------------

class CompactEvolver {
public:
    CompactEvolver(const LatticeDistribution& init, const RatchetParams& params, int n,
                   std::int64_t total_steps, bool need_ratchet)
        : N_(static_cast<std::int64_t>(params.L_period) * n),
          ln_(static_cast<std::int64_t>(params.l) * n) {
        if (need_ratchet) {
            const auto [p0, p1] = ratchet_step_probs(params, n);
            p0_ = p0;
            p1_ = p1;
        }
        // Compact the input: nonzero cells share parity with the first one.
        std::int64_t first = -1;
        for (std::size_t i = 0; i < init.masses.size(); ++i)
            if (init.masses[i] != 0.0) {
                first = static_cast<std::int64_t>(i);
                break;
            }
        if (first < 0) throw std::invalid_argument("cannot evolve an all-zero distribution");
        lo_site_ = init.offset + first;
        count_ = 0;
        std::vector<double> compact;
        for (std::int64_t i = first; i < static_cast<std::int64_t>(init.masses.size()); i += 2)
            compact.push_back(init.masses[static_cast<std::size_t>(i)]);
        count_ = static_cast<std::int64_t>(compact.size());

        const std::int64_t cap = count_ + total_steps + 3;
        a_.assign(static_cast<std::size_t>(cap), 0.0);
        b_.assign(static_cast<std::size_t>(cap), 0.0);
        base_ = total_steps + 1;
        std::copy(compact.begin(), compact.end(), a_.begin() + static_cast<std::ptrdiff_t>(base_));
        cur_ = &a_;
        nxt_ = &b_;
    }

    void run(FlashingPhase phase, std::int64_t steps) {
        for (std::int64_t k = 0; k < steps; ++k) step(phase);
    }

    // Expands the compact slots back to the full lattice window.
    LatticeDistribution materialize(const LatticeDistribution& init,
                                    std::int64_t steps_done) const {
        LatticeDistribution out;
        out.n_scale = init.n_scale;
        out.steps_taken = init.steps_taken + steps_done;
        out.offset = lo_site_;
        out.masses.assign(static_cast<std::size_t>(2 * count_ - 1), 0.0);
        const double* src = cur_->data() + base_;
        for (std::int64_t t = 0; t < count_; ++t)
            out.masses[static_cast<std::size_t>(2 * t)] = src[t];
        out.trim();
        return out;
    }

private:
    void step(FlashingPhase phase) {
        const double* __restrict src = cur_->data() + base_;
        // dst slot u corresponds to buffer index base_-1+u in the next buffer;
        // writing through dst[q] with q in [-1, count_-1] keeps the stencil
        // contiguous: dst[q] = src[q]*f + src[q+1]*b.
        double* __restrict dst = nxt_->data() + base_;
        const std::int64_t q_begin = -1;
        const std::int64_t q_end = count_;  // exclusive
        if (phase == FlashingPhase::Off || p0_ == 0.5) {
            for (std::int64_t q = q_begin; q < q_end; ++q)
                dst[q] = 0.5 * (src[q] + src[q + 1]);
        } else {
            // site of src[q] is lo_site_ + 2q; factor f applies to src[q]
            // (forward move from site-1), factor b to src[q+1] (backward
            // move from site+1).
            std::int64_t q = q_begin;
            std::int64_t phi = floor_mod(lo_site_ + 2 * q, N_);
            std::int64_t remaining = q_end - q_begin;
            while (remaining > 0) {
                const double f = phi < ln_ ? p0_ : p1_;
                std::int64_t phi2 = phi + 2;
                if (phi2 >= N_) phi2 -= N_;
                const double b = 1.0 - (phi2 < ln_ ? p0_ : p1_);
                const std::int64_t dist1 = phi < ln_ ? ln_ - phi : N_ - phi;
                const std::int64_t dist2 = phi2 < ln_ ? ln_ - phi2 : N_ - phi2;
                std::int64_t len = std::min((dist1 + 1) / 2, (dist2 + 1) / 2);
                len = std::min(len, remaining);
                const std::int64_t stop = q + len;
                for (; q < stop; ++q) dst[q] = src[q] * f + src[q + 1] * b;
                phi += 2 * len;
                while (phi >= N_) phi -= N_;
                remaining -= len;
            }
        }
        base_ -= 1;
        count_ += 1;
        lo_site_ -= 1;
        std::swap(cur_, nxt_);
    }

    std::int64_t N_;
    std::int64_t ln_;
    double p0_ = 0.5;
    double p1_ = 0.5;
    std::vector<double> a_, b_;
    std::vector<double>* cur_ = nullptr;
    std::vector<double>* nxt_ = nullptr;
    std::int64_t base_ = 0;    // buffer index of compact slot 0
    std::int64_t lo_site_ = 0; // site of compact slot 0
    std::int64_t count_ = 0;   // occupied compact slots
};

class FullEvolver {
public:
    FullEvolver(const LatticeDistribution& init, const RatchetParams& params, int n,
                std::int64_t total_steps, bool need_ratchet) {
        const std::int64_t len0 = static_cast<std::int64_t>(init.masses.size());
        const std::int64_t cap = len0 + 2 * total_steps + 5;
        a_.assign(static_cast<std::size_t>(cap), 0.0);
        b_.assign(static_cast<std::size_t>(cap), 0.0);
        lo_ = total_steps + 2;
        hi_ = lo_ + len0 - 1;
        base_site_ = init.offset - lo_;
        std::copy(init.masses.begin(), init.masses.end(),
                  a_.begin() + static_cast<std::ptrdiff_t>(lo_));
        cur_ = &a_;
        nxt_ = &b_;
        if (need_ratchet) {
            const auto [p0, p1] = ratchet_step_probs(params, n);
            const std::int64_t N = static_cast<std::int64_t>(params.L_period) * n;
            const std::int64_t ln = static_cast<std::int64_t>(params.l) * n;
            fwd_.resize(static_cast<std::size_t>(cap));
            bwd_.resize(static_cast<std::size_t>(cap));
            for (std::int64_t i = 0; i < cap; ++i) {
                const double f = floor_mod(base_site_ + i, N) < ln ? p0 : p1;
                fwd_[static_cast<std::size_t>(i)] = f;
                bwd_[static_cast<std::size_t>(i)] = 1.0 - f;
            }
        }
    }

    void run(FlashingPhase phase, std::int64_t steps) {
        for (std::int64_t k = 0; k < steps; ++k) step(phase);
    }

    LatticeDistribution materialize(const LatticeDistribution& init,
                                    std::int64_t steps_done) const {
        LatticeDistribution out;
        out.n_scale = init.n_scale;
        out.steps_taken = init.steps_taken + steps_done;
        out.offset = base_site_ + lo_;
        out.masses.assign(cur_->begin() + static_cast<std::ptrdiff_t>(lo_),
                          cur_->begin() + static_cast<std::ptrdiff_t>(hi_ + 1));
        out.trim();
        return out;
    }

private:
    void step(FlashingPhase phase) {
        const double* __restrict src = cur_->data();
        double* __restrict dst = nxt_->data();
        const std::int64_t lo = lo_ - 1;
        const std::int64_t hi = hi_ + 1;
        if (phase == FlashingPhase::Off || fwd_.empty()) {
            for (std::int64_t i = lo; i <= hi; ++i) dst[i] = 0.5 * (src[i - 1] + src[i + 1]);
        } else {
            const double* __restrict f = fwd_.data();
            const double* __restrict b = bwd_.data();
            for (std::int64_t i = lo; i <= hi; ++i)
                dst[i] = src[i - 1] * f[i - 1] + src[i + 1] * b[i + 1];
        }
        lo_ = lo;
        hi_ = hi;
        std::swap(cur_, nxt_);
    }

    std::vector<double> a_, b_, fwd_, bwd_;
    std::vector<double>* cur_ = nullptr;
    std::vector<double>* nxt_ = nullptr;
    std::int64_t lo_ = 0, hi_ = 0;
    std::int64_t base_site_ = 0;
};

}  // namespace

LatticeDistribution evolve_sequence(const LatticeDistribution& initial,
                                    const RatchetParams& params, int n,
                                    const std::vector<PhaseRun>& runs) {
    if (initial.n_scale != n)
        throw std::invalid_argument("distribution n_scale does not match requested n");
    std::int64_t total = 0;
    bool any_on = false;
    for (const PhaseRun& r : runs) {
        if (r.steps < 0) throw std::invalid_argument("negative step count in phase run");
        total += r.steps;
        if (r.phase == FlashingPhase::On && r.steps > 0) any_on = true;
    }
    if (total == 0) return initial;

    const double mass_in = initial.total_mass();
    LatticeDistribution out;
    if (initial.single_parity()) {
        CompactEvolver ev(initial, params, n, total, any_on);
        for (const PhaseRun& r : runs) ev.run(r.phase, r.steps);
        out = ev.materialize(initial, total);
    } else {
        FullEvolver ev(initial, params, n, total, any_on);
        for (const PhaseRun& r : runs) ev.run(r.phase, r.steps);
        out = ev.materialize(initial, total);
    }
    const double mass_out = out.total_mass();
    if (std::abs(mass_out - mass_in) > 1e-12)
        throw invariant_violation("mass conservation violated during evolution: drift " +
                                  std::to_string(mass_out - mass_in));
    return out;
}

LatticeDistribution evolve_flashing(const LatticeDistribution& initial,
                                    const RatchetParams& params,
                                    const FlashingSchedule& schedule, std::int64_t total_steps) {
    if (total_steps < 0) throw std::invalid_argument("total_steps must be >= 0");
    if (initial.n_scale != schedule.n)
        throw std::invalid_argument("distribution n_scale does not match schedule n");
    if (total_steps == 0) return initial;

    const std::int64_t cycle = schedule.cycle_steps();
    std::vector<PhaseRun> runs;
    std::int64_t clock = initial.steps_taken;
    std::int64_t remaining = total_steps;
    while (remaining > 0) {
        const std::int64_t pos = floor_mod(clock, cycle);
        PhaseRun r;
        if (pos < schedule.steps_off) {
            r.phase = FlashingPhase::Off;
            r.steps = std::min(schedule.steps_off - pos, remaining);
        } else {
            r.phase = FlashingPhase::On;
            r.steps = std::min(cycle - pos, remaining);
        }
        runs.push_back(r);
        clock += r.steps;
        remaining -= r.steps;
    }
    return evolve_sequence(initial, params, schedule.n, runs);
}

std::vector<DensityPoint> rescaled_density(const LatticeDistribution& dist) {
    std::vector<DensityPoint> pts;
    if (dist.masses.empty()) return pts;
    const double n = static_cast<double>(dist.n_scale);
    if (dist.single_parity()) {
        std::int64_t first = 0;
        while (first < static_cast<std::int64_t>(dist.masses.size()) &&
               dist.masses[static_cast<std::size_t>(first)] == 0.0)
            ++first;
        if (first == static_cast<std::int64_t>(dist.masses.size())) return pts;
        for (std::int64_t i = first; i < static_cast<std::int64_t>(dist.masses.size()); i += 2) {
            const std::int64_t site = dist.offset + i;
            pts.push_back({site, static_cast<double>(site) / n,
                           dist.masses[static_cast<std::size_t>(i)] * n / 2.0});
        }
    } else {
        for (std::size_t i = 0; i < dist.masses.size(); ++i) {
            const std::int64_t site = dist.offset + static_cast<std::int64_t>(i);
            pts.push_back({site, static_cast<double>(site) / n, dist.masses[i] * n});
        }
    }
    return pts;
}

}  // namespace ratchetlab
