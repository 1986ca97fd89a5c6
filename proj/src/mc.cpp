#include "ratchetlab/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ratchetlab/parallel.hpp"

namespace ratchetlab {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++, seeded per path through splitmix64 so streams are a pure
// function of (seed, path_index).
struct Xoshiro256pp {
    std::uint64_t s[4];

    Xoshiro256pp(std::uint64_t seed, std::uint64_t path) {
        std::uint64_t sm = seed ^ (path * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL);
        for (auto& word : s) word = splitmix64(sm);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Box-Muller, both values used.
struct NormalSource {
    Xoshiro256pp rng;
    double spare = 0.0;
    bool has_spare = false;

    explicit NormalSource(Xoshiro256pp r) : rng(r) {}

    double next() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double u1 = 1.0 - rng.uniform();  // (0, 1], keeps log finite
        const double u2 = rng.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare = r * std::sin(a);
        has_spare = true;
        return r * std::cos(a);
    }
};

void validate(const RatchetParams& params, const McConfig& cfg, double t_end) {
    if (cfg.paths < 1) throw std::invalid_argument("paths must be >= 1");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const double tau_min = std::min(params.tau1.value(), params.tau2.value());
    if (cfg.dt > tau_min / 100.0)
        throw std::invalid_argument("dt must be <= min(tau1, tau2)/100");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
}

std::vector<double> simulate(const RatchetParams& params, const McConfig& cfg, double t_end,
                             double y0, bool flashing) {
    validate(params, cfg, t_end);
    const std::int64_t steps = std::llround(t_end / cfg.dt);
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double L = static_cast<double>(params.L_period);
    const double peak = params.alpha * L;
    const double drift_left_dt = -params.gamma / params.alpha * cfg.dt;
    const double drift_right_dt = params.gamma / (1.0 - params.alpha) * cfg.dt;
    const double tau1 = params.tau1.value();
    const double tau2 = params.tau2.value();

    std::vector<double> out(static_cast<std::size_t>(cfg.paths));
    parallel_for(static_cast<std::size_t>(cfg.paths), resolve_threads(cfg.threads),
                 [&](std::size_t p) {
                     NormalSource normal(Xoshiro256pp(cfg.seed, p));
                     double y = y0;
                     bool on = !flashing;
                     double next_switch = tau1;
                     for (std::int64_t k = 0; k < steps; ++k) {
                         if (flashing) {
                             const double t = static_cast<double>(k) * cfg.dt;
                             while (t >= next_switch) {
                                 on = !on;
                                 next_switch += on ? tau2 : tau1;
                             }
                         }
                         if (on) {
                             const double r = y - L * std::floor(y / L);
                             y += r < peak ? drift_left_dt : drift_right_dt;
                         }
                         y += sqrt_dt * normal.next();
                     }
                     if (cfg.wrap) {
                         y -= L * std::floor(y / L);
                         if (y >= L) y -= L;
                     }
                     out[p] = y;
                 });
    return out;
}

}  // namespace

std::vector<double> simulate_flashing(const RatchetParams& params, const McConfig& cfg,
                                      double t_end, double y0) {
    return simulate(params, cfg, t_end, y0, true);
}

std::vector<double> simulate_ratchet(const RatchetParams& params, const McConfig& cfg,
                                     double t_end, double y0) {
    return simulate(params, cfg, t_end, y0, false);
}

double ks_distance(const std::vector<double>& samples, const LatticeDistribution& dist) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample set");
    if (dist.masses.empty()) throw std::invalid_argument("ks_distance: empty distribution");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double total = dist.total_mass();
    const double ns = static_cast<double>(sorted.size());

    double d = 0.0;
    double cum = 0.0;
    for (std::size_t i = 0; i < dist.masses.size(); ++i) {
        const double m = dist.masses[i];
        if (m == 0.0) continue;
        const double x =
            static_cast<double>(dist.offset + static_cast<std::int64_t>(i)) / dist.n_scale;
        const double cum_before = cum / total;
        cum += m;
        const double cum_after = cum / total;
        const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x);
        const auto hi = std::upper_bound(sorted.begin(), sorted.end(), x);
        const double e_before = static_cast<double>(lo - sorted.begin()) / ns;
        const double e_at = static_cast<double>(hi - sorted.begin()) / ns;
        d = std::max(d, std::abs(e_before - cum_before));
        d = std::max(d, std::abs(e_at - cum_after));
    }
    return d;
}

std::vector<HistogramBin> histogram(const std::vector<double>& samples, double lo, double hi,
                                    int bins) {
    if (bins < 1 || !(hi > lo)) throw std::invalid_argument("bad histogram shape");
    std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
    const double w = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b)
        out[static_cast<std::size_t>(b)] = {lo + b * w, lo + (b + 1) * w, 0};
    for (double s : samples) {
        if (s < lo || s >= hi) continue;
        auto b = static_cast<std::size_t>((s - lo) / w);
        if (b >= out.size()) b = out.size() - 1;
        ++out[b].count;
    }
    return out;
}

}  // namespace ratchetlab
