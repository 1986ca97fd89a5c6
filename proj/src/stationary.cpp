#include "ratchetlab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ratchetlab/errors.hpp"
#include "ratchetlab/games.hpp"
#include "ratchetlab/parallel.hpp"

namespace ratchetlab {

namespace {

// One step of the wrapped walk on Z_N. Writes only sites of parity
// `target_parity` (or all sites when < 0); the source is read only at the
// complementary sites, so a ping-pong buffer pair needs no clearing.
void wrapped_step(const double* src, double* dst, int N, const double* fwd, const double* bwd,
                  int target_parity) {
    auto val = [&](int jm, int jp) { return src[jm] * fwd[jm] + src[jp] * bwd[jp]; };
    if (target_parity < 0) {
        dst[0] = val(N - 1, 1);
        for (int j = 1; j < N - 1; ++j) dst[j] = val(j - 1, j + 1);
        dst[N - 1] = val(N - 2, 0);
    } else {
        if (target_parity == 0) dst[0] = val(N - 1, 1);
        for (int j = target_parity == 0 ? 2 : 1; j < N - 1; j += 2) dst[j] = val(j - 1, j + 1);
        if ((N - 1) % 2 == target_parity) dst[N - 1] = val(N - 2, 0);
    }
}

struct WrappedTables {
    std::vector<double> fwd_ratchet, bwd_ratchet;
    std::vector<double> fwd_half, bwd_half;
    int N = 0;

    WrappedTables(const RatchetParams& params, const FlashingSchedule& schedule) {
        N = params.L_period * schedule.n;
        const auto [p0, p1] = ratchet_step_probs(params, schedule.n);
        const int ln = params.l * schedule.n;
        fwd_ratchet.resize(static_cast<std::size_t>(N));
        bwd_ratchet.resize(static_cast<std::size_t>(N));
        for (int j = 0; j < N; ++j) {
            const double f = j < ln ? p0 : p1;
            fwd_ratchet[static_cast<std::size_t>(j)] = f;
            bwd_ratchet[static_cast<std::size_t>(j)] = 1.0 - f;
        }
        fwd_half.assign(static_cast<std::size_t>(N), 0.5);
        bwd_half.assign(static_cast<std::size_t>(N), 0.5);
    }
};

// Evolves a wrapped law in place through one full cycle (plus the appended
// step, if any). `parity` is the parity of the occupied class for point
// starts on an even cycle, or -1 for general laws.
void wrapped_cycle(std::vector<double>& cur, std::vector<double>& tmp, const WrappedTables& t,
                   const FlashingSchedule& schedule, ExtraStepKind extra, int parity) {
    const int N = t.N;
    auto run = [&](std::int64_t steps, bool ratchet) {
        const double* fwd = ratchet ? t.fwd_ratchet.data() : t.fwd_half.data();
        const double* bwd = ratchet ? t.bwd_ratchet.data() : t.bwd_half.data();
        for (std::int64_t k = 0; k < steps; ++k) {
            if (parity >= 0) parity ^= 1;
            wrapped_step(cur.data(), tmp.data(), N, fwd, bwd, parity);
            cur.swap(tmp);
        }
    };
    run(schedule.steps_off, false);
    run(schedule.steps_on, true);
    if (extra == ExtraStepKind::Symmetric) run(1, false);
    if (extra == ExtraStepKind::Ratchet) run(1, true);
}

void check_irreducible(const WrappedCycleMatrix& m) {
    const int N = m.size;
    auto reach = [&](bool transpose) {
        std::vector<char> seen(static_cast<std::size_t>(N), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < N; ++j) {
                const double e = transpose ? m.entry(j, i) : m.entry(i, j);
                if (e > 0.0 && !seen[static_cast<std::size_t>(j)]) {
                    seen[static_cast<std::size_t>(j)] = 1;
                    ++count;
                    stack.push_back(j);
                }
            }
        }
        return count == N;
    };
    if (!reach(false) || !reach(true))
        throw invariant_violation("wrapped cycle matrix is not irreducible");
}

}  // namespace

bool needs_parity_fix(const RatchetParams& params, const FlashingSchedule& schedule) {
    const std::int64_t N = static_cast<std::int64_t>(params.L_period) * schedule.n;
    return N % 2 == 0 && schedule.cycle_steps() % 2 == 0;
}

WrappedCycleMatrix build_wrapped_matrix(const RatchetParams& params,
                                        const FlashingSchedule& schedule,
                                        const StationaryOptions& opts) {
    const int N = params.L_period * schedule.n;
    WrappedCycleMatrix m;
    m.size = N;
    m.extra = needs_parity_fix(params, schedule) ? opts.extra_step : ExtraStepKind::None;
    if (m.extra == ExtraStepKind::None && needs_parity_fix(params, schedule))
        throw std::invalid_argument("this schedule needs a parity step; choose a kind");
    m.cycle_steps = schedule.cycle_steps() + (m.extra == ExtraStepKind::None ? 0 : 1);
    m.rows.assign(static_cast<std::size_t>(N) * N, 0.0);

    const WrappedTables tables(params, schedule);
    const bool even = N % 2 == 0;
    parallel_for(static_cast<std::size_t>(N), resolve_threads(opts.threads), [&](std::size_t i) {
        std::vector<double> cur(static_cast<std::size_t>(N), 0.0);
        std::vector<double> tmp(static_cast<std::size_t>(N), 0.0);
        cur[i] = 1.0;
        const int parity = even ? static_cast<int>(i % 2) : -1;
        wrapped_cycle(cur, tmp, tables, schedule, m.extra, parity);
        if (even) {
            // the ping-pong pair leaves stale values on the vacated parity
            const int final_parity =
                static_cast<int>((static_cast<std::int64_t>(i) + m.cycle_steps) % 2);
            for (int j = final_parity ^ 1; j < N; j += 2) cur[static_cast<std::size_t>(j)] = 0.0;
        }
        std::copy(cur.begin(), cur.end(), m.rows.begin() + static_cast<std::ptrdiff_t>(i) * N);
    });

    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += m.entry(i, j);
        if (std::abs(s - 1.0) > 1e-10)
            throw invariant_violation("wrapped matrix row " + std::to_string(i) +
                                      " sums to " + std::to_string(s));
    }
    check_irreducible(m);
    return m;
}

namespace {

std::vector<double> multiply_left(const std::vector<double>& nu, const WrappedCycleMatrix& m) {
    const int N = m.size;
    std::vector<double> out(static_cast<std::size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
        const double w = nu[static_cast<std::size_t>(i)];
        if (w == 0.0) continue;
        const double* row = &m.rows[static_cast<std::size_t>(i) * N];
        double* o = out.data();
        for (int j = 0; j < N; ++j) o[j] += w * row[j];
    }
    return out;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void normalize(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
}

}  // namespace

double stationary_residual(const WrappedCycleMatrix& mat, const std::vector<double>& nu) {
    return sup_diff(multiply_left(nu, mat), nu);
}

std::vector<double> stationary_distribution(const WrappedCycleMatrix& mat,
                                            const std::vector<double>* start) {
    const int N = mat.size;
    constexpr double kIterTol = 1e-13;
    constexpr double kResidualTol = 1e-10;
    constexpr std::int64_t kMaxIter = 1'000'000;

    std::vector<double> nu;
    if (start) {
        if (static_cast<int>(start->size()) != N)
            throw std::invalid_argument("start vector has wrong length");
        nu = *start;
        normalize(nu);
    } else {
        nu.assign(static_cast<std::size_t>(N), 1.0 / N);
    }

    std::vector<double> prev;
    for (std::int64_t it = 0; it < kMaxIter; ++it) {
        std::vector<double> next = multiply_left(nu, mat);
        if (sup_diff(next, nu) < kIterTol) {
            nu = std::move(next);
            break;
        }
        // 2-periodic chains oscillate between parity classes; the average of
        // two successive iterates is then the stationary law.
        if (!prev.empty() && sup_diff(next, prev) < kIterTol) {
            for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = 0.5 * (nu[i] + next[i]);
            normalize(nu);
            break;
        }
        prev = std::move(nu);
        nu = std::move(next);
    }
    normalize(nu);

    if (stationary_residual(mat, nu) > kResidualTol) {
        // direct solve fallback
        nu = stationary_dense(mat.rows, N);
        for (double& x : nu)
            if (x < 0.0) {
                if (x < -1e-12)
                    throw invariant_violation("stationary solve produced a negative mass");
                x = 0.0;
            }
        normalize(nu);
        const double r = stationary_residual(mat, nu);
        if (r > kResidualTol)
            throw invariant_violation("stationary distribution residual " + std::to_string(r) +
                                      " exceeds 1e-10 (chain reducible or ill-conditioned)");
    }
    return nu;
}

LatticeDistribution recenter(const std::vector<double>& pibar, const RatchetParams& params,
                             int n) {
    const int N = params.L_period * n;
    if (static_cast<int>(pibar.size()) != N)
        throw std::invalid_argument("pibar length must be L*n");
    const int ln = params.l * n;
    LatticeDistribution out;
    out.n_scale = n;
    out.offset = -static_cast<std::int64_t>(N - ln);
    out.masses.assign(static_cast<std::size_t>(N), 0.0);
    for (int w = 0; w < N; ++w) {
        const int idx = w < ln ? (N - ln) + w : w - ln;
        out.masses[static_cast<std::size_t>(idx)] = pibar[static_cast<std::size_t>(w)];
    }
    return out;
}

StationaryResult analyze_stationary(const RatchetParams& params, const FlashingSchedule& schedule,
                                    const StationaryOptions& opts) {
    StationaryResult r;
    r.matrix = build_wrapped_matrix(params, schedule, opts);
    r.pibar = stationary_distribution(r.matrix);
    r.residual = stationary_residual(r.matrix, r.pibar);
    r.pibar_recentered = recenter(r.pibar, params, schedule.n);

    std::vector<PhaseRun> runs{{FlashingPhase::Off, schedule.steps_off},
                               {FlashingPhase::On, schedule.steps_on}};
    if (r.matrix.extra == ExtraStepKind::Symmetric) runs.push_back({FlashingPhase::Off, 1});
    if (r.matrix.extra == ExtraStepKind::Ratchet) runs.push_back({FlashingPhase::On, 1});
    const LatticeDistribution end =
        evolve_sequence(r.pibar_recentered, params, schedule.n, runs);
    r.mubar = end.mean_position() - r.pibar_recentered.mean_position();
    return r;
}

double mean_displacement_stationary(const RatchetParams& params, const FlashingSchedule& schedule,
                                    const StationaryOptions& opts) {
    return analyze_stationary(params, schedule, opts).mubar;
}

double mean_displacement_tracked(const RatchetParams& params, const FlashingSchedule& schedule,
                                 const std::vector<double>& pibar, ExtraStepKind extra) {
    const WrappedTables t(params, schedule);
    const int N = t.N;
    if (static_cast<int>(pibar.size()) != N)
        throw std::invalid_argument("pibar length must be L*n");
    std::vector<double> cur = pibar;
    std::vector<double> tmp(static_cast<std::size_t>(N), 0.0);
    double total = 0.0;
    auto run = [&](std::int64_t steps, bool ratchet) {
        const double* fwd = ratchet ? t.fwd_ratchet.data() : t.fwd_half.data();
        const double* bwd = ratchet ? t.bwd_ratchet.data() : t.bwd_half.data();
        for (std::int64_t k = 0; k < steps; ++k) {
            if (ratchet) {
                double inc = 0.0;
                for (int j = 0; j < N; ++j)
                    inc += cur[static_cast<std::size_t>(j)] * (2.0 * fwd[j] - 1.0);
                total += inc;
            }
            wrapped_step(cur.data(), tmp.data(), N, fwd, bwd, -1);
            cur.swap(tmp);
        }
    };
    run(schedule.steps_off, false);
    run(schedule.steps_on, true);
    if (extra == ExtraStepKind::Symmetric) run(1, false);
    if (extra == ExtraStepKind::Ratchet) run(1, true);
    return total / schedule.n;  // steps move one site; displacement is site/n
}

}  // namespace ratchetlab
