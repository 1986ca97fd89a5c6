#include "ratchetlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ratchetlab/parallel.hpp"
#include "ratchetlab/stationary.hpp"

namespace ratchetlab {

std::pair<double, double> peak_partition_boundaries(const RatchetParams& params) {
    return {static_cast<double>(params.l - params.L_period), static_cast<double>(params.l)};
}

namespace {

struct KahanAcc {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

}  // namespace

PeakStats peak_stats(const LatticeDistribution& dist, const RatchetParams& params) {
    PeakStats ps;
    const std::int64_t n = dist.n_scale;
    // Boundaries are the integers l-L and l, so the boundary sites are exact.
    const std::int64_t bl = static_cast<std::int64_t>(params.l - params.L_period) * n;
    const std::int64_t br = static_cast<std::int64_t>(params.l) * n;

    KahanAcc area[3];
    for (std::size_t i = 0; i < dist.masses.size(); ++i) {
        const double m = dist.masses[i];
        if (m == 0.0) continue;
        const std::int64_t site = dist.offset + static_cast<std::int64_t>(i);
        area[site < bl ? 0 : (site < br ? 1 : 2)].add(m);
    }
    for (int r = 0; r < 3; ++r) ps.areas[static_cast<std::size_t>(r)] = area[r].s;

    // Peak heights are read off at the potential minima -L, 0, L. For weak
    // drift the density mode sits one node left of a minimum, so a region
    // maximum would overshoot the published peak heights.
    const bool single = dist.single_parity();
    const double scale = single ? n / 2.0 : static_cast<double>(n);
    std::int64_t parity = -1;
    if (single) {
        for (std::size_t i = 0; i < dist.masses.size(); ++i)
            if (dist.masses[i] != 0.0) {
                parity = ((dist.offset + static_cast<std::int64_t>(i)) % 2 + 2) % 2;
                break;
            }
    }
    auto interpolated_density = [&](std::int64_t site) {
        if (!single || ((site % 2 + 2) % 2) == parity) return dist.mass_at(site) * scale;
        return 0.5 * (dist.mass_at(site - 1) + dist.mass_at(site + 1)) * scale;
    };
    const std::int64_t Ln = static_cast<std::int64_t>(params.L_period) * n;
    ps.heights = {interpolated_density(-Ln), interpolated_density(0), interpolated_density(Ln)};
    ps.mean = dist.mean_position();
    return ps;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::array<double, 3> normal_reference_areas(double tau1, const RatchetParams& params) {
    if (!(tau1 > 0.0)) throw std::invalid_argument("tau1 must be positive");
    const double sigma = std::sqrt(tau1);
    const auto [bl, br] = peak_partition_boundaries(params);
    const double lo = normal_cdf(bl / sigma);
    const double hi = normal_cdf(br / sigma);
    return {lo, hi - lo, 1.0 - hi};
}

namespace {

PeakStats run_cell(const RatchetParams& params, int n) {
    const FlashingSchedule schedule = FlashingSchedule::make(params, n);
    const LatticeDistribution start = LatticeDistribution::point_mass(0, n);
    const LatticeDistribution end =
        evolve_flashing(start, params, schedule, schedule.cycle_steps());
    return peak_stats(end, params);
}

}  // namespace

std::vector<SweepRow> lambda_sweep(const std::vector<double>& lambdas, const RatchetParams& base,
                                   int n, int threads) {
    std::vector<SweepRow> rows(lambdas.size());
    parallel_for(lambdas.size(), resolve_threads(threads), [&](std::size_t i) {
        const RatchetParams p =
            RatchetParams::from_lambda(base.l, base.L_period, lambdas[i], base.tau1, base.tau2);
        rows[i] = {lambdas[i], run_cell(p, n)};
    });
    return rows;
}

std::vector<SweepRow> n_sweep(const std::vector<int>& ns, const RatchetParams& base,
                              int threads) {
    // validate up front so a bad n fails before any heavy work
    for (int n : ns) FlashingSchedule::make(base, n);
    std::vector<SweepRow> rows(ns.size());
    parallel_for(ns.size(), resolve_threads(threads), [&](std::size_t i) {
        rows[i] = {static_cast<double>(ns[i]), run_cell(base, ns[i])};
    });
    return rows;
}

TauSweepResult optimize_tau(const RatchetParams& base,
                            const std::vector<std::pair<Rational, Rational>>& grid, int n_floor,
                            int max_n, int threads) {
    if (grid.empty()) throw std::invalid_argument("tau grid is empty");
    if (n_floor < 1) throw std::invalid_argument("n_floor must be >= 1");
    TauSweepResult result;
    result.cells.resize(grid.size());
    parallel_for(grid.size(), resolve_threads(threads), [&](std::size_t i) {
        TauCell& cell = result.cells[i];
        cell.tau1 = grid[i].first;
        cell.tau2 = grid[i].second;
        const RatchetParams p =
            RatchetParams::from_lambda(base.l, base.L_period, base.lam, cell.tau1, cell.tau2);
        cell.m = compute_m(cell.tau1, cell.tau2);
        const int k = (n_floor + cell.m - 1) / cell.m;
        cell.n_used = k * cell.m;
        if (max_n > 0 && cell.n_used > max_n) return;  // over budget, flagged unevaluated
        const FlashingSchedule schedule = FlashingSchedule::make(p, cell.n_used);
        cell.mubar = mean_displacement_stationary(p, schedule, {ExtraStepKind::Symmetric, 1});
        cell.rate = cell.mubar / (cell.tau1 + cell.tau2).value();
        cell.evaluated = true;
    });
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const TauCell& c = result.cells[i];
        if (!c.evaluated) continue;
        if (result.best_index < 0) {
            result.best_index = static_cast<int>(i);
            continue;
        }
        const TauCell& b = result.cells[static_cast<std::size_t>(result.best_index)];
        const Rational span_c = c.tau1 + c.tau2;
        const Rational span_b = b.tau1 + b.tau2;
        const bool better = c.rate > b.rate ||
                            (c.rate == b.rate && span_c.value() < span_b.value());
        if (better) result.best_index = static_cast<int>(i);
    }
    return result;
}

}  // namespace ratchetlab
