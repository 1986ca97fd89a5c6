// Reproduction gate: checks every published reference value at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit code is the
// number of failed criteria. Criterion 7's KS clause is kept exactly as
// stated even though its bound sits below the lattice discretization floor
// (max atom / 2 = 0.0261 at n = 100); the failure is expected and documented.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ratchetlab/games.hpp"
#include "ratchetlab/lattice.hpp"
#include "ratchetlab/mc.hpp"
#include "ratchetlab/stationary.hpp"
#include "ratchetlab/stats.hpp"

using namespace ratchetlab;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& summary) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, summary.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

RatchetParams paper_params(double lam = 5.0) {
    return RatchetParams::from_lambda(1, 4, lam, {12, 5}, {12, 5});
}

struct TableRow {
    double key;
    std::array<double, 3> areas;
    std::array<double, 3> heights;
    double mean;
};

const std::vector<TableRow> kTable1{
    {1, {0.0688267, 0.701114, 0.230060}, {0.0627471, 0.566531, 0.121751}, 0.0595931},
    {2, {0.0500629, 0.734941, 0.214996}, {0.0756255, 1.06860, 0.274227}, 0.297582},
    {3, {0.0400379, 0.737033, 0.222929}, {0.0875995, 1.59779, 0.464698}, 0.496585},
    {4, {0.0354116, 0.734036, 0.230552}, {0.1021090, 2.11341, 0.657213}, 0.611651},
    {5, {0.0330104, 0.731102, 0.235888}, {0.117836, 2.60974, 0.839352}, 0.678364},
    {10, {0.0290537, 0.723174, 0.247772}, {0.197900, 4.92657, 1.68412}, 0.809036},
    {15, {0.0279536, 0.719952, 0.252094}, {0.273152, 7.03601, 2.45801}, 0.853220},
    {20, {0.0274363, 0.718221, 0.254343}, {0.342844, 8.97601, 3.17124}, 0.875658},
    {25, {0.0271326, 0.717131, 0.255736}, {0.407788, 10.7794, 3.83499}, 0.889397},
    {50, {0.0264993, 0.714662, 0.258839}, {0.695524, 18.7599, 6.77822}, 0.919557},
};

const std::vector<std::pair<int, double>> kTable2Means{
    {10, 0.791225},  {20, 0.713194},  {30, 0.696690},  {40, 0.689617},  {50, 0.685678},
    {60, 0.683162},  {70, 0.681414},  {80, 0.680129},  {90, 0.679144},  {100, 0.678364},
    {110, 0.677731}, {120, 0.677208}, {130, 0.676768}, {140, 0.676392}, {150, 0.676068},
    {160, 0.675785}, {170, 0.675537}, {180, 0.675316}, {190, 0.675120}, {200, 0.674943},
};

// ------------------------------------------------------------- criterion 1

void criterion_1() {
    const double t0 = now_s();
    std::vector<double> lambdas;
    for (const TableRow& r : kTable1) lambdas.push_back(r.key);
    const RatchetParams base = paper_params();
    const std::vector<SweepRow> rows = lambda_sweep(lambdas, base, 100, 0);

    double worst_mean = 0.0, worst_area = 0.0, worst_height = 0.0;
    bool extras_ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const TableRow& ref = kTable1[i];
        const PeakStats& got = rows[i].stats;
        worst_mean = std::max(worst_mean, std::abs(got.mean - ref.mean));
        for (int k = 0; k < 3; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            worst_area = std::max(worst_area, std::abs(got.areas[kk] - ref.areas[kk]));
            worst_height = std::max(
                worst_height, std::abs(got.heights[kk] - ref.heights[kk]) / ref.heights[kk]);
        }
        // tallest peak dominates the runner-up by at least 3x on the
        // weak-drift rows (the published claim covers lambda = 1..5 only;
        // measured ratios drop below 3 from lambda = 10 on)
        const double ratio =
            got.heights[1] / std::max(got.heights[0], got.heights[2]);
        if (ref.key <= 5.0 && ratio < 3.0) extras_ok = false;
    }

    // weak-drift rows put more mass left of the central minimum than right
    for (double lam : {1.0, 2.0, 3.0, 4.0, 5.0}) {
        const RatchetParams p = paper_params(lam);
        const FlashingSchedule s = FlashingSchedule::make(p, 100);
        const LatticeDistribution d =
            evolve_flashing(LatticeDistribution::point_mass(0, 100), p, s, 48000);
        double left = 0.0, right = 0.0;
        for (std::int64_t site = -299; site < 0; ++site) left += d.mass_at(site);
        for (std::int64_t site = 1; site < 100; ++site) right += d.mass_at(site);
        if (!(left > right)) extras_ok = false;
    }

    // strong drift approaches the normal-curve region masses
    const std::array<double, 3> normal = normal_reference_areas(2.4, base);
    for (int k = 0; k < 3; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        if (std::abs(rows.back().stats.areas[kk] - normal[kk]) >= 2e-3) extras_ok = false;
    }

    const bool pass =
        worst_mean < 1e-6 && worst_area < 2e-4 && worst_height < 1e-3 && extras_ok;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "Table 1 (10 rows, n=100): max |d_mean| %.2e (<1e-6), max |d_area| %.2e "
                  "(<2e-4), max rel |d_height| %.2e (<1e-3), structure checks %s [%.0f s]",
                  worst_mean, worst_area, worst_height, extras_ok ? "ok" : "FAILED",
                  now_s() - t0);
    report(1, pass, buf);
}

// ------------------------------------------------------------- criterion 2

void criterion_2() {
    const double t0 = now_s();
    std::vector<int> ns;
    for (const auto& [n, mean] : kTable2Means) ns.push_back(n);
    const std::vector<SweepRow> rows = n_sweep(ns, paper_params(), 0);
    double worst = 0.0;
    bool monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        worst = std::max(worst, std::abs(rows[i].stats.mean - kTable2Means[i].second));
        if (i > 0 && !(rows[i].stats.mean < rows[i - 1].stats.mean)) monotone = false;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "Table 2 (n=10..200, lambda=5): max |d_mean| %.2e (<1e-6), mean decreasing "
                  "in n: %s [%.0f s]",
                  worst, monotone ? "yes" : "NO", now_s() - t0);
    report(2, worst < 1e-6 && monotone, buf);
}

// --------------------------------------------------------- criteria 3 and 8

void criteria_3_and_8() {
    const double t0 = now_s();
    const RatchetParams p = paper_params();
    const FlashingSchedule s = FlashingSchedule::make(p, 100);

    StationaryOptions opts;
    opts.extra_step = ExtraStepKind::Symmetric;
    StationaryResult r = analyze_stationary(p, s, opts);
    std::string convention = "symmetric";
    double delta = std::abs(r.mubar - 0.684827);
    if (delta >= 1e-5) {
        opts.extra_step = ExtraStepKind::Ratchet;
        const StationaryResult alt = analyze_stationary(p, s, opts);
        if (std::abs(alt.mubar - 0.684827) < delta) {
            r = alt;
            convention = "ratchet";
            delta = std::abs(r.mubar - 0.684827);
        }
    }
    const bool pass3 = delta < 1e-5;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "stationary mean displacement: mubar %.9f vs 0.684827, |d| %.2e (<1e-5), "
                  "extra-step convention %s, matrix 400x400 cycle_steps %lld [%.0f s]%s",
                  r.mubar, delta, convention.c_str(),
                  static_cast<long long>(r.matrix.cycle_steps), now_s() - t0,
                  pass3 || delta < 1e-4 ? "" : " BOTH CONVENTIONS BEYOND 1e-4: DEFECT");
    report(3, pass3, buf);

    // tau-grid gate derived from the same run: rate at the (2.4, 2.4) cell
    const double rate = r.mubar / 4.8;
    char buf2[192];
    std::snprintf(buf2, sizeof buf2,
                  "tau-grid cell (2.4, 2.4): mubar/(tau1+tau2) %.9f vs 0.142672, |d| %.2e "
                  "(<3e-6)",
                  rate, std::abs(rate - 0.142672));
    report(3, std::abs(rate - 0.142672) < 3e-6, buf2);

    // criterion 8: conservation and structure
    const double t8 = now_s();
    const LatticeDistribution d =
        evolve_flashing(LatticeDistribution::point_mass(0, 100), p, s, 48000);
    const double mass_err = std::abs(d.total_mass() - 1.0);

    bool parity_ok = d.single_parity();
    for (std::size_t i = 0; i < d.masses.size(); ++i) {
        const std::int64_t site = d.offset + static_cast<std::int64_t>(i);
        if (((site % 2) + 2) % 2 != 0 && d.masses[i] != 0.0) parity_ok = false;
    }

    const RatchetParams p0 = paper_params(0.0);
    const LatticeDistribution d0 =
        evolve_flashing(LatticeDistribution::point_mass(0, 100), p0, s, 48000);
    const double null_mean = std::abs(d0.mean_position());

    const FlashingSchedule s20 = FlashingSchedule::make(p0, 20);
    const double null_mubar = std::abs(mean_displacement_stationary(p0, s20));

    const bool pass8 = mass_err < 1e-12 && parity_ok && r.residual < 1e-10 &&
                       null_mean < 1e-10 && null_mubar < 1e-10;
    char buf3[320];
    std::snprintf(buf3, sizeof buf3,
                  "conservation/structure: |mass-1| %.2e (<1e-12) after 48000 steps, parity "
                  "%s, stationary residual %.2e (<1e-10), lambda=0 mean %.2e and mubar %.2e "
                  "(<1e-10) [%.0f s]",
                  mass_err, parity_ok ? "exact" : "BROKEN", r.residual, null_mean, null_mubar,
                  now_s() - t8);
    report(8, pass8, buf3);
}

// ------------------------------------------------------------- criterion 4

void criterion_4() {
    const std::array<double, 3> a = normal_reference_areas(2.4, paper_params());
    // 40-digit reference values of the same expressions, and the 6-digit
    // published prints (which sit up to 4.9e-7 from the exact values)
    const std::array<double, 3> exact{0.02640375570805681, 0.71429373607758038,
                                      0.25930250821436281};
    const std::array<double, 3> printed{0.0264038, 0.714294, 0.259303};
    double worst_exact = 0.0, worst_printed = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        worst_exact = std::max(worst_exact, std::abs(a[k] - exact[k]));
        worst_printed = std::max(worst_printed, std::abs(a[k] - printed[k]));
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "normal-curve comparison areas: |d| vs exact %.2e (<1e-7), vs 6-digit "
                  "prints %.2e (<5e-7, print precision)",
                  worst_exact, worst_printed);
    report(4, worst_exact < 1e-7 && worst_printed < 5e-7, buf);
}

// ------------------------------------------------------------- criterion 5

void criterion_5() {
    const double t0 = now_s();
    std::mt19937_64 gen(987654321);
    std::uniform_real_distribution<double> pick_rho(0.05, 0.95);
    std::uniform_int_distribution<int> pick_L(2, 12);
    std::uniform_real_distribution<double> pick_c(0.05, 0.95);

    double worst_b = 0.0;
    bool signs_ok = true;
    int generated = 0;
    while (generated < 1000) {
        const int L = pick_L(gen);
        std::uniform_int_distribution<int> pick_l(1, L - 1);
        const int l = pick_l(gen);
        if (std::gcd(l, L) != 1) continue;
        ++generated;
        const GameBSpec spec = GameBSpec::make(pick_rho(gen), l, L);
        worst_b = std::max(worst_b, std::abs(mean_profit_single(game_b_chain(spec))));
        if (2 * l != L) {
            const double mp = mean_profit_mixture(pick_c(gen), spec);
            if (spec.alpha() < 0.5 ? mp <= 0.0 : mp >= 0.0) signs_ok = false;
        }
    }

    const GameBSpec classical = GameBSpec::make(1.0 / 3.0, 1, 3);
    const double p11 = std::abs(mean_profit_pattern(1, 1, classical));
    const bool patterns_pos = mean_profit_pattern(2, 1, classical) > 0.0 &&
                              mean_profit_pattern(1, 2, classical) > 0.0 &&
                              mean_profit_pattern(2, 2, classical) > 0.0 &&
                              mean_profit_pattern(3, 2, classical) > 0.0;
    const bool pass = worst_b < 1e-12 && signs_ok && p11 < 1e-10 && patterns_pos;
    char buf[300];
    std::snprintf(buf, sizeof buf,
                  "Parrondo suite: 1000 random specs max |B profit| %.2e (<1e-12), mixture "
                  "sign dichotomy %s, |A1B1 profit| %.2e (<1e-10), patterns (2,1),(1,2),(2,2),"
                  "(3,2) positive %s [%.0f s]",
                  worst_b, signs_ok ? "ok" : "FAILED", p11, patterns_pos ? "yes" : "NO",
                  now_s() - t0);
    report(5, pass, buf);
}

// ------------------------------------------------------------- criterion 6

void criterion_6() {
    // 2^10-path enumeration vs the evolver
    const RatchetParams p = RatchetParams::from_lambda(1, 3, 0.5, {1, 1}, {1, 1});
    const FlashingSchedule s = FlashingSchedule::make(p, 1);
    const auto [p0, p1] = ratchet_step_probs(p, 1);

    std::map<std::int64_t, double> law;
    const int steps = 10;
    for (std::uint32_t bits = 0; bits < (1u << steps); ++bits) {
        std::int64_t pos = 0;
        double prob = 1.0;
        for (int k = 0; k < steps; ++k) {
            const bool up = (bits >> k) & 1u;
            double fwd = 0.5;
            if (k % 2 == 1) {  // second step of each two-step cycle is the ratchet
                std::int64_t r = pos % 3;
                if (r < 0) r += 3;
                fwd = r < 1 ? p0 : p1;
            }
            prob *= up ? fwd : 1.0 - fwd;
            pos += up ? 1 : -1;
        }
        law[pos] += prob;
    }
    const LatticeDistribution walked =
        evolve_flashing(LatticeDistribution::point_mass(0, 1), p, s, steps);
    double worst_path = 0.0;
    for (std::int64_t site = walked.min_site(); site <= walked.max_site(); ++site) {
        const double want = law.count(site) ? law.at(site) : 0.0;
        worst_path = std::max(worst_path, std::abs(walked.mass_at(site) - want));
    }

    // wrapped cycle matrix vs the direct two-step product
    const WrappedCycleMatrix m = build_wrapped_matrix(p, s);
    double worst_mat = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double prod = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double a_ik = (k == (i + 1) % 3 || k == (i + 2) % 3) ? 0.5 : 0.0;
                const double f = k < 1 ? p0 : p1;
                double b_kj = 0.0;
                if (j == (k + 1) % 3) b_kj += f;
                if (j == (k + 2) % 3) b_kj += 1.0 - f;
                prod += a_ik * b_kj;
            }
            worst_mat = std::max(worst_mat, std::abs(m.entry(i, j) - prod));
        }

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "oracle equivalence: 2^10-path enumeration max |d| %.2e (<1e-14), wrapped "
                  "matrix vs direct product max |d| %.2e (<1e-14)",
                  worst_path, worst_mat);
    report(6, worst_path < 1e-14 && worst_mat < 1e-14, buf);
}

// ------------------------------------------------------------- criterion 7

void criterion_7() {
    const double t0 = now_s();
    const RatchetParams p = paper_params();
    const FlashingSchedule s = FlashingSchedule::make(p, 100);
    const LatticeDistribution exact =
        evolve_flashing(LatticeDistribution::point_mass(0, 100), p, s, 48000);

    McConfig cfg;
    cfg.paths = 100000;
    cfg.dt = 1e-4;
    cfg.seed = 20250808;
    const std::vector<double> ys = simulate_flashing(p, cfg, 4.8, 0.0);
    double mean = 0.0;
    for (double y : ys) mean += y;
    mean /= static_cast<double>(ys.size());
    const double ks = ks_distance(ys, exact);

    double max_atom = 0.0;
    for (double m : exact.masses) max_atom = std::max(max_atom, m);

    const bool mean_ok = std::abs(mean - 0.678364) < 0.02;
    const bool ks_ok = ks < 0.02;
    char buf[384];
    std::snprintf(buf, sizeof buf,
                  "Monte Carlo cross-check (1e5 paths, dt=1e-4): |mc_mean - 0.678364| = %.4f "
                  "(<0.02: %s); KS vs n=100 lattice = %.4f (<0.02: %s; unattainable as "
                  "stated: any atomless sample law has KS >= max_atom/2 = %.4f against this "
                  "staircase, see decisions ledger) [%.0f s]",
                  std::abs(mean - 0.678364), mean_ok ? "yes" : "NO", ks, ks_ok ? "yes" : "NO",
                  max_atom / 2.0, now_s() - t0);
    report(7, mean_ok && ks_ok, buf);
}

}  // namespace

int main() {
    std::printf("ratchetlab acceptance suite\n");
    const double t0 = now_s();
    criterion_1();
    criterion_2();
    criteria_3_and_8();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    std::printf("total %.0f s; %d criterion check(s) failed\n", now_s() - t0, g_failures);
    return g_failures;
}
