#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ratchetlab/errors.hpp"
#include "ratchetlab/games.hpp"
#include "ratchetlab/stationary.hpp"

using namespace ratchetlab;

namespace {

RatchetParams paper_params(double lam = 5.0) {
    return RatchetParams::from_lambda(1, 4, lam, {12, 5}, {12, 5});
}

bool is_unimodal(const std::vector<double>& v) {
    bool falling = false;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1]) {
            if (falling) return false;
        } else if (v[i] < v[i - 1]) {
            falling = true;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("parity fix detection and cycle step counts") {
    // L*n = 400 even, cycle 48000 even: one step appended
    const RatchetParams p = paper_params();
    const FlashingSchedule s100 = FlashingSchedule::make(p, 100);
    CHECK(needs_parity_fix(p, s100));

    // L*n = 3 odd: no fix regardless of the cycle length
    const RatchetParams tiny = RatchetParams::from_lambda(1, 3, 0.5, {1, 1}, {1, 1});
    const FlashingSchedule s1 = FlashingSchedule::make(tiny, 1);
    CHECK_FALSE(needs_parity_fix(tiny, s1));

    // L*n even but an odd cycle is already irreducible
    const RatchetParams odd = RatchetParams::from_lambda(1, 4, 0.5, {1, 1}, {2, 1});
    const FlashingSchedule s_odd = FlashingSchedule::make(odd, 1);
    CHECK(s_odd.cycle_steps() == 3);
    CHECK_FALSE(needs_parity_fix(odd, s_odd));
}

TEST_CASE("wrapped matrix at n = 1 equals the direct two-step product") {
    const RatchetParams p = RatchetParams::from_lambda(1, 3, 0.5, {1, 1}, {1, 1});
    const FlashingSchedule s = FlashingSchedule::make(p, 1);
    const WrappedCycleMatrix m = build_wrapped_matrix(p, s);
    CHECK(m.size == 3);
    CHECK(m.cycle_steps == 2);
    CHECK(m.extra == ExtraStepKind::None);

    // one symmetric step then one game-B step, multiplied by hand on Z_3
    const auto [p0, p1] = ratchet_step_probs(p, 1);
    double a[3][3] = {};
    double b[3][3] = {};
    for (int j = 0; j < 3; ++j) {
        a[j][(j + 1) % 3] = 0.5;
        a[j][(j + 2) % 3] = 0.5;
        const double f = j < 1 ? p0 : p1;
        b[j][(j + 1) % 3] = f;
        b[j][(j + 2) % 3] = 1.0 - f;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double prod = 0.0;
            for (int k = 0; k < 3; ++k) prod += a[i][k] * b[k][j];
            CHECK(m.entry(i, j) == doctest::Approx(prod).epsilon(1e-14));
        }
}

TEST_CASE("rows are stochastic and the chain is irreducible") {
    const RatchetParams p = paper_params();
    const FlashingSchedule s = FlashingSchedule::make(p, 10);
    const WrappedCycleMatrix m = build_wrapped_matrix(p, s);
    CHECK(m.size == 40);
    CHECK(m.cycle_steps == 481);  // 480 even and 40 even: one appended step
    CHECK(m.extra == ExtraStepKind::Symmetric);
    for (int i = 0; i < m.size; ++i) {
        double sum = 0.0;
        for (int j = 0; j < m.size; ++j) {
            CHECK(m.entry(i, j) >= 0.0);
            sum += m.entry(i, j);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    // an odd cycle on an even circle flips parity: the diagonal is empty
    for (int i = 0; i < m.size; ++i) CHECK(m.entry(i, i) == 0.0);
}

TEST_CASE("stationary solver on reference matrices") {
    // symmetric doubly stochastic matrix: uniform law
    WrappedCycleMatrix sym;
    sym.size = 4;
    sym.cycle_steps = 1;
    sym.rows = {0.0, 0.5, 0.0, 0.5, 0.5, 0.0, 0.5, 0.0,
                0.0, 0.5, 0.0, 0.5, 0.5, 0.0, 0.5, 0.0};
    const std::vector<double> uniform = stationary_distribution(sym);
    for (double v : uniform) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));

    // pure game-B cycle matrix reproduces the closed-form invariant measure
    const GameBSpec spec = GameBSpec::make(1.0 / 3.0, 1, 3);
    const CycleChain chain = game_b_chain(spec);
    WrappedCycleMatrix bmat;
    bmat.size = 3;
    bmat.cycle_steps = 1;
    bmat.rows.assign(9, 0.0);
    for (int j = 0; j < 3; ++j) {
        bmat.rows[static_cast<std::size_t>(j) * 3 + (j + 1) % 3] =
            chain.forward[static_cast<std::size_t>(j)];
        bmat.rows[static_cast<std::size_t>(j) * 3 + (j + 2) % 3] = chain.backward(j);
    }
    const std::vector<double> pi = stationary_distribution(bmat);
    CHECK(pi[0] == doctest::Approx(5.0 / 13.0).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(2.0 / 13.0).epsilon(1e-12));
    CHECK(pi[2] == doctest::Approx(6.0 / 13.0).epsilon(1e-12));
    CHECK(stationary_residual(bmat, pi) < 1e-13);
}

TEST_CASE("stationary law: residual, start independence, direct-solve agreement") {
    const RatchetParams p = paper_params();
    const FlashingSchedule s = FlashingSchedule::make(p, 10);
    const WrappedCycleMatrix m = build_wrapped_matrix(p, s);
    const std::vector<double> pi = stationary_distribution(m);
    CHECK(stationary_residual(m, pi) < 1e-10);

    std::mt19937_64 gen(31337);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> start(static_cast<std::size_t>(m.size));
        for (double& x : start) x = u(gen);
        const std::vector<double> again = stationary_distribution(m, &start);
        double d = 0.0;
        for (int j = 0; j < m.size; ++j)
            d = std::max(d, std::abs(again[static_cast<std::size_t>(j)] -
                                     pi[static_cast<std::size_t>(j)]));
        CHECK(d < 1e-9);
    }

    const std::vector<double> direct = stationary_dense(m.rows, m.size);
    for (int j = 0; j < m.size; ++j)
        CHECK(direct[static_cast<std::size_t>(j)] ==
              doctest::Approx(pi[static_cast<std::size_t>(j)]).epsilon(1e-9));
}

TEST_CASE("recentering maps the wrapped circle onto [-(1-alpha)L, alpha L)") {
    const RatchetParams p = paper_params();
    const int n = 4;
    std::vector<double> pibar(static_cast<std::size_t>(16));
    for (int w = 0; w < 16; ++w) pibar[static_cast<std::size_t>(w)] = (w + 1) / 136.0;
    const LatticeDistribution rec = recenter(pibar, p, n);
    CHECK(rec.min_site() == -12);
    CHECK(rec.max_site() == 3);
    CHECK(rec.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
    // states below the tooth peak keep their position, the rest shift by -L
    CHECK(rec.mass_at(0) == pibar[0]);
    CHECK(rec.mass_at(3) == pibar[3]);
    CHECK(rec.mass_at(4 - 16) == pibar[4]);
    CHECK(rec.mass_at(-1) == pibar[15]);
    CHECK_THROWS_AS(recenter(std::vector<double>(7), p, 4), std::invalid_argument);
}

TEST_CASE("stationary analysis at n = 10: unimodality, asymmetry, route agreement") {
    const RatchetParams p = paper_params();
    const FlashingSchedule s = FlashingSchedule::make(p, 10);
    const StationaryResult r = analyze_stationary(p, s);

    CHECK(r.residual < 1e-10);
    CHECK(r.pibar_recentered.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(is_unimodal(r.pibar_recentered.masses));

    // the drifted chain is genuinely non-uniform
    const auto [mn, mx] = std::minmax_element(r.pibar.begin(), r.pibar.end());
    CHECK(*mx - *mn > 1e-3);

    // displacement computed on the line vs tracked on the circle
    const double tracked = mean_displacement_tracked(p, s, r.pibar, r.matrix.extra);
    CHECK(std::abs(tracked - r.mubar) < 1e-8);
}

TEST_CASE("driftless schedule has a uniform stationary law and zero displacement") {
    const RatchetParams p = RatchetParams::from_lambda(1, 4, 0.0, {12, 5}, {12, 5});
    const FlashingSchedule s = FlashingSchedule::make(p, 10);
    const StationaryResult r = analyze_stationary(p, s);
    for (double v : r.pibar) CHECK(v == doctest::Approx(1.0 / 40.0).epsilon(1e-12));
    CHECK(std::abs(r.mubar) < 1e-10);
}

TEST_CASE("toy mean displacement equals exhaustive one-cycle enumeration") {
    const RatchetParams p = RatchetParams::from_lambda(1, 3, 0.5, {1, 1}, {1, 1});
    const FlashingSchedule s = FlashingSchedule::make(p, 1);
    const StationaryResult r = analyze_stationary(p, s);

    // one cycle is two steps, symmetric then ratchet: enumerate the four
    // (direction, direction) outcomes from each wrapped start state
    const auto [p0, p1] = ratchet_step_probs(p, 1);
    auto fwd = [&](std::int64_t pos) {
        std::int64_t r3 = pos % 3;
        if (r3 < 0) r3 += 3;
        return r3 < 1 ? p0 : p1;
    };
    double expected = 0.0;
    for (int i = 0; i < 3; ++i) {
        double mean_inc = 0.0;
        for (int d1 : {-1, 1})
            for (int d2 : {-1, 1}) {
                const double f = fwd(i + d1);
                const double w2 = d2 > 0 ? f : 1.0 - f;
                mean_inc += 0.5 * w2 * (d1 + d2);
            }
        expected += r.pibar[static_cast<std::size_t>(i)] * mean_inc;
    }
    CHECK(r.mubar == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("matrix build does not depend on the thread count") {
    const RatchetParams p = paper_params(2.0);
    const FlashingSchedule s = FlashingSchedule::make(p, 5);
    const WrappedCycleMatrix one = build_wrapped_matrix(p, s, {ExtraStepKind::Symmetric, 1});
    const WrappedCycleMatrix two = build_wrapped_matrix(p, s, {ExtraStepKind::Symmetric, 2});
    REQUIRE(one.rows.size() == two.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) CHECK(one.rows[i] == two.rows[i]);
}

TEST_CASE("matrix rows equal the folded unwrapped evolution") {
    // same cycle computed by two engines: the wrapped stepper behind the
    // matrix build, and the unwrapped compact kernel folded mod L*n
    const RatchetParams p = RatchetParams::from_lambda(1, 4, 2.0, {1, 1}, {1, 1});
    const FlashingSchedule s = FlashingSchedule::make(p, 4);
    const WrappedCycleMatrix m = build_wrapped_matrix(p, s);
    REQUIRE(m.size == 16);
    REQUIRE(m.cycle_steps == 33);  // 32 even and 16 even: parity step appended

    for (int start : {0, 3, 11}) {
        std::vector<PhaseRun> runs{{FlashingPhase::Off, s.steps_off},
                                   {FlashingPhase::On, s.steps_on},
                                   {FlashingPhase::Off, 1}};
        const LatticeDistribution line =
            evolve_sequence(LatticeDistribution::point_mass(start, 4), p, 4, runs);
        std::vector<double> folded(16, 0.0);
        for (std::size_t i = 0; i < line.masses.size(); ++i) {
            const std::int64_t site = line.offset + static_cast<std::int64_t>(i);
            folded[static_cast<std::size_t>(((site % 16) + 16) % 16)] += line.masses[i];
        }
        for (int j = 0; j < 16; ++j)
            CHECK(folded[static_cast<std::size_t>(j)] ==
                  doctest::Approx(m.entry(start, j)).epsilon(1e-13));
    }
}

TEST_CASE("ratchet-kind extra step is available and differs") {
    const RatchetParams p = paper_params();
    const FlashingSchedule s = FlashingSchedule::make(p, 10);
    const StationaryResult sym = analyze_stationary(p, s, {ExtraStepKind::Symmetric, 0});
    const StationaryResult rat = analyze_stationary(p, s, {ExtraStepKind::Ratchet, 0});
    CHECK(sym.matrix.extra == ExtraStepKind::Symmetric);
    CHECK(rat.matrix.extra == ExtraStepKind::Ratchet);
    CHECK(sym.mubar != rat.mubar);
    const double tracked = mean_displacement_tracked(p, s, rat.pibar, ExtraStepKind::Ratchet);
    CHECK(std::abs(tracked - rat.mubar) < 1e-8);
}
