#include "ratchetlab/games.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "ratchetlab/errors.hpp"

namespace ratchetlab {

std::pair<double, double> p0_p1_from_rho(double rho, int l, int L_period) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("rho must lie strictly in (0, 1)");
    if (l < 1 || L_period <= l)
        throw std::invalid_argument("require 0 < l < L");
    const double alpha = static_cast<double>(l) / L_period;
    const double w = std::pow(rho, (1.0 - alpha) / alpha);
    return {w / (1.0 + w), 1.0 / (1.0 + rho)};
}

double solve_p1_from_p0(double p0, double alpha) {
    if (!(p0 > 0.0 && p0 < 0.5))
        throw std::invalid_argument("p0 must lie strictly in (0, 1/2)");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie strictly in (0, 1)");
    return 1.0 / (1.0 + std::pow(p0 / (1.0 - p0), alpha / (1.0 - alpha)));
}

GameBSpec GameBSpec::make(double rho, int l, int L_period) {
    const auto [p0, p1] = p0_p1_from_rho(rho, l, L_period);
    GameBSpec s;
    s.l = l;
    s.L_period = L_period;
    s.rho = rho;
    s.p0 = p0;
    s.p1 = p1;
    return s;
}

std::vector<double> invariant_measure_b(const GameBSpec& spec) {
    const int L = spec.L_period;
    const int l = spec.l;
    const double alpha = spec.alpha();
    const double rho = spec.rho;
    const double ratio = (1.0 - alpha) / alpha;
    std::vector<double> pi(static_cast<std::size_t>(L));
    // Closed form of the detailed-balance solution: a geometric ramp below
    // the tooth peak, a geometric decay above it.
    const double above_scale = (1.0 + rho) / (1.0 + std::pow(rho, ratio));
    for (int j = 0; j < l; ++j)
        pi[static_cast<std::size_t>(j)] = std::pow(rho, j * ratio);
    for (int j = l; j < L; ++j)
        pi[static_cast<std::size_t>(j)] =
            std::pow(rho, L * (1.0 - alpha) - (j - l + 1)) * above_scale;
    double total = 0.0;
    for (double v : pi) total += v;
    for (double& v : pi) v /= total;
    return pi;
}

CycleChain game_a_chain(int size) {
    if (size < 2) throw std::invalid_argument("cycle size must be >= 2");
    return {size, std::vector<double>(static_cast<std::size_t>(size), 0.5)};
}

CycleChain game_b_chain(const GameBSpec& spec) {
    CycleChain c;
    c.size = spec.L_period;
    c.forward.resize(static_cast<std::size_t>(spec.L_period));
    for (int j = 0; j < spec.L_period; ++j)
        c.forward[static_cast<std::size_t>(j)] = j < spec.l ? spec.p0 : spec.p1;
    return c;
}

CycleChain mixture_chain(double c, const GameBSpec& spec) {
    if (!(c > 0.0 && c < 1.0))
        throw std::invalid_argument("mixture weight c must lie strictly in (0, 1)");
    CycleChain b = game_b_chain(spec);
    for (double& f : b.forward) f = c * 0.5 + (1.0 - c) * f;
    return b;
}

CycleChain refined_ratchet_chain(const RatchetParams& params, int n) {
    const auto [p0, p1] = ratchet_step_probs(params, n);
    CycleChain c;
    c.size = params.L_period * n;
    c.forward.resize(static_cast<std::size_t>(c.size));
    const int ln = params.l * n;
    for (int j = 0; j < c.size; ++j)
        c.forward[static_cast<std::size_t>(j)] = j < ln ? p0 : p1;
    return c;
}

namespace {

// Row-major dense one-step matrix of a cycle chain.
std::vector<double> cycle_matrix(const CycleChain& chain) {
    const int N = chain.size;
    std::vector<double> m(static_cast<std::size_t>(N) * N, 0.0);
    for (int j = 0; j < N; ++j) {
        const int up = (j + 1) % N;
        const int down = (j + N - 1) % N;
        m[static_cast<std::size_t>(j) * N + up] += chain.forward[static_cast<std::size_t>(j)];
        m[static_cast<std::size_t>(j) * N + down] += chain.backward(j);
    }
    return m;
}

// C = A * B for square row-major matrices.
std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b, int N) {
    std::vector<double> c(static_cast<std::size_t>(N) * N, 0.0);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            const double aik = a[static_cast<std::size_t>(i) * N + k];
            if (aik == 0.0) continue;
            const double* brow = &b[static_cast<std::size_t>(k) * N];
            double* crow = &c[static_cast<std::size_t>(i) * N];
            for (int j = 0; j < N; ++j) crow[j] += aik * brow[j];
        }
    return c;
}

// Solve x (row vector) with x P = x, sum x = 1, by Gaussian elimination on
// (P^T - I) with the last equation replaced by the normalization.
std::vector<double> solve_stationary(const std::vector<double>& p, int N) {
    std::vector<double> a(static_cast<std::size_t>(N) * (N + 1), 0.0);
    auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * (N + 1) + c]; };
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            at(r, c) = p[static_cast<std::size_t>(c) * N + r] - (r == c ? 1.0 : 0.0);
    for (int c = 0; c < N; ++c) at(N - 1, c) = 1.0;
    at(N - 1, N) = 1.0;

    for (int col = 0; col < N; ++col) {
        int pivot = col;
        for (int r = col + 1; r < N; ++r)
            if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
        if (at(pivot, col) == 0.0)
            throw invariant_violation("stationary solve: singular system (chain not irreducible?)");
        if (pivot != col)
            for (int c = col; c <= N; ++c) std::swap(at(pivot, c), at(col, c));
        for (int r = col + 1; r < N; ++r) {
            const double f = at(r, col) / at(col, col);
            if (f == 0.0) continue;
            for (int c = col; c <= N; ++c) at(r, c) -= f * at(col, c);
        }
    }
    std::vector<double> x(static_cast<std::size_t>(N));
    for (int r = N - 1; r >= 0; --r) {
        double s = at(r, N);
        for (int c = r + 1; c < N; ++c) s -= at(r, c) * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = s / at(r, r);
    }
    return x;
}

}  // namespace

std::vector<double> stationary_dense(const std::vector<double>& matrix, int size) {
    if (size < 1 || matrix.size() != static_cast<std::size_t>(size) * size)
        throw std::invalid_argument("stationary_dense: bad matrix shape");
    return solve_stationary(matrix, size);
}

std::vector<double> stationary_cycle(const CycleChain& chain) {
    for (double f : chain.forward)
        if (!(f > 0.0 && f < 1.0))
            throw std::invalid_argument("cycle chain entries must lie strictly in (0, 1)");
    return solve_stationary(cycle_matrix(chain), chain.size);
}

double mean_profit_single(const CycleChain& chain) {
    const std::vector<double> nu = stationary_cycle(chain);
    double profit = 0.0;
    for (int j = 0; j < chain.size; ++j)
        profit += nu[static_cast<std::size_t>(j)] *
                  (2.0 * chain.forward[static_cast<std::size_t>(j)] - 1.0);
    return profit;
}

double mean_profit_mixture(double c, const GameBSpec& spec) {
    return mean_profit_single(mixture_chain(c, spec));
}

double mean_profit_pattern(int r, int s, const GameBSpec& spec) {
    if (r < 1 || s < 1) throw std::invalid_argument("pattern exponents r, s must be >= 1");
    const int N = spec.L_period;
    const std::vector<double> a = cycle_matrix(game_a_chain(N));
    const std::vector<double> b = cycle_matrix(game_b_chain(spec));

    std::vector<double> period(static_cast<std::size_t>(N) * N, 0.0);
    for (int i = 0; i < N; ++i) period[static_cast<std::size_t>(i) * N + i] = 1.0;
    for (int k = 0; k < r; ++k) period = matmul(period, a, N);
    for (int k = 0; k < s; ++k) period = matmul(period, b, N);

    std::vector<double> nu = stationary_dense(period, N);

    const CycleChain chain_a = game_a_chain(N);
    const CycleChain chain_b = game_b_chain(spec);
    double profit = 0.0;
    for (int step = 0; step < r + s; ++step) {
        const CycleChain& ch = step < r ? chain_a : chain_b;
        const std::vector<double>& m = step < r ? a : b;
        for (int j = 0; j < N; ++j)
            profit +=
                nu[static_cast<std::size_t>(j)] * (2.0 * ch.forward[static_cast<std::size_t>(j)] - 1.0);
        // advance the distribution one step: nu <- nu * M
        std::vector<double> next(static_cast<std::size_t>(N), 0.0);
        for (int i = 0; i < N; ++i) {
            const double w = nu[static_cast<std::size_t>(i)];
            if (w == 0.0) continue;
            const double* row = &m[static_cast<std::size_t>(i) * N];
            for (int j = 0; j < N; ++j) next[static_cast<std::size_t>(j)] += w * row[j];
        }
        nu = std::move(next);
    }
    return profit;
}

}  // namespace ratchetlab
