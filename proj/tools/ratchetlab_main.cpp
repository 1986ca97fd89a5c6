// ratchetlab: exact lattice distributions for flashing-ratchet random walks,
// the induced fair-game pair and its mixtures/patterns, wrapped-chain
// stationary analysis, and an Euler-Maruyama cross-check. Subcommands write
// CSV/JSON/binary outputs plus a re-runnable `key=value` config next to them.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "ratchetlab/errors.hpp"
#include "ratchetlab/games.hpp"
#include "ratchetlab/io.hpp"
#include "ratchetlab/lattice.hpp"
#include "ratchetlab/mc.hpp"
#include "ratchetlab/model.hpp"
#include "ratchetlab/parallel.hpp"
#include "ratchetlab/stationary.hpp"
#include "ratchetlab/stats.hpp"

namespace rl = ratchetlab;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;      // bad arguments or validation failure
constexpr int kExitInvariant = 3;  // internal self-check tripped

struct ModelOpts {
    std::string alpha = "1/4";
    int L = 4;
    double lambda = -1.0;
    double gamma = -1.0;
    std::string tau1 = "2.4";
    std::string tau2 = "2.4";

    rl::RatchetParams params() const {
        const rl::Rational a = rl::parse_rational(alpha);
        if (a.num <= 0 || a.num >= a.den)
            throw std::invalid_argument("alpha must lie strictly in (0, 1)");
        if ((static_cast<std::int64_t>(L) * a.num) % a.den != 0)
            throw std::invalid_argument("alpha * L must be an integer number of lattice periods");
        const int l = static_cast<int>(static_cast<std::int64_t>(L) * a.num / a.den);
        const rl::Rational t1 = rl::parse_rational(tau1);
        const rl::Rational t2 = rl::parse_rational(tau2);
        if (gamma >= 0.0 && lambda >= 0.0)
            throw std::invalid_argument("give either --lambda or --gamma, not both");
        if (gamma >= 0.0) return rl::RatchetParams::from_gamma(l, L, gamma, t1, t2);
        const double lam = lambda >= 0.0 ? lambda : 0.0;
        return rl::RatchetParams::from_lambda(l, L, lam, t1, t2);
    }
};

void add_model_options(CLI::App* cmd, ModelOpts& m) {
    cmd->add_option("--alpha", m.alpha, "asymmetry l/L as a fraction or decimal")
        ->capture_default_str();
    cmd->add_option("--L", m.L, "spatial period")->capture_default_str();
    cmd->add_option("--lambda", m.lambda, "drift rate (rho = 1 - lambda/n)");
    cmd->add_option("--gamma", m.gamma, "drift strength (gamma = lambda(1-alpha)/2)");
    cmd->add_option("--tau1", m.tau1, "potential-off duration (rational)")->capture_default_str();
    cmd->add_option("--tau2", m.tau2, "potential-on duration (rational)")->capture_default_str();
}

std::string out_path(const std::string& outdir, const std::string& name) {
    std::filesystem::create_directories(outdir);
    return (std::filesystem::path(outdir) / name).string();
}

void emit_config(const CLI::App* cmd, const std::string& outdir, const std::string& prefix,
                 const std::string& section) {
    // only options that were actually given: unset optional numbers would
    // otherwise come back as empty strings and misparse on re-run
    std::ofstream f(out_path(outdir, prefix + "_config.txt"));
    f << "[" << section << "]\n" << cmd->config_to_str(false, false);
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const auto colon2 = text.find(':', colon + 1);
        if (colon2 == std::string::npos)
            throw std::invalid_argument("range syntax is first:last:step");
        const double first = std::stod(text.substr(0, colon));
        const double last = std::stod(text.substr(colon + 1, colon2 - colon - 1));
        const double step = std::stod(text.substr(colon2 + 1));
        if (step <= 0 || last < first) throw std::invalid_argument("bad range " + text);
        for (double v = first; v <= last + 1e-9 * step; v += step) out.push_back(v);
        return out;
    }
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
}

json stats_json(const rl::PeakStats& ps) {
    return json{{"areas", ps.areas}, {"heights", ps.heights}, {"mean", ps.mean}};
}

void print_table(const std::vector<rl::SweepRow>& rows, const std::string& key_name) {
    std::printf("%8s  %-32s  %-32s  %s\n", key_name.c_str(), "areas of the three peaks",
                "heights of the three peaks", "mean displacement");
    for (const rl::SweepRow& r : rows) {
        std::printf("%8g  (%.6g, %.6g, %.6g)  (%.6g, %.6g, %.6g)  %.6g\n", r.key,
                    r.stats.areas[0], r.stats.areas[1], r.stats.areas[2], r.stats.heights[0],
                    r.stats.heights[1], r.stats.heights[2], r.stats.mean);
    }
}

// ---------------------------------------------------------------- potential

struct PotentialOpts {
    ModelOpts model;
    double from = -6.0, to = 6.0;
    int points = 1201;
    std::string outdir = ".";
};

void run_potential(const CLI::App* cmd, const PotentialOpts& o) {
    if (o.points < 2) throw std::invalid_argument("--points must be >= 2");
    if (!(o.to > o.from)) throw std::invalid_argument("--to must exceed --from");
    const rl::RatchetParams p = o.model.params();
    const std::string path = out_path(o.outdir, "potential.csv");
    std::ofstream f(path);
    f << "x,V,mu,invariant_density\n";
    for (int i = 0; i < o.points; ++i) {
        const double x = o.from + (o.to - o.from) * i / (o.points - 1);
        f << rl::fmt_g17(x) << ',' << rl::fmt_g17(rl::sawtooth_potential(x, p)) << ','
          << rl::fmt_g17(rl::drift(x, p)) << ',' << rl::fmt_g17(rl::invariant_density(x, p))
          << "\n";
    }
    emit_config(cmd, o.outdir, "potential", "potential");
    std::printf("wrote %s (%d rows)\n", path.c_str(), o.points);
}

// ----------------------------------------------------------------- parrondo

struct ParrondoOpts {
    std::string rho = "1/3";
    int l = 1;
    int L = 3;
    double mix = -1.0;
    std::vector<int> pattern;
    std::string outdir = ".";
};

void run_parrondo(const CLI::App* cmd, const ParrondoOpts& o) {
    const double rho = rl::parse_rational(o.rho).value();
    const rl::GameBSpec spec = rl::GameBSpec::make(rho, o.l, o.L);
    std::printf("p0 = %.12g\np1 = %.12g\n", spec.p0, spec.p1);
    const std::vector<double> pi = rl::invariant_measure_b(spec);
    std::printf("invariant measure:");
    for (double v : pi) std::printf(" %.12g", v);
    std::printf("\n");
    const double b_profit = rl::mean_profit_single(rl::game_b_chain(spec));
    std::printf("game B mean profit per step: %.3e\n", b_profit);

    json report{{"rho", rho},  {"l", o.l},         {"L", o.L},
                {"p0", spec.p0}, {"p1", spec.p1},    {"invariant_measure", pi},
                {"profit_B", b_profit}};
    if (o.mix >= 0.0) {
        const double mp = rl::mean_profit_mixture(o.mix, spec);
        std::printf("mixture c = %g mean profit per step: %.12g\n", o.mix, mp);
        report["mix_c"] = o.mix;
        report["profit_mixture"] = mp;
    }
    if (!o.pattern.empty()) {
        if (o.pattern.size() != 2) throw std::invalid_argument("--pattern takes r s");
        const double pp = rl::mean_profit_pattern(o.pattern[0], o.pattern[1], spec);
        std::printf("pattern A^%d B^%d profit per period: %.12g\n", o.pattern[0], o.pattern[1],
                    pp);
        report["pattern_r"] = o.pattern[0];
        report["pattern_s"] = o.pattern[1];
        report["profit_pattern"] = pp;
    }
    std::ofstream(out_path(o.outdir, "parrondo.json")) << report.dump(2) << "\n";
    emit_config(cmd, o.outdir, "parrondo", "parrondo");
}

// ------------------------------------------------------------------- evolve

struct EvolveOpts {
    ModelOpts model;
    int n = 100;
    std::int64_t steps = -1;
    std::string time;
    double start = 0.0;
    std::string start_csv;
    std::string resume;
    std::string checkpoint_out;
    std::string svg;
    std::string outdir = ".";
};

void run_evolve(const CLI::App* cmd, const EvolveOpts& o) {
    const rl::RatchetParams p = o.model.params();
    const rl::FlashingSchedule schedule = rl::FlashingSchedule::make(p, o.n);

    std::int64_t steps = o.steps;
    if (!o.time.empty()) {
        if (steps >= 0) throw std::invalid_argument("give either --steps or --time");
        const rl::Rational t = rl::parse_rational(o.time);
        if (t.num < 0) throw std::invalid_argument("--time must be >= 0");
        const std::int64_t nn = static_cast<std::int64_t>(o.n) * o.n;
        if ((nn * t.num) % t.den != 0)
            throw std::invalid_argument("n^2 * time must be an integer step count");
        steps = nn * t.num / t.den;
    }
    if (steps < 0) throw std::invalid_argument("one of --steps or --time is required");

    rl::LatticeDistribution start;
    if (!o.resume.empty())
        start = rl::read_checkpoint(o.resume);
    else if (!o.start_csv.empty())
        start = rl::read_distribution_csv(o.start_csv);
    else
        start = rl::LatticeDistribution::point_mass(std::llround(o.start * o.n), o.n);
    if (start.n_scale != o.n)
        throw std::invalid_argument("starting distribution was computed at a different n");

    const rl::LatticeDistribution end = rl::evolve_flashing(start, p, schedule, steps);
    const rl::PeakStats ps = rl::peak_stats(end, p);

    write_distribution_csv(out_path(o.outdir, "distribution.csv"), end);
    json report = stats_json(ps);
    report["n"] = o.n;
    report["steps"] = steps;
    report["steps_taken_total"] = end.steps_taken;
    report["total_mass"] = end.total_mass();
    std::ofstream(out_path(o.outdir, "stats.json")) << report.dump(2) << "\n";
    if (!o.checkpoint_out.empty()) rl::write_checkpoint(o.checkpoint_out, end);
    if (!o.svg.empty()) {
        std::vector<std::pair<double, double>> pts;
        for (const rl::DensityPoint& dp : rl::rescaled_density(end))
            pts.emplace_back(dp.position, dp.density);
        rl::write_svg_line_plot(o.svg, pts);
    }
    emit_config(cmd, o.outdir, "evolve", "evolve");
    std::printf("steps %lld  mean %.9g  mass %.15g\n", static_cast<long long>(steps), ps.mean,
                end.total_mass());
    std::printf("areas (%.6g, %.6g, %.6g)  heights (%.6g, %.6g, %.6g)\n", ps.areas[0],
                ps.areas[1], ps.areas[2], ps.heights[0], ps.heights[1], ps.heights[2]);
}

// --------------------------------------------------------------- stationary

struct StationaryOpts {
    ModelOpts model;
    int n = 100;
    std::string extra = "symmetric";
    std::string matrix_out;
    std::string svg;
    std::string outdir = ".";
    int threads = 0;
};

void run_stationary(const CLI::App* cmd, const StationaryOpts& o) {
    const rl::RatchetParams p = o.model.params();
    const rl::FlashingSchedule schedule = rl::FlashingSchedule::make(p, o.n);
    rl::StationaryOptions opts;
    opts.threads = o.threads;
    if (o.extra == "symmetric")
        opts.extra_step = rl::ExtraStepKind::Symmetric;
    else if (o.extra == "ratchet")
        opts.extra_step = rl::ExtraStepKind::Ratchet;
    else
        throw std::invalid_argument("--extra-step must be symmetric or ratchet");

    const rl::StationaryResult r = rl::analyze_stationary(p, schedule, opts);
    write_stationary_csv(out_path(o.outdir, "pibar.csv"), r.pibar, p, o.n);
    write_distribution_csv(out_path(o.outdir, "panel1_pibar.csv"), r.pibar_recentered);

    const rl::LatticeDistribution after_off = rl::evolve_sequence(
        r.pibar_recentered, p, o.n, {{rl::FlashingPhase::Off, schedule.steps_off}});
    write_distribution_csv(out_path(o.outdir, "panel2_after_off.csv"), after_off);
    const rl::LatticeDistribution after_cycle =
        rl::evolve_sequence(after_off, p, o.n, {{rl::FlashingPhase::On, schedule.steps_on}});
    write_distribution_csv(out_path(o.outdir, "panel3_after_cycle.csv"), after_cycle);

    if (!o.matrix_out.empty()) rl::write_matrix_binary(o.matrix_out, r.matrix);
    if (!o.svg.empty()) {
        std::vector<std::pair<double, double>> pts;
        for (const rl::DensityPoint& dp : rl::rescaled_density(r.pibar_recentered))
            pts.emplace_back(dp.position, dp.density);
        rl::write_svg_line_plot(o.svg, pts);
    }

    json report{{"n", o.n},
                {"cycle_steps", r.matrix.cycle_steps},
                {"extra_step", o.extra},
                {"mubar", r.mubar},
                {"rate", r.mubar / (p.tau1 + p.tau2).value()},
                {"residual", r.residual}};
    std::ofstream(out_path(o.outdir, "stationary.json")) << report.dump(2) << "\n";
    emit_config(cmd, o.outdir, "stationary", "stationary");
    std::printf("cycle_steps %lld (extra step: %s)\n",
                static_cast<long long>(r.matrix.cycle_steps),
                r.matrix.extra == rl::ExtraStepKind::None ? "none" : o.extra.c_str());
    std::printf("mubar %.9g   mubar/(tau1+tau2) %.9g   residual %.2e\n", r.mubar,
                r.mubar / (p.tau1 + p.tau2).value(), r.residual);
}

// -------------------------------------------------------------------- sweep

struct SweepLambdaOpts {
    ModelOpts model;
    std::string values = "1,2,3,4,5,10,15,20,25,50";
    int n = 100;
    int threads = 0;
    std::string outdir = ".";
};

void run_sweep_lambda(const CLI::App* cmd, const SweepLambdaOpts& o) {
    const rl::RatchetParams base = o.model.params();
    const std::vector<double> lambdas = parse_value_list(o.values);
    const std::vector<rl::SweepRow> rows = rl::lambda_sweep(lambdas, base, o.n, o.threads);
    write_table_csv(out_path(o.outdir, "table_lambda.csv"), rows);
    emit_config(cmd, o.outdir, "sweep_lambda", "sweep.lambda");
    print_table(rows, "lambda");
}

struct SweepNOpts {
    ModelOpts model;
    std::string values = "10:200:10";
    int threads = 0;
    std::string outdir = ".";
};

void run_sweep_n(const CLI::App* cmd, const SweepNOpts& o) {
    const rl::RatchetParams base = o.model.params();
    std::vector<int> ns;
    for (double v : parse_value_list(o.values)) {
        const int n = static_cast<int>(std::llround(v));
        if (n < 1 || std::abs(v - n) > 1e-9)
            throw std::invalid_argument("n values must be positive integers");
        ns.push_back(n);
    }
    const std::vector<rl::SweepRow> rows = rl::n_sweep(ns, base, o.threads);
    write_table_csv(out_path(o.outdir, "table_n.csv"), rows);
    emit_config(cmd, o.outdir, "sweep_n", "sweep.n");
    print_table(rows, "n");
}

struct SweepTauOpts {
    ModelOpts model;
    std::string grid;
    int n_floor = 20;
    int max_n = 0;
    int threads = 0;
    std::string outdir = ".";
};

void run_sweep_tau(const CLI::App* cmd, const SweepTauOpts& o) {
    const rl::RatchetParams base = o.model.params();
    std::ifstream f(o.grid);
    if (!f) throw std::invalid_argument("cannot open tau grid file " + o.grid);
    std::vector<std::pair<rl::Rational, rl::Rational>> grid;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("tau1", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("tau grid rows are `tau1,tau2`");
        grid.emplace_back(rl::parse_rational(line.substr(0, comma)),
                          rl::parse_rational(line.substr(comma + 1)));
    }
    const rl::TauSweepResult result = rl::optimize_tau(base, grid, o.n_floor, o.max_n, o.threads);
    write_tau_table_csv(out_path(o.outdir, "table_tau.csv"), result);
    emit_config(cmd, o.outdir, "sweep_tau", "sweep.tau");
    std::printf("%10s %10s %4s %6s %14s %14s\n", "tau1", "tau2", "m", "n", "mubar", "rate");
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const rl::TauCell& c = result.cells[i];
        if (!c.evaluated) {
            std::printf("%10s %10s %4d %6d %14s %14s (over n budget)\n", c.tau1.str().c_str(),
                        c.tau2.str().c_str(), c.m, c.n_used, "-", "-");
            continue;
        }
        std::printf("%10s %10s %4d %6d %14.9g %14.9g%s\n", c.tau1.str().c_str(),
                    c.tau2.str().c_str(), c.m, c.n_used, c.mubar, c.rate,
                    static_cast<int>(i) == result.best_index ? "  <- best" : "");
    }
}

// ----------------------------------------------------------------------- mc

struct McOpts {
    ModelOpts model;
    std::int64_t paths = 10000;
    double dt = 1e-4;
    std::uint64_t seed = 0;
    double t_end = 4.8;
    double y0 = 0.0;
    bool wrap = false;
    bool ratchet_only = false;
    int bins = 60;
    int threads = 0;
    std::string compare;
    std::string outdir = ".";
};

void run_mc(const CLI::App* cmd, const McOpts& o) {
    const rl::RatchetParams p = o.model.params();
    rl::McConfig cfg;
    cfg.paths = o.paths;
    cfg.dt = o.dt;
    cfg.seed = o.seed;
    cfg.wrap = o.wrap;
    cfg.threads = o.threads;
    const std::vector<double> samples = o.ratchet_only
                                            ? rl::simulate_ratchet(p, cfg, o.t_end, o.y0)
                                            : rl::simulate_flashing(p, cfg, o.t_end, o.y0);
    rl::write_samples_csv(out_path(o.outdir, "samples.csv"), samples);

    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size() > 1 ? samples.size() - 1 : 1);

    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const double pad = (*mx - *mn) * 1e-9 + 1e-12;
    write_histogram_csv(out_path(o.outdir, "histogram.csv"),
                        rl::histogram(samples, *mn, *mx + pad, o.bins));

    json report{{"paths", o.paths}, {"dt", o.dt},   {"seed", o.seed},
                {"t_end", o.t_end}, {"mean", mean}, {"variance", var}};
    std::printf("paths %lld  mean %.6g  variance %.6g\n", static_cast<long long>(o.paths), mean,
                var);
    if (!o.compare.empty()) {
        const rl::LatticeDistribution exact = rl::read_distribution_csv(o.compare);
        const double ks = rl::ks_distance(samples, exact);
        report["ks_distance"] = ks;
        report["compare"] = o.compare;
        std::printf("KS distance to %s: %.6g\n", o.compare.c_str(), ks);
    }
    std::ofstream(out_path(o.outdir, "mc.json")) << report.dump(2) << "\n";
    emit_config(cmd, o.outdir, "mc", "mc");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for flashing-ratchet random walks and Parrondo games"};
    app.require_subcommand(1);
    app.set_config("--config", "", "re-run from an emitted key=value config");

    PotentialOpts pot;
    CLI::App* c_pot = app.add_subcommand("potential", "sample V, mu and the invariant density");
    c_pot->fallthrough();
    add_model_options(c_pot, pot.model);
    c_pot->add_option("--from", pot.from, "left end")->capture_default_str();
    c_pot->add_option("--to", pot.to, "right end")->capture_default_str();
    c_pot->add_option("--points", pot.points, "sample count")->capture_default_str();
    c_pot->add_option("-o,--outdir", pot.outdir, "output directory")->capture_default_str();
    c_pot->callback([&] { run_potential(c_pot, pot); });

    ParrondoOpts par;
    CLI::App* c_par = app.add_subcommand("parrondo", "fair-game pair: probabilities, invariant "
                                                     "measure, mixture and pattern profits");
    c_par->fallthrough();
    c_par->add_option("--rho", par.rho, "fairness parameter in (0,1)")->capture_default_str();
    c_par->add_option("--l", par.l, "losing stretch length")->capture_default_str();
    c_par->add_option("--L", par.L, "period")->capture_default_str();
    c_par->add_option("--mix", par.mix, "mixture weight c in (0,1)");
    c_par->add_option("--pattern", par.pattern, "pattern exponents r s")->expected(2);
    c_par->add_option("-o,--outdir", par.outdir, "output directory")->capture_default_str();
    c_par->callback([&] { run_parrondo(c_par, par); });

    EvolveOpts evo;
    CLI::App* c_evo = app.add_subcommand("evolve", "exact distribution of the flashing walk");
    c_evo->fallthrough();
    add_model_options(c_evo, evo.model);
    c_evo->add_option("--n", evo.n, "lattice refinement (multiple of m)")->capture_default_str();
    c_evo->add_option("--steps", evo.steps, "number of lattice steps");
    c_evo->add_option("--time", evo.time, "physical duration (rational; steps = n^2 * time)");
    c_evo->add_option("--start", evo.start, "starting position (point mass)")
        ->capture_default_str();
    c_evo->add_option("--start-csv", evo.start_csv, "starting distribution CSV");
    c_evo->add_option("--resume", evo.resume, "resume from a binary checkpoint");
    c_evo->add_option("--checkpoint-out", evo.checkpoint_out, "write a binary checkpoint");
    c_evo->add_option("--svg", evo.svg, "write a density line plot");
    c_evo->add_option("-o,--outdir", evo.outdir, "output directory")->capture_default_str();
    c_evo->callback([&] { run_evolve(c_evo, evo); });

    StationaryOpts sta;
    CLI::App* c_sta = app.add_subcommand("stationary", "wrapped-cycle stationary law and the "
                                                       "mean displacement per flash cycle");
    c_sta->fallthrough();
    add_model_options(c_sta, sta.model);
    c_sta->add_option("--n", sta.n, "lattice refinement (multiple of m)")->capture_default_str();
    c_sta->add_option("--extra-step", sta.extra, "parity-fix step kind: symmetric|ratchet")
        ->capture_default_str();
    c_sta->add_option("--matrix-out", sta.matrix_out, "write the cycle matrix (binary)");
    c_sta->add_option("--svg", sta.svg, "write a pibar density line plot");
    c_sta->add_option("--threads", sta.threads, "worker threads (0 = auto)")
        ->capture_default_str();
    c_sta->add_option("-o,--outdir", sta.outdir, "output directory")->capture_default_str();
    c_sta->callback([&] { run_stationary(c_sta, sta); });

    CLI::App* c_sweep = app.add_subcommand("sweep", "parameter sweeps");
    c_sweep->fallthrough();
    c_sweep->require_subcommand(1);

    SweepLambdaOpts swl;
    CLI::App* c_swl = c_sweep->add_subcommand("lambda", "drift-strength sweep");
    c_swl->fallthrough();
    add_model_options(c_swl, swl.model);
    c_swl->add_option("--values", swl.values, "list `a,b,c` or range `first:last:step`")
        ->capture_default_str();
    c_swl->add_option("--n", swl.n, "lattice refinement")->capture_default_str();
    c_swl->add_option("--threads", swl.threads, "worker threads (0 = auto)")
        ->capture_default_str();
    c_swl->add_option("-o,--outdir", swl.outdir, "output directory")->capture_default_str();
    c_swl->callback([&] { run_sweep_lambda(c_swl, swl); });

    SweepNOpts swn;
    CLI::App* c_swn = c_sweep->add_subcommand("n", "refinement sweep");
    c_swn->fallthrough();
    add_model_options(c_swn, swn.model);
    c_swn->add_option("--values", swn.values, "list `a,b,c` or range `first:last:step`")
        ->capture_default_str();
    c_swn->add_option("--threads", swn.threads, "worker threads (0 = auto)")
        ->capture_default_str();
    c_swn->add_option("-o,--outdir", swn.outdir, "output directory")->capture_default_str();
    c_swn->callback([&] { run_sweep_n(c_swn, swn); });

    SweepTauOpts swt;
    CLI::App* c_swt = c_sweep->add_subcommand("tau", "flash-timing grid search");
    c_swt->fallthrough();
    add_model_options(c_swt, swt.model);
    c_swt->add_option("--grid", swt.grid, "CSV of tau1,tau2 pairs")->required();
    c_swt->add_option("--n-floor", swt.n_floor, "smallest admissible refinement")
        ->capture_default_str();
    c_swt->add_option("--max-n", swt.max_n, "skip cells whose n exceeds this (0 = no cap)")
        ->capture_default_str();
    c_swt->add_option("--threads", swt.threads, "worker threads (0 = auto)")
        ->capture_default_str();
    c_swt->add_option("-o,--outdir", swt.outdir, "output directory")->capture_default_str();
    c_swt->callback([&] { run_sweep_tau(c_swt, swt); });

    McOpts mc;
    CLI::App* c_mc = app.add_subcommand("mc", "Euler-Maruyama endpoint sampler");
    c_mc->fallthrough();
    add_model_options(c_mc, mc.model);
    c_mc->add_option("--paths", mc.paths, "number of paths")->capture_default_str();
    c_mc->add_option("--dt", mc.dt, "integration step")->capture_default_str();
    c_mc->add_option("--seed", mc.seed, "RNG seed")->capture_default_str();
    c_mc->add_option("--t-end", mc.t_end, "end time")->capture_default_str();
    c_mc->add_option("--y0", mc.y0, "starting point")->capture_default_str();
    c_mc->add_flag("--wrap", mc.wrap, "reduce endpoints mod L");
    c_mc->add_flag("--ratchet-only", mc.ratchet_only, "keep the potential on for all time");
    c_mc->add_option("--bins", mc.bins, "histogram bins")->capture_default_str();
    c_mc->add_option("--threads", mc.threads, "worker threads (0 = auto)")->capture_default_str();
    c_mc->add_option("--compare", mc.compare, "exact distribution CSV for a KS report");
    c_mc->add_option("-o,--outdir", mc.outdir, "output directory")->capture_default_str();
    c_mc->callback([&] { run_mc(c_mc, mc); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const rl::invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
