#include "ratchetlab/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian; big-endian hosts need byte swapping");

namespace ratchetlab {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// std::stod throws out_of_range when strtod reports ERANGE, which includes
// gradual underflow to subnormals; deep distribution tails are subnormal, so
// accept them and reject only genuine syntax errors.
double parse_double(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw std::runtime_error("bad float field: " + text);
    return v;
}

}  // namespace

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

template <typename T>
void put(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!f) throw std::runtime_error("truncated binary file");
    return v;
}

}  // namespace

void write_distribution_csv(const std::string& path, const LatticeDistribution& dist) {
    std::ofstream f = open_out(path);
    f << "# ratchetlab distribution n=" << dist.n_scale << " steps=" << dist.steps_taken << "\n";
    f << "site_index,position,mass,density\n";
    const bool single = dist.single_parity();
    const double n = static_cast<double>(dist.n_scale);
    const double scale = single ? n / 2.0 : n;
    for (std::size_t i = 0; i < dist.masses.size(); ++i) {
        const std::int64_t site = dist.offset + static_cast<std::int64_t>(i);
        const double m = dist.masses[i];
        f << site << ',' << fmt_g17(static_cast<double>(site) / n) << ',' << fmt_g17(m) << ','
          << fmt_g17(m * scale) << "\n";
    }
}

LatticeDistribution read_distribution_csv(const std::string& path) {
    std::ifstream f = open_in(path);
    LatticeDistribution d;
    d.n_scale = 0;
    std::string line;
    bool have_offset = false;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto npos = line.find("n=");
            if (npos != std::string::npos) d.n_scale = std::stoi(line.substr(npos + 2));
            const auto spos = line.find("steps=");
            if (spos != std::string::npos) d.steps_taken = std::stoll(line.substr(spos + 6));
            continue;
        }
        if (line.find("site_index") != std::string::npos) continue;  // header
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        const std::int64_t site = std::stoll(cell);
        std::getline(row, cell, ',');
        const double position = parse_double(cell);
        std::getline(row, cell, ',');
        const double mass = parse_double(cell);
        if (!have_offset) {
            d.offset = site;
            have_offset = true;
        }
        const std::int64_t idx = site - d.offset;
        if (idx != static_cast<std::int64_t>(d.masses.size()))
            throw std::runtime_error("distribution CSV has non-contiguous sites: " + path);
        d.masses.push_back(mass);
        if (d.n_scale == 0 && site != 0 && position != 0.0)
            d.n_scale = static_cast<int>(std::llround(static_cast<double>(site) / position));
    }
    if (!have_offset) throw std::runtime_error("distribution CSV has no data rows: " + path);
    if (d.n_scale <= 0) throw std::runtime_error("cannot infer n from CSV: " + path);
    return d;
}

void write_checkpoint(const std::string& path, const LatticeDistribution& dist) {
    std::ofstream f = open_out(path, true);
    put<std::uint8_t>(f, 1);
    put<std::int32_t>(f, dist.n_scale);
    put<std::int64_t>(f, dist.offset);
    put<std::int64_t>(f, dist.steps_taken);
    put<std::uint64_t>(f, dist.masses.size());
    f.write(reinterpret_cast<const char*>(dist.masses.data()),
            static_cast<std::streamsize>(dist.masses.size() * sizeof(double)));
}

LatticeDistribution read_checkpoint(const std::string& path) {
    std::ifstream f = open_in(path, true);
    const auto version = get<std::uint8_t>(f);
    if (version != 1) throw std::runtime_error("unsupported checkpoint version");
    LatticeDistribution d;
    d.n_scale = get<std::int32_t>(f);
    d.offset = get<std::int64_t>(f);
    d.steps_taken = get<std::int64_t>(f);
    const auto len = get<std::uint64_t>(f);
    d.masses.resize(len);
    f.read(reinterpret_cast<char*>(d.masses.data()),
           static_cast<std::streamsize>(len * sizeof(double)));
    if (!f) throw std::runtime_error("truncated checkpoint: " + path);
    return d;
}

void write_stationary_csv(const std::string& path, const std::vector<double>& pibar,
                          const RatchetParams& params, int n) {
    const int N = params.L_period * n;
    if (static_cast<int>(pibar.size()) != N)
        throw std::invalid_argument("pibar length must be L*n");
    const int ln = params.l * n;
    std::ofstream f = open_out(path);
    f << "state,wrapped_position,recentered_position,mass,density\n";
    for (int w = 0; w < N; ++w) {
        const double wrapped = static_cast<double>(w) / n;
        const double rec = w < ln ? wrapped : wrapped - params.L_period;
        const double m = pibar[static_cast<std::size_t>(w)];
        f << w << ',' << fmt_g17(wrapped) << ',' << fmt_g17(rec) << ',' << fmt_g17(m) << ','
          << fmt_g17(m * n) << "\n";
    }
}

void write_matrix_binary(const std::string& path, const WrappedCycleMatrix& mat) {
    std::ofstream f = open_out(path, true);
    put<std::uint64_t>(f, static_cast<std::uint64_t>(mat.size));
    put<std::int64_t>(f, mat.cycle_steps);
    f.write(reinterpret_cast<const char*>(mat.rows.data()),
            static_cast<std::streamsize>(mat.rows.size() * sizeof(double)));
}

WrappedCycleMatrix read_matrix_binary(const std::string& path) {
    std::ifstream f = open_in(path, true);
    WrappedCycleMatrix m;
    m.size = static_cast<int>(get<std::uint64_t>(f));
    m.cycle_steps = get<std::int64_t>(f);
    m.extra = ExtraStepKind::None;  // not recorded in the file
    m.rows.resize(static_cast<std::size_t>(m.size) * static_cast<std::size_t>(m.size));
    f.read(reinterpret_cast<char*>(m.rows.data()),
           static_cast<std::streamsize>(m.rows.size() * sizeof(double)));
    if (!f) throw std::runtime_error("truncated matrix file: " + path);
    return m;
}

void write_table_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream f = open_out(path);
    f << "lambda_or_n,area1,area2,area3,height1,height2,height3,mean\n";
    for (const SweepRow& r : rows) {
        f << fmt_g17(r.key);
        for (double a : r.stats.areas) f << ',' << fmt_g17(a);
        for (double h : r.stats.heights) f << ',' << fmt_g17(h);
        f << ',' << fmt_g17(r.stats.mean) << "\n";
    }
}

void write_tau_table_csv(const std::string& path, const TauSweepResult& result) {
    std::ofstream f = open_out(path);
    f << "tau1,tau2,m,n_used,mubar,rate,evaluated,best\n";
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const TauCell& c = result.cells[i];
        f << c.tau1.str() << ',' << c.tau2.str() << ',' << c.m << ',' << c.n_used << ','
          << fmt_g17(c.mubar) << ',' << fmt_g17(c.rate) << ',' << (c.evaluated ? 1 : 0) << ','
          << (static_cast<int>(i) == result.best_index ? 1 : 0) << "\n";
    }
}

void write_samples_csv(const std::string& path, const std::vector<double>& samples) {
    std::ofstream f = open_out(path);
    f << "sample\n";
    for (double s : samples) f << fmt_g17(s) << "\n";
}

void write_histogram_csv(const std::string& path, const std::vector<HistogramBin>& bins) {
    std::ofstream f = open_out(path);
    f << "bin_left,bin_right,count\n";
    for (const HistogramBin& b : bins)
        f << fmt_g17(b.left) << ',' << fmt_g17(b.right) << ',' << b.count << "\n";
}

void write_svg_line_plot(const std::string& path,
                         const std::vector<std::pair<double, double>>& points, int width,
                         int height) {
    if (points.empty()) throw std::invalid_argument("empty plot series");
    double xmin = points[0].first, xmax = xmin, ymin = points[0].second, ymax = ymin;
    for (const auto& [x, y] : points) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double margin = 40;
    auto sx = [&](double x) {
        return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto sy = [&](double y) {
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
    };
    std::ofstream f = open_out(path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
    f << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
      << "\" height=\"" << height - 2 * margin << "\" fill=\"none\" stroke=\"#888\"/>\n";
    f << "<polyline fill=\"none\" stroke=\"#000\" stroke-width=\"1\" points=\"";
    for (const auto& [x, y] : points) f << sx(x) << ',' << sy(y) << ' ';
    f << "\"/>\n";
    f << "<text x=\"" << margin << "\" y=\"" << height - 8 << "\" font-size=\"12\">x: ["
      << fmt_g17(xmin) << ", " << fmt_g17(xmax) << "]  y: [" << fmt_g17(ymin) << ", "
      << fmt_g17(ymax) << "]</text>\n";
    f << "</svg>\n";
}

}  // namespace ratchetlab
