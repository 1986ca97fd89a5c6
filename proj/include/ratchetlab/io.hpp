#pragma once

#include <string>
#include <vector>

#include "ratchetlab/lattice.hpp"
#include "ratchetlab/mc.hpp"
#include "ratchetlab/stationary.hpp"
#include "ratchetlab/stats.hpp"

namespace ratchetlab {

/// Shortest round-trippable decimal for a double (17 significant digits).
std::string fmt_g17(double v);

/// Distribution snapshot: `site_index,position,mass,density` with a leading
/// `# ratchetlab distribution n=<n> steps=<k>` comment so the file is
/// self-describing. Every stored cell is written, structural zeros included,
/// so a read-back reproduces the distribution bitwise.
void write_distribution_csv(const std::string& path, const LatticeDistribution& dist);
LatticeDistribution read_distribution_csv(const std::string& path);

/// Binary checkpoint for resuming long evolutions (little-endian):
/// u8 version, i32 n_scale, i64 offset, i64 steps_taken, u64 length, doubles.
void write_checkpoint(const std::string& path, const LatticeDistribution& dist);
LatticeDistribution read_checkpoint(const std::string& path);

/// Stationary law: `state,wrapped_position,recentered_position,mass,density`.
void write_stationary_csv(const std::string& path, const std::vector<double>& pibar,
                          const RatchetParams& params, int n);

/// Dense wrapped-cycle matrix (little-endian): u64 size, i64 cycle_steps,
/// then size*size row-major doubles.
void write_matrix_binary(const std::string& path, const WrappedCycleMatrix& mat);
WrappedCycleMatrix read_matrix_binary(const std::string& path);

/// Sweep table: `lambda_or_n,area1,area2,area3,height1,height2,height3,mean`.
void write_table_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// Tau grid table plus the argmax row marker.
void write_tau_table_csv(const std::string& path, const TauSweepResult& result);

void write_samples_csv(const std::string& path, const std::vector<double>& samples);

/// `bin_left,bin_right,count`.
void write_histogram_csv(const std::string& path, const std::vector<HistogramBin>& bins);

/// Minimal dependency-free SVG polyline plot of (x, y) series.
void write_svg_line_plot(const std::string& path,
                         const std::vector<std::pair<double, double>>& points, int width = 800,
                         int height = 400);

}  // namespace ratchetlab
