#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relsense/observer.hpp"
#include "relsense/pgm.hpp"

namespace relsense {

// ---- image-grid reconstruction ---------------------------------------------

/// Every pixel is an agent with constant value (u = 0); relative measurements
/// run along the 4-neighborhood grid and the last pixel (row-major) is the
/// anchor.
struct ImageExperimentSpec {
  GrayscaleImage image{1, 1};
  double weight = 1000.0;       // uniform edge gain
  double anchor_gain = 1000.0;  // K
  std::optional<double> dt;       // default 1.8 / lambda_max
  std::optional<double> horizon;  // default 12 / lambda_min
  std::uint64_t seed = 42;
  std::optional<std::vector<double>> snapshot_times;  // default {0, T/32, ..., T/2, T}
  std::optional<Vector> initial_estimates;  // overrides the seeded draw
};

struct ImageFrame {
  double time = 0.0;
  GrayscaleImage image{1, 1};
};

struct ImageExperimentResult {
  std::size_t agents = 0;
  double dt = 0.0;
  double horizon = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::vector<ImageFrame> frames;
  std::vector<double> times;        // every integration step, starting at 0
  std::vector<double> error_norms;  // ||x - xhat|| at `times`
  Vector final_estimates;
  GrayscaleImage reconstruction{1, 1};
  bool exact = false;  // reconstruction == source image
};

ImageExperimentResult run_image_experiment(const ImageExperimentSpec& spec);

/// frame_XX.pgm (P5), frames.csv (index,t,file), error.csv (t,err_norm).
void write_image_experiment(const ImageExperimentResult& result,
                            const std::filesystem::path& out_dir);

/// Estimates rounded to the nearest gray level and clamped to [0, 255].
GrayscaleImage estimates_to_image(const Vector& estimates, std::size_t rows, std::size_t cols);

/// Uniform integer draws in [0, 255] from a 64-bit Mersenne Twister (top
/// eight bits of each output), so the sequence is fixed by the seed alone.
Vector seeded_gray_levels(std::size_t count, std::uint64_t seed);

/// Uniform reals in [lo, hi) from the same generator (53-bit mantissa draw).
Vector seeded_uniform(std::size_t count, double lo, double hi, std::uint64_t seed);

std::vector<double> default_snapshot_times(double horizon);

// ---- sinusoid tracking -----------------------------------------------------

/// u_i = -control_gain (x_i - amplitude sin(frequency t)) on a cycle graph.
struct TrackingExperimentSpec {
  std::size_t agents = 10;
  double weight = 1.0;
  double anchor_gain = 100.0;
  double amplitude = 2.0;
  double frequency = 5.0;
  double control_gain = 30.0;
  std::optional<std::size_t> anchor;  // 0-based, default the last agent
  std::optional<double> dt;           // default 1.8 / lambda_max
  std::optional<double> horizon;      // default 10 / lambda_min
  std::uint64_t seed = 42;
  std::optional<Vector> initial_state;      // default seeded uniform in [-1, 1)
  std::optional<Vector> initial_estimates;  // default zero
  std::size_t record_every = 1;
};

struct TrackingExperimentResult {
  double dt = 0.0;
  double horizon = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  SimulationTrace trace;
};

TrackingExperimentResult run_tracking_experiment(const TrackingExperimentSpec& spec);

/// Header `t,x_1..x_n,xhat_1..xhat_n,err_norm`; values with 17 significant digits.
std::string trace_to_csv(const SimulationTrace& trace);

}  // namespace relsense
