#include "relsense/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "relsense/error.hpp"
#include "relsense/text_io.hpp"

namespace relsense {

namespace {

double checked_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw PreconditionError(std::string(what) + " must be positive");
  }
  return value;
}

}  // namespace

Vector seeded_gray_levels(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector out(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = static_cast<double>(rng() >> 56);
  return out;
}

Vector seeded_uniform(std::size_t count, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector out(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    out(i) = lo + (hi - lo) * unit;
  }
  return out;
}

std::vector<double> default_snapshot_times(double horizon) {
  return {0.0, horizon / 32, horizon / 16, horizon / 8, horizon / 4, horizon / 2, horizon};
}

GrayscaleImage estimates_to_image(const Vector& estimates, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(estimates.size()) != rows * cols) {
    throw InvalidArgumentError("estimates_to_image: dimension mismatch");
  }
  std::vector<std::uint8_t> pixels(rows * cols);
  for (std::size_t k = 0; k < pixels.size(); ++k) {
    const double v = std::clamp(std::round(estimates(static_cast<Eigen::Index>(k))), 0.0, 255.0);
    pixels[k] = static_cast<std::uint8_t>(v);
  }
  return GrayscaleImage(rows, cols, std::move(pixels));
}

ImageExperimentResult run_image_experiment(const ImageExperimentSpec& spec) {
  const GrayscaleImage& image = spec.image;
  const std::size_t n = image.size();
  checked_positive(spec.weight, "image experiment: weight");
  checked_positive(spec.anchor_gain, "image experiment: anchor gain");

  Vector x0(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) x0(static_cast<Eigen::Index>(k)) = image.pixels()[k];

  ObserverConfig cfg{make_grid(image.rows(), image.cols()).with_uniform_weight(spec.weight),
                     n - 1, spec.anchor_gain,
                     spec.initial_estimates ? *spec.initial_estimates
                                            : seeded_gray_levels(n, spec.seed)};
  cfg.validate();

  ImageExperimentResult result;
  result.agents = n;
  result.lambda_max = error_matrix_spectral_bound(cfg);
  if (spec.horizon) {
    result.horizon = checked_positive(*spec.horizon, "image experiment: T");
    result.lambda_min = n <= kDenseSpectrumLimit ? error_decay_rate(cfg) : 0.0;
  } else {
    if (n > kDenseSpectrumLimit) {
      throw PreconditionError(
          "image experiment: images above 2048 pixels need an explicit horizon T");
    }
    result.lambda_min = verify_positive_definite(cfg, Tolerance{});
    result.horizon = 12.0 / result.lambda_min;
  }
  result.dt = spec.dt ? checked_positive(*spec.dt, "image experiment: dt")
                      : 1.8 / result.lambda_max;
  result.dt = std::min(result.dt, result.horizon);

  std::vector<double> snapshots =
      spec.snapshot_times ? *spec.snapshot_times : default_snapshot_times(result.horizon);
  std::sort(snapshots.begin(), snapshots.end());
  for (double s : snapshots) {
    if (!(s >= 0.0) || s > result.horizon * (1.0 + 1e-12)) {
      throw PreconditionError("image experiment: snapshot times must lie in [0, T]");
    }
  }

  ObserverSimulator sim(make_constant_plant(x0), cfg, result.dt);
  const double T = result.horizon;
  const double slack = 1e-12 * T;
  double t = 0.0;
  result.times.push_back(0.0);
  result.error_norms.push_back(sim.error_norm());

  auto capture = [&]() {
    result.frames.push_back({t, estimates_to_image(sim.estimate(), image.rows(), image.cols())});
  };
  auto advance_to = [&](double target) {
    while (target - t > slack) {
      const double h = std::min(result.dt, target - t);
      sim.step(h);
      t = (target - (t + h) <= slack) ? target : t + h;
      result.times.push_back(t);
      result.error_norms.push_back(sim.error_norm());
    }
  };
  for (double s : snapshots) {
    advance_to(std::min(s, T));
    capture();
  }
  advance_to(T);

  result.final_estimates = sim.estimate();
  result.reconstruction = estimates_to_image(sim.estimate(), image.rows(), image.cols());
  result.exact = result.reconstruction == image;
  return result;
}

void write_image_experiment(const ImageExperimentResult& result,
                            const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  std::string index = "index,t,file\n";
  for (std::size_t k = 0; k < result.frames.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%02zu.pgm", k);
    save_image(result.frames[k].image, out_dir / name);
    index += std::to_string(k) + "," + format_real(result.frames[k].time) + "," + name + "\n";
  }
  write_text_file(out_dir / "frames.csv", index);

  std::string errors = "t,err_norm\n";
  for (std::size_t k = 0; k < result.times.size(); ++k) {
    errors += format_real(result.times[k]) + "," + format_real(result.error_norms[k]) + "\n";
  }
  write_text_file(out_dir / "error.csv", errors);
  save_image(result.reconstruction, out_dir / "reconstruction.pgm");
}

TrackingExperimentResult run_tracking_experiment(const TrackingExperimentSpec& spec) {
  if (spec.agents < 2) {
    throw PreconditionError("tracking experiment: need at least 2 agents");
  }
  checked_positive(spec.weight, "tracking experiment: weight");
  checked_positive(spec.anchor_gain, "tracking experiment: anchor gain");
  const std::size_t n = spec.agents;
  const Vector x0 = spec.initial_state ? *spec.initial_state : seeded_uniform(n, -1.0, 1.0, spec.seed);
  const Vector xhat0 =
      spec.initial_estimates ? *spec.initial_estimates : Vector(Vector::Zero(static_cast<Eigen::Index>(n)));
  if (static_cast<std::size_t>(x0.size()) != n) {
    throw PreconditionError("tracking experiment: initial state dimension differs from agent count");
  }

  // Two agents: the cycle collapses onto its single edge.
  const Graph ring = n == 2 ? make_path(2) : make_cycle(n);
  ObserverConfig cfg{ring.with_uniform_weight(spec.weight), spec.anchor.value_or(n - 1),
                     spec.anchor_gain, xhat0};
  cfg.validate();

  TrackingExperimentResult result;
  result.lambda_max = error_matrix_spectral_bound(cfg);
  result.lambda_min = verify_positive_definite(cfg, Tolerance{});
  result.horizon = spec.horizon ? checked_positive(*spec.horizon, "tracking experiment: T")
                                : 10.0 / result.lambda_min;
  result.dt = spec.dt ? checked_positive(*spec.dt, "tracking experiment: dt")
                      : 1.8 / result.lambda_max;
  result.dt = std::min(result.dt, result.horizon);

  const double amplitude = spec.amplitude;
  const double frequency = spec.frequency;
  const double gain = spec.control_gain;
  Plant plant{[=](double t, const Vector& x) {
                const double reference = amplitude * std::sin(frequency * t);
                return Vector(-gain * (x.array() - reference));
              },
              x0};
  SimulationOptions options;
  options.record_every = spec.record_every;
  result.trace = simulate(plant, cfg, result.dt, result.horizon, options);
  return result;
}

std::string trace_to_csv(const SimulationTrace& trace) {
  const std::size_t n = trace.states.empty() ? 0 : static_cast<std::size_t>(trace.states[0].size());
  std::string out = "t";
  for (std::size_t i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) out += ",xhat_" + std::to_string(i);
  out += ",err_norm\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    out += format_real(trace.times[k]);
    for (Eigen::Index i = 0; i < trace.states[k].size(); ++i) {
      out += "," + format_real(trace.states[k](i));
    }
    for (Eigen::Index i = 0; i < trace.estimates[k].size(); ++i) {
      out += "," + format_real(trace.estimates[k](i));
    }
    out += "," + format_real(trace.error_norms[k]) + "\n";
  }
  return out;
}

}  // namespace relsense
