#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "relsense/graph.hpp"
#include "relsense/linalg.hpp"

namespace relsense {

/// Distributed observer for the single-integrator network x_i' = u_i, with
/// relative measurements on the edges of `graph` and one absolute (anchor)
/// measurement at `anchor`.
struct ObserverConfig {
  Graph graph;                // edge weights are the observer gains w_ij
  std::size_t anchor = 0;     // 0-based
  double anchor_gain = 1.0;   // K
  Vector initial_estimates;   // xhat(0)

  /// Connected graph, positive weights, anchor in range, K > 0, matching
  /// initial estimate dimension. Throws PreconditionError otherwise.
  void validate() const;
};

struct Plant {
  using InputLaw = std::function<Vector(double t, const Vector& x)>;

  InputLaw input_law;
  Vector initial_state;
};

/// u = 0: agent values stay at their initial condition.
Plant make_constant_plant(Vector initial_state);

struct SimulationTrace {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> estimates;
  std::vector<double> error_norms;  // ||states[k] - estimates[k]||
};

/// Lambda = L_w + K Delta_anchor, the state matrix of the error dynamics
/// xtilde' = -Lambda xtilde.
Matrix build_error_matrix(const ObserverConfig& cfg);

/// Smallest eigenvalue of Lambda. Throws NumericalError when it does not
/// exceed zero_abs.
double verify_positive_definite(const ObserverConfig& cfg, const Tolerance& tol);

/// lambda_min(Lambda): ||xtilde(t)|| <= ||xtilde(0)|| exp(-lambda_min t).
double error_decay_rate(const ObserverConfig& cfg, const Tolerance& tol = {});

/// Exact lambda_max(Lambda) up to kDenseSpectrumLimit agents, otherwise the
/// Gershgorin upper bound max_i (2 sum_j w_ij + K [i == anchor]).
double error_matrix_spectral_bound(const ObserverConfig& cfg);

inline constexpr std::size_t kDenseSpectrumLimit = 2048;

/// RK4 is applied only when dt * lambda_max(Lambda) stays below this.
inline constexpr double kRk4StabilityLimit = 2.5;

/// y_i^j = x_j - x_i as seen by agent i.
struct RelativeMeasurement {
  std::size_t neighbor = 0;
  double value = 0.0;
};

/// Per-agent view of the observer: who talks to whom, with which gain.
class AgentNetwork {
 public:
  explicit AgentNetwork(const ObserverConfig& cfg);

  std::size_t agent_count() const noexcept { return neighbors_.size(); }
  std::size_t anchor() const noexcept { return anchor_; }
  double anchor_gain() const noexcept { return gain_; }
  const std::vector<Neighbor>& neighbors(std::size_t i) const { return neighbors_.at(i); }

  /// Relative measurements agent i takes of the plant state x.
  std::vector<RelativeMeasurement> measure(std::size_t i, const Vector& x) const;

  /// Right-hand side of agent i's observer:
  ///   u_i - sum_j w_ij [y_i^j - (xhat_j - xhat_i)] + K (y_anchor - xhat_i)
  /// where the last term is present only at the anchor. The inputs are
  /// exactly what agent i has locally: its input, its neighbors' estimates
  /// and its own, the relative measurements on its edges, and (anchor only)
  /// the absolute measurement. Throws InvalidArgumentError if a neighbor's
  /// measurement is missing or extra, or if the anchor measurement is
  /// supplied to (or withheld from) the wrong agent.
  double agent_step(std::size_t i, std::span<const double> estimates,
                    std::span<const RelativeMeasurement> relative,
                    std::optional<double> anchor_measurement, double input) const;

  /// All agents at one synchronous time level: every agent reads the same
  /// snapshot of x and xhat.
  void estimate_derivative(const Vector& x, const Vector& xhat, const Vector& u,
                           Vector& out) const;

 private:
  double local_rhs(std::size_t i, const double* xhat, const double* x, double input) const;

  std::vector<std::vector<Neighbor>> neighbors_;
  std::size_t anchor_;
  double gain_;
};

struct SimulationOptions {
  std::size_t record_every = 1;  // trace decimation; the last step is always kept
  bool validate_config = true;   // tests switch this off to probe K = 0 etc.
};

/// Fixed-step classical RK4 co-integration of plant and observer.
class ObserverSimulator {
 public:
  ObserverSimulator(Plant plant, const ObserverConfig& cfg, double dt,
                    const SimulationOptions& options = {});

  /// Advances by h (0 < h <= dt). Throws NumericalError on non-finite state.
  void step(double h);

  double time() const noexcept { return t_; }
  double dt() const noexcept { return dt_; }
  const Vector& state() const noexcept { return x_; }
  const Vector& estimate() const noexcept { return xhat_; }
  double error_norm() const { return (x_ - xhat_).norm(); }
  double spectral_bound() const noexcept { return lambda_max_; }

 private:
  void derivatives(double t, const Vector& x, const Vector& xhat, Vector& dx,
                   Vector& dxhat) const;

  Plant plant_;
  AgentNetwork network_;
  double dt_;
  double lambda_max_;
  double t_ = 0.0;
  Vector x_;
  Vector xhat_;
};

/// Runs from t = 0 to T with step dt (the final step is shortened if dt does
/// not divide T).
SimulationTrace simulate(const Plant& plant, const ObserverConfig& cfg, double dt, double T,
                         const SimulationOptions& options = {});

}  // namespace relsense
