#include "relsense/observer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "relsense/error.hpp"

namespace relsense {

namespace {

// Shared body of the local observer. `relative(k)` returns y_i^j for the
// k-th neighbor of i. Written in the measured form
//   u_i - sum_j w_ij [y_i^j - (xhat_j - xhat_i)] (+ K (y_i - xhat_i))
// which equals u_i + (Lambda xtilde)_i, so that xtilde' = -Lambda xtilde.
template <typename RelativeFn>
double observer_rhs(const std::vector<Neighbor>& nbrs, std::size_t i, const double* xhat,
                    RelativeFn relative, const double* anchor_y, double gain, double input) {
  double correction = 0.0;
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    const Neighbor& nb = nbrs[k];
    correction += nb.weight * (relative(k) - (xhat[nb.vertex] - xhat[i]));
  }
  double rhs = input - correction;
  if (anchor_y != nullptr) rhs += gain * (*anchor_y - xhat[i]);
  return rhs;
}

SymmetricEigenDecomposition error_spectrum(const ObserverConfig& cfg) {
  return symmetric_eigen(build_error_matrix(cfg), Tolerance{});
}

}  // namespace

void ObserverConfig::validate() const {
  const std::size_t n = graph.vertex_count();
  if (!graph.has_weights()) throw PreconditionError("observer: graph needs edge weights");
  if (!is_connected(graph)) throw PreconditionError("observer: graph must be connected");
  if (anchor >= n) {
    std::ostringstream os;
    os << "observer: anchor " << anchor + 1 << " outside [1, " << n << "]";
    throw PreconditionError(os.str());
  }
  if (!(anchor_gain > 0.0) || !std::isfinite(anchor_gain)) {
    throw PreconditionError("observer: anchor gain K must be positive");
  }
  if (static_cast<std::size_t>(initial_estimates.size()) != n) {
    throw PreconditionError("observer: initial estimate dimension differs from agent count");
  }
  if (!initial_estimates.allFinite()) {
    throw PreconditionError("observer: initial estimates must be finite");
  }
}

Plant make_constant_plant(Vector initial_state) {
  const Eigen::Index n = initial_state.size();
  return Plant{[n](double, const Vector&) { return Vector::Zero(n); }, std::move(initial_state)};
}

Matrix build_error_matrix(const ObserverConfig& cfg) {
  Matrix lambda = cfg.graph.has_weights() ? weighted_laplacian(cfg.graph) : laplacian(cfg.graph);
  if (cfg.anchor >= cfg.graph.vertex_count()) {
    throw InvalidArgumentError("build_error_matrix: anchor out of range");
  }
  const auto a = static_cast<Eigen::Index>(cfg.anchor);
  lambda(a, a) += cfg.anchor_gain;
  return lambda;
}

double verify_positive_definite(const ObserverConfig& cfg, const Tolerance& tol) {
  tol.validate();
  const double lambda_min = symmetric_eigen(build_error_matrix(cfg), tol).eigenvalues(0);
  if (!(lambda_min > tol.zero_abs)) {
    std::ostringstream os;
    os << "observer: error matrix is not positive definite (lambda_min = " << lambda_min
       << "); check connectivity, weights and anchor gain";
    throw NumericalError(os.str());
  }
  return lambda_min;
}

double error_decay_rate(const ObserverConfig& cfg, const Tolerance& tol) {
  tol.validate();
  return symmetric_eigen(build_error_matrix(cfg), tol).eigenvalues(0);
}

double error_matrix_spectral_bound(const ObserverConfig& cfg) {
  const std::size_t n = cfg.graph.vertex_count();
  if (n <= kDenseSpectrumLimit) {
    const SymmetricEigenDecomposition eig = error_spectrum(cfg);
    return eig.eigenvalues(eig.eigenvalues.size() - 1);
  }
  std::vector<double> row(n, 0.0);
  for (std::size_t k = 0; k < cfg.graph.edge_count(); ++k) {
    row[cfg.graph.edges()[k].tail] += 2.0 * cfg.graph.weight(k);
    row[cfg.graph.edges()[k].head] += 2.0 * cfg.graph.weight(k);
  }
  row[cfg.anchor] += cfg.anchor_gain;
  return *std::max_element(row.begin(), row.end());
}

AgentNetwork::AgentNetwork(const ObserverConfig& cfg)
    : neighbors_(cfg.graph.adjacency()), anchor_(cfg.anchor), gain_(cfg.anchor_gain) {
  if (anchor_ >= neighbors_.size()) throw InvalidArgumentError("observer: anchor out of range");
}

std::vector<RelativeMeasurement> AgentNetwork::measure(std::size_t i, const Vector& x) const {
  std::vector<RelativeMeasurement> out;
  for (const Neighbor& nb : neighbors_.at(i)) {
    out.push_back({nb.vertex, x(static_cast<Eigen::Index>(nb.vertex)) -
                                  x(static_cast<Eigen::Index>(i))});
  }
  return out;
}

double AgentNetwork::agent_step(std::size_t i, std::span<const double> estimates,
                                std::span<const RelativeMeasurement> relative,
                                std::optional<double> anchor_measurement, double input) const {
  if (i >= neighbors_.size()) throw InvalidArgumentError("agent_step: agent out of range");
  if (estimates.size() != neighbors_.size()) {
    throw InvalidArgumentError("agent_step: estimate vector has the wrong dimension");
  }
  const auto& nbrs = neighbors_[i];
  if (relative.size() != nbrs.size()) {
    std::ostringstream os;
    os << "agent_step: agent " << i + 1 << " has " << nbrs.size() << " neighbors but "
       << relative.size() << " relative measurements were supplied";
    throw InvalidArgumentError(os.str());
  }
  // Line measurements up with the neighbor list; each neighbor exactly once.
  std::vector<const RelativeMeasurement*> ordered(nbrs.size(), nullptr);
  for (const RelativeMeasurement& m : relative) {
    auto it = std::find_if(nbrs.begin(), nbrs.end(),
                           [&](const Neighbor& nb) { return nb.vertex == m.neighbor; });
    if (it == nbrs.end()) {
      std::ostringstream os;
      os << "agent_step: vertex " << m.neighbor + 1 << " is not a neighbor of agent " << i + 1;
      throw InvalidArgumentError(os.str());
    }
    auto& slot = ordered[static_cast<std::size_t>(it - nbrs.begin())];
    if (slot != nullptr) {
      throw InvalidArgumentError("agent_step: duplicate measurement for one neighbor");
    }
    slot = &m;
  }
  const bool is_anchor = i == anchor_;
  if (is_anchor != anchor_measurement.has_value()) {
    throw InvalidArgumentError(is_anchor ? "agent_step: anchor agent needs its absolute measurement"
                                         : "agent_step: only the anchor agent has an absolute "
                                           "measurement");
  }
  const double* y_anchor = anchor_measurement ? &*anchor_measurement : nullptr;
  return observer_rhs(
      nbrs, i, estimates.data(), [&](std::size_t k) { return ordered[k]->value; }, y_anchor,
      gain_, input);
}

double AgentNetwork::local_rhs(std::size_t i, const double* xhat, const double* x,
                               double input) const {
  const auto& nbrs = neighbors_[i];
  // Sensor readings: relative on every edge, absolute at the anchor.
  const auto relative = [&](std::size_t k) { return x[nbrs[k].vertex] - x[i]; };
  const double* y_anchor = i == anchor_ ? &x[i] : nullptr;
  return observer_rhs(nbrs, i, xhat, relative, y_anchor, gain_, input);
}

void AgentNetwork::estimate_derivative(const Vector& x, const Vector& xhat, const Vector& u,
                                       Vector& out) const {
  const std::size_t n = neighbors_.size();
  out.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    out(static_cast<Eigen::Index>(i)) =
        local_rhs(i, xhat.data(), x.data(), u(static_cast<Eigen::Index>(i)));
  }
}

ObserverSimulator::ObserverSimulator(Plant plant, const ObserverConfig& cfg, double dt,
                                     const SimulationOptions& options)
    : plant_(std::move(plant)), network_(cfg), dt_(dt) {
  if (options.validate_config) cfg.validate();
  const std::size_t n = cfg.graph.vertex_count();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("simulate: dt must be positive");
  if (!plant_.input_law) throw PreconditionError("simulate: plant has no input law");
  if (static_cast<std::size_t>(plant_.initial_state.size()) != n ||
      static_cast<std::size_t>(cfg.initial_estimates.size()) != n) {
    throw PreconditionError("simulate: plant, estimate and graph dimensions differ");
  }
  lambda_max_ = error_matrix_spectral_bound(cfg);
  if (dt * lambda_max_ >= kRk4StabilityLimit) {
    std::ostringstream os;
    os.precision(17);
    os << "simulate: dt * lambda_max = " << dt * lambda_max_ << " violates the RK4 bound "
       << kRk4StabilityLimit << "; use dt < " << kRk4StabilityLimit / lambda_max_;
    throw PreconditionError(os.str());
  }
  x_ = plant_.initial_state;
  xhat_ = cfg.initial_estimates;
}

void ObserverSimulator::derivatives(double t, const Vector& x, const Vector& xhat, Vector& dx,
                                    Vector& dxhat) const {
  dx = plant_.input_law(t, x);
  if (dx.size() != x.size() || !dx.allFinite()) {
    std::ostringstream os;
    os.precision(17);
    os << "simulate: input law returned an invalid vector at t = " << t;
    throw NumericalError(os.str());
  }
  network_.estimate_derivative(x, xhat, dx, dxhat);
}

void ObserverSimulator::step(double h) {
  if (!(h > 0.0) || h > dt_ * (1.0 + 1e-12)) {
    throw InvalidArgumentError("simulate: step must lie in (0, dt]");
  }
  Vector k1x, k1e, k2x, k2e, k3x, k3e, k4x, k4e;
  derivatives(t_, x_, xhat_, k1x, k1e);
  derivatives(t_ + 0.5 * h, x_ + 0.5 * h * k1x, xhat_ + 0.5 * h * k1e, k2x, k2e);
  derivatives(t_ + 0.5 * h, x_ + 0.5 * h * k2x, xhat_ + 0.5 * h * k2e, k3x, k3e);
  derivatives(t_ + h, x_ + h * k3x, xhat_ + h * k3e, k4x, k4e);
  x_ += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  xhat_ += (h / 6.0) * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
  t_ += h;
  if (!x_.allFinite() || !xhat_.allFinite()) {
    std::ostringstream os;
    os.precision(17);
    os << "simulate: non-finite state at t = " << t_;
    throw NumericalError(os.str());
  }
}

SimulationTrace simulate(const Plant& plant, const ObserverConfig& cfg, double dt, double T,
                         const SimulationOptions& options) {
  if (!(dt > 0.0) || !std::isfinite(T) || T < dt) {
    throw PreconditionError("simulate: need dt > 0 and T >= dt");
  }
  if (options.record_every == 0) throw InvalidArgumentError("simulate: record_every must be >= 1");
  ObserverSimulator sim(plant, cfg, dt, options);

  const auto full_steps = static_cast<std::size_t>(std::floor(T / dt + 1e-9));
  const double tail = T - static_cast<double>(full_steps) * dt;
  const bool partial = tail > 1e-12 * T;
  const std::size_t total = full_steps + (partial ? 1 : 0);

  SimulationTrace trace;
  auto record = [&](double t) {
    trace.times.push_back(t);
    trace.states.push_back(sim.state());
    trace.estimates.push_back(sim.estimate());
    trace.error_norms.push_back(sim.error_norm());
  };
  record(0.0);
  for (std::size_t k = 1; k <= total; ++k) {
    const bool last = k == total;
    sim.step(k <= full_steps ? dt : tail);
    if (last || k % options.record_every == 0) {
      record(k <= full_steps ? static_cast<double>(k) * dt : T);
    }
  }
  return trace;
}

}  // namespace relsense
