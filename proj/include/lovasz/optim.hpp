#pragma once

#include <array>
#include <stdexcept>

#include "lovasz/types.hpp"

namespace lsv {

/// Polynomially decaying learning rate: lr_base * (1 - k/max_iter)^power.
struct LRSchedule {
  double lr_base = 0.0;
  long max_iter = 0;
  double power = 0.9;
};

double poly_lr(const LRSchedule& sched, long k);

/// Momentum buffer v and step counter for first-order training.
struct MomentumState {
  std::vector<double> velocity;
  long step_count = 0;
};

/// One momentum update: v <- alpha*v + grad, returns the parameter delta
/// -eta*v. alpha = 0 recovers plain gradient descent.
std::vector<double> momentum_step(MomentumState& state, const std::vector<double>& grad,
                                  double eta, double alpha);

/// Configuration of the proximal operator: argmin_u ext(u) + (lambda/2)|u - m0|^2
/// restricted to the nonnegative orthant of margin space.
struct ProxConfig {
  double lambda = 1.0;
  int max_pieces = 0;  // 0 -> default 2p+1 edge traversals
  double tol = 1e-12;
};

/// Raised when the edge-following path exceeds its traversal budget; carries
/// the partial iterate so callers can inspect how far it got.
class ProxFailure : public std::runtime_error {
 public:
  ProxFailure(std::string msg, ErrorVector partial, int traversals)
      : std::runtime_error(std::move(msg)),
        partial_iterate(std::move(partial)),
        traversals(traversals) {}

  ErrorVector partial_iterate;
  int traversals = 0;
};

/// Proximal operator of the Jaccard-loss extension in margin space, by
/// greedy edge-following: sort once, then walk the piecewise-linear surface
/// along the projected descent direction, merging tied coordinates and
/// freezing coordinates that reach zero, until the prox stopping length
/// 1/lambda + <v - v0, g>/<g, g> is reached before the next edge.
/// When path is given, the iterate after every move is appended to it.
ErrorVector prox_lovasz_hinge(const ErrorVector& m0, const Indicator& delta,
                              const ProxConfig& cfg,
                              std::vector<ErrorVector>* path = nullptr);

/// Lovász hinge with the loss-layer gradient replaced by the proximal
/// descent direction lambda*(m - prox(m)), chained through the hinge
/// Jacobian. Upstream chain rule is unchanged. Inside a linear piece this
/// equals the plain lovasz_hinge gradient.
BinaryLossResult lovasz_hinge_prox_grad(const std::vector<double>& scores,
                                        const LabelMask& y, const ProxConfig& cfg);

/// Piecewise-linear toy objective max(0, nu*x1, x2) with a deterministic
/// subgradient (ties broken toward the 0 piece, then nu*x1).
struct ToyEval {
  double value = 0.0;
  std::array<double, 2> subgradient{0.0, 0.0};
};
ToyEval toy_piecewise_objective(const std::array<double, 2>& x, double nu);

/// Exact proximal operator of the toy objective (3-piece max in 2D), by
/// enumerating the stationarity cases of every active set.
std::array<double, 2> prox_toy(const std::array<double, 2>& x, double nu,
                               double lambda);

/// Minimizer of the toy objective within a ball of given radius around x:
/// the prox point whose regularization weight is bisected until the step
/// length matches the radius (or the smallest weight if the level set of
/// minimizers is closer than the radius).
std::array<double, 2> prox_toy_matched_step(const std::array<double, 2>& x, double nu,
                                            double radius);

/// One point of an optimization trajectory on the toy objective.
struct TrajectoryPoint {
  int step = 0;
  std::array<double, 2> x{0.0, 0.0};
  double objective = 0.0;
};

/// Trajectories on the toy objective from a fixed start; entry 0 is the
/// start point. The prox run uses lambda = 1/eta each step, which matches a
/// plain gradient step strictly inside a linear piece.
std::vector<TrajectoryPoint> run_toy_gradient_descent(const std::array<double, 2>& x0,
                                                      double nu, double eta, int steps);
std::vector<TrajectoryPoint> run_toy_momentum(const std::array<double, 2>& x0, double nu,
                                              double eta, double alpha, int steps);
std::vector<TrajectoryPoint> run_toy_prox(const std::array<double, 2>& x0, double nu,
                                          double eta, int steps);

}  // namespace lsv
