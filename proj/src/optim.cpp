#include "lovasz/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lovasz/jaccard.hpp"
#include "lovasz/submodular.hpp"

namespace lsv {

double poly_lr(const LRSchedule& sched, long k) {
  require(sched.lr_base > 0.0, "poly_lr: lr_base must be positive");
  require(sched.max_iter > 0, "poly_lr: max_iter must be positive");
  require(sched.power > 0.0, "poly_lr: power must be positive");
  require(k >= 0 && k <= sched.max_iter, "poly_lr: iteration out of range");
  const double frac = 1.0 - static_cast<double>(k) / static_cast<double>(sched.max_iter);
  return sched.lr_base * std::pow(frac, sched.power);
}

std::vector<double> momentum_step(MomentumState& state, const std::vector<double>& grad,
                                  double eta, double alpha) {
  if (state.velocity.empty()) state.velocity.assign(grad.size(), 0.0);
  require(state.velocity.size() == grad.size(), "momentum_step: shape mismatch");
  std::vector<double> delta(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    state.velocity[i] = alpha * state.velocity[i] + grad[i];
    delta[i] = -eta * state.velocity[i];
  }
  state.step_count += 1;
  return delta;
}

namespace {

// Maximal run of equal values, moved as one block along the path. Frozen
// blocks sit at zero and no longer move.
struct ProxBlock {
  double value = 0.0;
  double m0_sum = 0.0;
  int count = 0;
  int fg_count = 0;
  bool frozen = false;
  std::vector<int> elems;  // original indices
};

// Jaccard value of a misprediction prefix with the given composition.
double prefix_jaccard(int mis, int bg, double total_fg) {
  if (mis == 0) return 0.0;
  return static_cast<double>(mis) / (total_fg + static_cast<double>(bg));
}

// Mean extension marginal of a block placed after a given prefix; the sum is
// a difference of prefix values, so it does not depend on internal order.
double block_rate(int mis_before, int bg_before, int count, int fg_count,
                  double total_fg) {
  const double before = prefix_jaccard(mis_before, bg_before, total_fg);
  const double after = prefix_jaccard(mis_before + count,
                                      bg_before + (count - fg_count), total_fg);
  return (after - before) / count;
}

struct PoolContext {
  const ErrorVector& m0;
  const Indicator& delta;
  double total_fg;
  double lambda;
  double tol;
};

// Stable chain decomposition of a tied pool: repeatedly peel off the upper
// part U maximizing target(U) - target(rest), where target is the per-block
// face minimizer mean(m0) - rate/lambda. For a fixed foreground/background
// composition the best U takes the largest-m0 elements of each kind, so only
// O(count^2) splits need scoring. A pool with no positive-gap split is a
// stable tie and moves as one block.
void resolve_pool(const PoolContext& ctx, ProxBlock pool, int mis_before,
                  int bg_before, std::vector<ProxBlock>& out) {
  if (pool.count <= 1 || pool.frozen) {
    out.push_back(std::move(pool));
    return;
  }
  auto by_m0_desc = [&](int a, int b) {
    const double ma = ctx.m0[static_cast<std::size_t>(a)];
    const double mb = ctx.m0[static_cast<std::size_t>(b)];
    return ma != mb ? ma > mb : a < b;
  };
  std::vector<int> fg, bg;
  for (int e : pool.elems)
    (ctx.delta[static_cast<std::size_t>(e)] ? fg : bg).push_back(e);
  std::sort(fg.begin(), fg.end(), by_m0_desc);
  std::sort(bg.begin(), bg.end(), by_m0_desc);
  std::vector<double> fg_pref{0.0}, bg_pref{0.0};
  for (int e : fg) fg_pref.push_back(fg_pref.back() + ctx.m0[static_cast<std::size_t>(e)]);
  for (int e : bg) bg_pref.push_back(bg_pref.back() + ctx.m0[static_cast<std::size_t>(e)]);

  const int nf = static_cast<int>(fg.size());
  const int nb = static_cast<int>(bg.size());
  double best_gap = ctx.tol;
  int best_kf = -1, best_kb = -1;
  for (int kf = 0; kf <= nf; ++kf)
    for (int kb = 0; kb <= nb; ++kb) {
      const int k = kf + kb;
      if (k == 0 || k == pool.count) continue;
      const double rate_u =
          block_rate(mis_before, bg_before, k, kf, ctx.total_fg);
      const double rate_l = block_rate(mis_before + k, bg_before + kb,
                                       pool.count - k, nf - kf, ctx.total_fg);
      const double mean_u = (fg_pref[static_cast<std::size_t>(kf)] +
                             bg_pref[static_cast<std::size_t>(kb)]) / k;
      const double mean_l = (pool.m0_sum - fg_pref[static_cast<std::size_t>(kf)] -
                             bg_pref[static_cast<std::size_t>(kb)]) /
                            (pool.count - k);
      const double gap = (mean_u - rate_u / ctx.lambda) - (mean_l - rate_l / ctx.lambda);
      if (gap > best_gap) {
        best_gap = gap;
        best_kf = kf;
        best_kb = kb;
      }
    }
  if (best_kf < 0) {
    out.push_back(std::move(pool));
    return;
  }

  ProxBlock upper, lower;
  upper.value = lower.value = pool.value;
  for (int i = 0; i < nf; ++i) {
    ProxBlock& dst = i < best_kf ? upper : lower;
    dst.elems.push_back(fg[static_cast<std::size_t>(i)]);
    dst.m0_sum += ctx.m0[static_cast<std::size_t>(fg[static_cast<std::size_t>(i)])];
    dst.count += 1;
    dst.fg_count += 1;
  }
  for (int i = 0; i < nb; ++i) {
    ProxBlock& dst = i < best_kb ? upper : lower;
    dst.elems.push_back(bg[static_cast<std::size_t>(i)]);
    dst.m0_sum += ctx.m0[static_cast<std::size_t>(bg[static_cast<std::size_t>(i)])];
    dst.count += 1;
  }
  resolve_pool(ctx, std::move(upper), mis_before, bg_before, out);
  resolve_pool(ctx, std::move(lower), mis_before + best_kf + best_kb,
               bg_before + best_kb, out);
}

}  // namespace

ErrorVector prox_lovasz_hinge(const ErrorVector& m0, const Indicator& delta,
                              const ProxConfig& cfg,
                              std::vector<ErrorVector>* path) {
  const std::size_t p = delta.size();
  require(p >= 1, "prox_lovasz_hinge: empty ground set");
  require(m0.size() == p, "prox_lovasz_hinge: dimension mismatch");
  require(cfg.lambda > 0.0, "prox_lovasz_hinge: lambda must be positive");
  require(cfg.tol > 0.0, "prox_lovasz_hinge: tol must be positive");
  for (double v : m0) {
    require(std::isfinite(v), "prox_lovasz_hinge: margins must be finite");
    require(v >= 0.0, "prox_lovasz_hinge: margins must be nonnegative");
  }
  const int max_pieces = cfg.max_pieces > 0 ? cfg.max_pieces : 2 * static_cast<int>(p) + 1;

  const Permutation perm = decreasing_sort_permutation(m0);
  double total_fg = 0.0;
  for (auto d : delta) total_fg += d;
  const PoolContext ctx{m0, delta, total_fg, cfg.lambda, cfg.tol};

  // Initial structure: maximal runs of equal sorted margins, decomposed into
  // stable sub-blocks; zeros start frozen.
  std::vector<ProxBlock> blocks;
  {
    std::vector<ProxBlock> runs;
    for (std::size_t i = 0; i < p; ++i) {
      const int e = perm.order[i];
      const double v = m0[static_cast<std::size_t>(e)];
      if (runs.empty() || runs.back().value != v)
        runs.push_back({v, 0.0, 0, 0, v <= 0.0, {}});
      ProxBlock& blk = runs.back();
      blk.m0_sum += v;
      blk.count += 1;
      blk.fg_count += delta[static_cast<std::size_t>(e)];
      blk.elems.push_back(e);
    }
    int mis = 0, bg = 0;
    for (auto& run : runs) {
      const int run_count = run.count;
      const int run_fg = run.fg_count;
      resolve_pool(ctx, std::move(run), mis, bg, blocks);
      mis += run_count;
      bg += run_count - run_fg;
    }
  }

  auto unsorted_result = [&] {
    ErrorVector result(p);
    for (const auto& blk : blocks)
      for (int e : blk.elems) result[static_cast<std::size_t>(e)] = blk.value;
    return result;
  };

  int traversals = 0;
  for (;;) {
    // Per-block rate in the current order and the closed-form minimizer of
    // the (quadratic) prox objective on the current face:
    // y_j* = mean(m0 over block) - rate_j / lambda, frozen blocks pinned at 0.
    const std::size_t nb_blocks = blocks.size();
    std::vector<double> target(nb_blocks, 0.0);
    {
      int mis = 0, bg = 0;
      for (std::size_t j = 0; j < nb_blocks; ++j) {
        const ProxBlock& blk = blocks[j];
        const double rate = block_rate(mis, bg, blk.count, blk.fg_count, total_fg);
        mis += blk.count;
        bg += blk.count - blk.fg_count;
        target[j] = blk.frozen ? 0.0 : blk.m0_sum / blk.count - rate / cfg.lambda;
      }
    }

    // First boundary on the segment toward the face minimizer: an adjacent
    // pair meeting, or a block reaching zero.
    double t_event = 1.0;
    enum class Event { kNone, kMeet, kZero } kind = Event::kNone;
    std::size_t where = 0;
    for (std::size_t j = 0; j + 1 < nb_blocks; ++j) {
      const double gap_now = blocks[j].value - blocks[j + 1].value;
      const double gap_end = target[j] - target[j + 1];
      if (gap_end < -cfg.tol && gap_now - gap_end > 0.0) {
        const double t = std::max(gap_now, 0.0) / (gap_now - gap_end);
        if (t < t_event) {
          t_event = t;
          kind = Event::kMeet;
          where = j;
        }
      }
    }
    for (std::size_t j = 0; j < nb_blocks; ++j) {
      if (blocks[j].frozen || target[j] >= 0.0) continue;
      const double t = blocks[j].value / (blocks[j].value - target[j]);
      if (t < t_event) {
        t_event = t;
        kind = Event::kZero;
        where = j;
      }
    }

    for (std::size_t j = 0; j < nb_blocks; ++j)
      blocks[j].value =
          std::max(blocks[j].value + t_event * (target[j] - blocks[j].value), 0.0);
    if (path) path->push_back(unsorted_result());
    if (kind == Event::kNone) break;  // landed on the face minimizer

    if (++traversals > max_pieces)
      throw ProxFailure("prox_lovasz_hinge: exceeded max_pieces edge traversals",
                        unsorted_result(), traversals - 1);

    if (kind == Event::kZero || blocks[where + 1].frozen) {
      blocks[where].value = 0.0;
      blocks[where].frozen = true;
    } else {
      // Merge the meeting pair into one pool, then decompose it into its
      // stable sub-blocks; a full split back is a crossing into the adjacent
      // linear piece, a partial one interleaves the tied elements.
      ProxBlock pool = std::move(blocks[where]);
      const ProxBlock& other = blocks[where + 1];
      pool.value = 0.5 * (pool.value + other.value);
      pool.m0_sum += other.m0_sum;
      pool.count += other.count;
      pool.fg_count += other.fg_count;
      pool.elems.insert(pool.elems.end(), other.elems.begin(), other.elems.end());
      int mis = 0, bg = 0;
      for (std::size_t j = 0; j < where; ++j) {
        mis += blocks[j].count;
        bg += blocks[j].count - blocks[j].fg_count;
      }
      std::vector<ProxBlock> resolved;
      resolve_pool(ctx, std::move(pool), mis, bg, resolved);
      blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(where),
                   blocks.begin() + static_cast<std::ptrdiff_t>(where) + 2);
      blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(where),
                    std::make_move_iterator(resolved.begin()),
                    std::make_move_iterator(resolved.end()));
    }
    // Keep at most one trailing frozen block.
    while (blocks.size() >= 2 && blocks[blocks.size() - 2].frozen &&
           blocks.back().frozen) {
      ProxBlock& into = blocks[blocks.size() - 2];
      ProxBlock& from = blocks.back();
      into.m0_sum += from.m0_sum;
      into.count += from.count;
      into.fg_count += from.fg_count;
      into.elems.insert(into.elems.end(), from.elems.begin(), from.elems.end());
      blocks.pop_back();
    }
  }
  return unsorted_result();
}

BinaryLossResult lovasz_hinge_prox_grad(const std::vector<double>& scores,
                                        const LabelMask& y, const ProxConfig& cfg) {
  const HingeMargins hm = hinge_margins(scores, y);
  Indicator delta(y.size(), 0);
  for (std::size_t i = 0; i < y.size(); ++i) delta[i] = (y[i] == 1) ? 1 : 0;

  const ExtensionResult ext = jaccard_grad(hm.m, delta);
  const ErrorVector prox = prox_lovasz_hinge(hm.m, delta, cfg);

  BinaryLossResult out;
  out.value = ext.value;
  out.grad.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out.grad[i] = cfg.lambda * (hm.m[i] - prox[i]) * hm.dm_dF[i];
  return out;
}

ToyEval toy_piecewise_objective(const std::array<double, 2>& x, double nu) {
  require(nu > 0.0, "toy_piecewise_objective: nu must be positive");
  ToyEval out;
  const double piece1 = nu * x[0];
  const double piece2 = x[1];
  out.value = std::max({0.0, piece1, piece2});
  if (out.value == 0.0) {
    out.subgradient = {0.0, 0.0};
  } else if (piece1 == out.value) {
    out.subgradient = {nu, 0.0};
  } else {
    out.subgradient = {0.0, 1.0};
  }
  return out;
}

std::array<double, 2> prox_toy(const std::array<double, 2>& x, double nu,
                               double lambda) {
  require(nu > 0.0, "prox_toy: nu must be positive");
  require(lambda > 0.0, "prox_toy: lambda must be positive");

  const auto objective = [&](const std::array<double, 2>& u) {
    const double f = std::max({0.0, nu * u[0], u[1]});
    const double dx = u[0] - x[0];
    const double dy = u[1] - x[1];
    return f + 0.5 * lambda * (dx * dx + dy * dy);
  };

  // Stationarity candidates for every active set of {0, nu*x1, x2}; the true
  // prox point is always among them.
  std::vector<std::array<double, 2>> candidates;
  candidates.push_back(x);                              // {0}
  candidates.push_back({x[0] - nu / lambda, x[1]});     // {nu*x1}
  candidates.push_back({x[0], x[1] - 1.0 / lambda});    // {x2}
  candidates.push_back({0.0, x[1]});                    // {0, nu*x1}
  candidates.push_back({x[0], 0.0});                    // {0, x2}
  candidates.push_back({0.0, 0.0});                     // {0, nu*x1, x2}
  {
    // {nu*x1, x2}: common value nu*u1 = u2 with the subgradient a convex
    // combination theta*(nu,0) + (1-theta)*(0,1).
    double theta = (lambda * (nu * x[0] - x[1]) + 1.0) / (nu * nu + 1.0);
    theta = std::clamp(theta, 0.0, 1.0);
    candidates.push_back({x[0] - theta * nu / lambda,
                          x[1] - (1.0 - theta) / lambda});
  }

  std::array<double, 2> best = x;
  double best_val = objective(x);
  for (const auto& candidate : candidates) {
    const double val = objective(candidate);
    if (val < best_val) {
      best_val = val;
      best = candidate;
    }
  }
  return best;
}

std::array<double, 2> prox_toy_matched_step(const std::array<double, 2>& x, double nu,
                                            double radius) {
  require(radius >= 0.0, "prox_toy_matched_step: radius must be nonnegative");
  if (radius == 0.0) return x;

  const auto step_len = [&](double lambda) {
    const auto u = prox_toy(x, nu, lambda);
    return std::hypot(u[0] - x[0], u[1] - x[1]);
  };

  double lo = 1e-12, hi = 1e12;
  if (step_len(lo) <= radius) return prox_toy(x, nu, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (step_len(mid) > radius)
      lo = mid;
    else
      hi = mid;
  }
  return prox_toy(x, nu, hi);
}

namespace {

void append_point(std::vector<TrajectoryPoint>& traj, int step,
                  const std::array<double, 2>& x, double nu) {
  traj.push_back({step, x, toy_piecewise_objective(x, nu).value});
}

}  // namespace

std::vector<TrajectoryPoint> run_toy_gradient_descent(const std::array<double, 2>& x0,
                                                      double nu, double eta, int steps) {
  std::vector<TrajectoryPoint> traj;
  std::array<double, 2> x = x0;
  append_point(traj, 0, x, nu);
  for (int s = 1; s <= steps; ++s) {
    const ToyEval eval = toy_piecewise_objective(x, nu);
    x = {x[0] - eta * eval.subgradient[0], x[1] - eta * eval.subgradient[1]};
    append_point(traj, s, x, nu);
  }
  return traj;
}

std::vector<TrajectoryPoint> run_toy_momentum(const std::array<double, 2>& x0, double nu,
                                              double eta, double alpha, int steps) {
  std::vector<TrajectoryPoint> traj;
  std::array<double, 2> x = x0;
  MomentumState state;
  append_point(traj, 0, x, nu);
  for (int s = 1; s <= steps; ++s) {
    const ToyEval eval = toy_piecewise_objective(x, nu);
    const std::vector<double> delta = momentum_step(
        state, {eval.subgradient[0], eval.subgradient[1]}, eta, alpha);
    x = {x[0] + delta[0], x[1] + delta[1]};
    append_point(traj, s, x, nu);
  }
  return traj;
}

std::vector<TrajectoryPoint> run_toy_prox(const std::array<double, 2>& x0, double nu,
                                          double eta, int steps) {
  require(eta > 0.0, "run_toy_prox: eta must be positive");
  std::vector<TrajectoryPoint> traj;
  std::array<double, 2> x = x0;
  append_point(traj, 0, x, nu);
  for (int s = 1; s <= steps; ++s) {
    x = prox_toy(x, nu, 1.0 / eta);
    append_point(traj, s, x, nu);
  }
  return traj;
}

}  // namespace lsv
