#pragma once

#include <functional>

#include "lovasz/types.hpp"

namespace lsv {

/// Real-valued function on subsets of a ground set of size p. Subsets are
/// passed as 0/1 indicator vectors of length p. Construction requires
/// F(empty set) = 0; anything else is a bug in the caller and is rejected
/// rather than silently corrected.
class SetFunction {
 public:
  using Fn = std::function<double(const Indicator&)>;

  SetFunction(int ground_set_size, Fn evaluate);

  int ground_set_size() const { return p_; }
  double operator()(const Indicator& subset) const;

 private:
  int p_;
  Fn fn_;
};

/// Bijection on {0..p-1} stored as an index array: order[i] is the index of
/// the element ranked i-th.
struct Permutation {
  std::vector<int> order;

  Permutation inverse() const;
};

/// Stable decreasing-sort permutation of m: m[order[0]] >= m[order[1]] >= ...
/// with original index order preserved among equal values, so the selected
/// subgradient at nondifferentiable points is deterministic.
Permutation decreasing_sort_permutation(const std::vector<double>& m);

/// Lovász extension of a set function at m, with its gradient: under the
/// decreasing-sort permutation pi, g[pi_i] = F({pi_1..pi_i}) - F({pi_1..pi_{i-1}})
/// and value = <m, g>. Evaluates F once per prefix (p evaluations).
ExtensionResult lovasz_extension(const SetFunction& setfn, const ErrorVector& m);

/// Independent oracle for the extension on the unit cube, via the level-set
/// identity ext(m) = integral over theta in (0,1) of F({i : m_i > theta}),
/// computed exactly as a finite sum over the intervals between sorted
/// distinct values of m. Exact (no sampling), so it can serve as a test
/// oracle for lovasz_extension.
double threshold_oracle(const SetFunction& setfn, const ErrorVector& m);

/// Exhaustive check of the submodularity inequality
/// F(A) + F(B) >= F(A | B) + F(A & B) over all pairs of subsets, within
/// tolerance 1e-12. Rejects ground sets larger than 12 (4^p pair blowup).
bool is_submodular(const SetFunction& setfn);

}  // namespace lsv
