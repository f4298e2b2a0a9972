#include "lovasz/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lsv {

SetFunction::SetFunction(int ground_set_size, Fn evaluate)
    : p_(ground_set_size), fn_(std::move(evaluate)) {
  require(p_ >= 1, "SetFunction: ground set size must be positive");
  require(static_cast<bool>(fn_), "SetFunction: missing evaluate");
  const Indicator empty(static_cast<std::size_t>(p_), 0);
  require(fn_(empty) == 0.0, "SetFunction: F(empty set) must be 0");
}

double SetFunction::operator()(const Indicator& subset) const {
  require(static_cast<int>(subset.size()) == p_,
          "SetFunction: indicator length does not match ground set size");
  return fn_(subset);
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.order.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    inv.order[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  return inv;
}

Permutation decreasing_sort_permutation(const std::vector<double>& m) {
  Permutation perm;
  perm.order.resize(m.size());
  std::iota(perm.order.begin(), perm.order.end(), 0);
  std::stable_sort(perm.order.begin(), perm.order.end(),
                   [&m](int a, int b) { return m[static_cast<std::size_t>(a)] >
                                               m[static_cast<std::size_t>(b)]; });
  return perm;
}

ExtensionResult lovasz_extension(const SetFunction& setfn, const ErrorVector& m) {
  const auto p = static_cast<std::size_t>(setfn.ground_set_size());
  require(m.size() == p, "lovasz_extension: dimension mismatch");
  for (double v : m)
    require(std::isfinite(v), "lovasz_extension: errors must be finite");

  const Permutation perm = decreasing_sort_permutation(m);
  ExtensionResult out;
  out.gradient.assign(p, 0.0);

  Indicator prefix(p, 0);
  double prev = 0.0;  // F(empty) = 0 by construction
  out.value = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const auto idx = static_cast<std::size_t>(perm.order[i]);
    prefix[idx] = 1;
    const double cur = setfn(prefix);
    out.gradient[idx] = cur - prev;
    prev = cur;
    // Abel-summed value: sum_i F(S_i) (m_{pi_i} - m_{pi_{i+1}}); exact at
    // 0/1 vertices where all but one difference vanish.
    const double next =
        (i + 1 < p) ? m[static_cast<std::size_t>(perm.order[i + 1])] : 0.0;
    out.value += cur * (m[idx] - next);
  }
  return out;
}

double threshold_oracle(const SetFunction& setfn, const ErrorVector& m) {
  const auto p = static_cast<std::size_t>(setfn.ground_set_size());
  require(m.size() == p, "threshold_oracle: dimension mismatch");
  for (double v : m)
    require(v >= 0.0 && v <= 1.0, "threshold_oracle: m must lie in [0,1]^p");

  const Permutation perm = decreasing_sort_permutation(m);
  // Walk the distinct values v_1 > v_2 > ... downwards; on (v_{k+1}, v_k)
  // the level set {m > theta} is the prefix {m >= v_k}.
  double total = 0.0;
  Indicator level(p, 0);
  std::size_t i = 0;
  while (i < p) {
    const double v = m[static_cast<std::size_t>(perm.order[i])];
    std::size_t j = i;
    while (j < p && m[static_cast<std::size_t>(perm.order[j])] == v) {
      level[static_cast<std::size_t>(perm.order[j])] = 1;
      ++j;
    }
    const double below =
        (j < p) ? m[static_cast<std::size_t>(perm.order[j])] : 0.0;
    if (v > below) total += setfn(level) * (v - below);
    i = j;
  }
  return total;
}

bool is_submodular(const SetFunction& setfn) {
  const int p = setfn.ground_set_size();
  require(p <= 12,
          "is_submodular: ground set size must be <= 12 (exhaustive 4^p check)");
  const std::size_t n = std::size_t{1} << p;

  // Tabulate F over all subsets once, indexed by bitmask.
  std::vector<double> table(n);
  Indicator ind(static_cast<std::size_t>(p), 0);
  for (std::size_t mask = 0; mask < n; ++mask) {
    for (int i = 0; i < p; ++i) ind[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    table[mask] = setfn(ind);
  }

  constexpr double kTol = 1e-12;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      if (table[a] + table[b] < table[a | b] + table[a & b] - kTol) return false;
  return true;
}

}  // namespace lsv
