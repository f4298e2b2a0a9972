#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lovasz/types.hpp"

namespace lsv::props {

/// Outcome of one property check.
struct PropResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Run the library's invariant suite. heavy additionally runs the
/// training-based statistical checks (minutes instead of seconds).
std::vector<PropResult> run_all(std::uint64_t seed, bool heavy);

/// Finite-difference validation of one loss layer at random tie-free points;
/// returns the max absolute gradient error per trial. Loss names follow the
/// training menu plus "lovasz_extension" for the generic extension.
std::vector<double> gradcheck(const std::string& loss, int p, int num_classes,
                              int trials, std::uint64_t seed);

/// Benchmark jaccard_grad over p = 2^log2_min .. 2^log2_max; returns
/// (p, median nanoseconds) pairs.
struct BenchPoint {
  std::size_t p = 0;
  double median_ns = 0.0;
};
std::vector<BenchPoint> bench_jaccard_grad(int log2_min, int log2_max, int reps,
                                           std::uint64_t seed);

/// Least-squares slope of log2(median_ns) against log2(p).
double bench_loglog_slope(const std::vector<BenchPoint>& points);

/// Brute-force minimizer of the margin-space prox objective, independent of
/// the edge-following path: a dense refined grid combined with exhaustive
/// enumeration of the candidate face structures. Intended for small p.
ErrorVector brute_force_prox(const ErrorVector& m0, const Indicator& delta,
                             double lambda);

}  // namespace lsv::props
