#pragma once

// Chunked Monte Carlo mean estimator.
//
// The sample range [0, n) is cut into fixed chunks of kChunkSize samples.
// Chunk c draws from RngStream{seed, stream_offset + c}; per-chunk running
// statistics are merged in chunk order. Serial and OpenMP execution therefore
// produce bit-identical estimates for every thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mixvol/error.hpp"
#include "mixvol/rng.hpp"

namespace mixvol {

inline constexpr std::size_t kChunkSize = std::size_t{1} << 16;

enum class Execution { serial, parallel };

struct McConfig {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  double ci_level = 0.99;
  /// Average f(z) and f(-z) per sample. Useless for |det|-type statistics,
  /// which are even in every row; see README.
  bool antithetic = false;
  Execution execution = Execution::parallel;
  /// 0 means the OpenMP default.
  int threads = 0;
  /// Added to every chunk's stream index; lets two estimates on the same
  /// seed use disjoint streams.
  std::uint64_t stream_offset = 0;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double ci_level = 0.99;
  double ci_half_width = 0.0;

  double ci_lower() const noexcept { return mean - ci_half_width; }
  double ci_upper() const noexcept { return mean + ci_half_width; }
  /// Multiplies mean, standard error and half-width by c (|c| for the latter).
  MCEstimate scaled(double c) const noexcept;
};

/// Two-sided standard normal quantile z with P(|Z| <= z) = level.
double normal_quantile_two_sided(double level);

/// Builds an estimate from sample statistics; std_error = sd / sqrt(n).
MCEstimate make_estimate(double mean, double sample_variance, std::size_t n, std::uint64_t seed,
                         double ci_level);

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) noexcept {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

void validate_config(const McConfig& cfg);

/// Runs `body(c)` for c in [0, count) under the requested execution policy.
template <class Body>
void for_each_chunk(std::size_t count, Execution exec, int threads, Body&& body) {
#ifdef _OPENMP
  if (exec == Execution::parallel && count > 1) {
    const int nt = threads > 0 ? threads : omp_get_max_threads();
    const auto signed_count = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (std::int64_t c = 0; c < signed_count; ++c) body(static_cast<std::size_t>(c));
    return;
  }
#else
  (void)threads;
  (void)exec;
#endif
  for (std::size_t c = 0; c < count; ++c) body(c);
}

/// Estimates E f(z) for z a vector of `draws` independent standard normals.
/// `kernel` is copied once per chunk, so it may hold mutable scratch space.
template <class Kernel>
MCEstimate estimate_mean(const Kernel& kernel, std::size_t draws, const McConfig& cfg) {
  validate_config(cfg);
  const std::size_t n = cfg.samples;
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<RunningStats> partial(chunks);

  for_each_chunk(chunks, cfg.execution, cfg.threads, [&](std::size_t c) {
    Kernel local = kernel;
    NormalGenerator gen(RngStream{cfg.seed, cfg.stream_offset + c});
    std::vector<double> z(draws);
    RunningStats stats;
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(n, begin + kChunkSize);
    for (std::size_t s = begin; s < end; ++s) {
      gen.fill(z);
      double value = local(std::span<const double>(z));
      if (cfg.antithetic) {
        for (double& x : z) x = -x;
        value = 0.5 * (value + local(std::span<const double>(z)));
      }
      stats.add(value);
    }
    partial[c] = stats;
  });

  RunningStats total;
  for (const auto& p : partial) total.merge(p);
  return make_estimate(total.mean, total.variance(), n, cfg.seed, cfg.ci_level);
}

}  // namespace mixvol
