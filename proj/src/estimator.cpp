#include "mixvol/estimator.hpp"

#include <boost/math/distributions/normal.hpp>

namespace mixvol {

MCEstimate MCEstimate::scaled(double c) const noexcept {
  MCEstimate out = *this;
  out.mean *= c;
  out.std_error *= std::abs(c);
  out.ci_half_width *= std::abs(c);
  return out;
}

double normal_quantile_two_sided(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "confidence level must lie in (0, 1)");
  }
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + 0.5 * level);
}

MCEstimate make_estimate(double mean, double sample_variance, std::size_t n, std::uint64_t seed,
                         double ci_level) {
  MCEstimate out;
  out.mean = mean;
  out.std_error = n > 0 ? std::sqrt(std::max(sample_variance, 0.0) / static_cast<double>(n)) : 0.0;
  out.n_samples = n;
  out.seed = seed;
  out.ci_level = ci_level;
  out.ci_half_width = normal_quantile_two_sided(ci_level) * out.std_error;
  return out;
}

void validate_config(const McConfig& cfg) {
  if (cfg.samples < 2) {
    throw Error(ErrorCode::OutOfRange, "at least 2 samples are required");
  }
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "confidence level must lie in (0, 1)");
  }
  if (cfg.threads < 0) {
    throw Error(ErrorCode::OutOfRange, "thread count must be non-negative");
  }
}

}  // namespace mixvol
