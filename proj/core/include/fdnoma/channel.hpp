#pragma once

// Rician shadowed and exponential power statistics: moments, the power-series
// CDF expansion and exact samplers for simulation.

#include <random>
#include <utility>
#include <vector>

#include "fdnoma/specfun.hpp"

namespace fdnoma::channel {

/// Squared-envelope statistics of one Rician shadowed link.
///
/// mean_power is the first moment E{X}, already scaled by transmit power,
/// pathloss and noise. m is the Nakagami shape of the line-of-sight amplitude.
struct RicianShadowedParams {
  double mean_power = 1.0;
  double k_factor = 0.0;
  double m = 1.0;

  /// Throws DomainError unless mean_power > 0, k_factor >= 0 and m > 0.
  void validate() const;
};

struct ExponentialParams {
  double mean_power = 1.0;

  void validate() const;
};

inline constexpr unsigned kDefaultMaxMomentOrder = 64;

/// E{X^l} = (P/(1+K))^l l! (m/(K+m))^(m-1-l) 2F1(1-m, 1+l; 1; -K/m).
/// Throws DomainError for l > max_order, NumericalError on overflow.
double rician_shadowed_moment(const RicianShadowedParams& p, unsigned l,
                              unsigned max_order = kDefaultMaxMomentOrder);

/// ln E{X^l}; finite where the moment itself would overflow a double.
double rician_shadowed_log_moment(const RicianShadowedParams& p, unsigned l);

/// E{Y^l} = mean^l l!.
double exponential_moment(const ExponentialParams& p, unsigned l);
double exponential_log_moment(const ExponentialParams& p, unsigned l);

/// Coefficient of order n in the CDF expansion F(gamma) = sum_n alpha(n).
/// Alternates in sign for n >= 1.
double cdf_series_coeff(unsigned n, const RicianShadowedParams& p, double gamma);

/// Same coefficient as ln|alpha| with a separate sign; sign 0 means alpha == 0.
specfun::SignedLog cdf_series_log_coeff(unsigned n, const RicianShadowedParams& p, double gamma);

/// Outcome of a truncated alternating series.
struct SeriesEstimate {
  double probability = 0.0;  // clamped to [0, 1]
  double raw_sum = 0.0;      // before clamping
  bool converged = true;
  unsigned terms = 0;
};

/// Tracks term magnitudes and reports divergence once |term| has grown for
/// five consecutive orders past order 10.
class DivergenceMonitor {
 public:
  void observe(unsigned order, double term_magnitude);
  bool diverging() const noexcept { return diverging_; }

 private:
  double previous_ = -1.0;
  int growth_streak_ = 0;
  bool diverging_ = false;
};

inline constexpr unsigned kDefaultTruncationOrder = 40;

/// sum_{i=0}^{k_tr} alpha(i, gamma), clamped to [0, 1].
SeriesEstimate cdf_truncated(const RicianShadowedParams& p, double gamma,
                             unsigned k_tr = kDefaultTruncationOrder);

using RandomStream = std::mt19937_64;

/// One draw of |sqrt(G) e^{j theta} + c|^2 with G ~ Gamma(m, Omega/m),
/// Omega = P K/(1+K), theta ~ U[0, 2pi) and c circular Gaussian with total
/// variance P/(1+K).
double sample_rician_shadowed(const RicianShadowedParams& p, RandomStream& rng);

double sample_exponential(const ExponentialParams& p, RandomStream& rng);

/// Reusable sampler that builds the distribution objects once.
class RicianShadowedSampler {
 public:
  explicit RicianShadowedSampler(const RicianShadowedParams& p);

  double operator()(RandomStream& rng);

  /// Draws the antithetic pair (G, theta, c) and (G, theta, -c).
  std::pair<double, double> antithetic_pair(RandomStream& rng);

 private:
  bool has_los_;
  std::gamma_distribution<double> los_power_;
  std::uniform_real_distribution<double> phase_;
  std::normal_distribution<double> diffuse_;
};

}  // namespace fdnoma::channel
