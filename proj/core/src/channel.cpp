#include "fdnoma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "fdnoma/errors.hpp"

namespace fdnoma::channel {

using specfun::SignedLog;

namespace {

long double log_factorial_ld(long double n) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgammal_r(n + 1.0L, &sign);
#else
  return std::lgamma(n + 1.0L);
#endif
}

}  // namespace

void RicianShadowedParams::validate() const {
  if (!(mean_power > 0.0) || !std::isfinite(mean_power)) {
    throw DomainError("RicianShadowedParams: mean_power must be positive");
  }
  if (!(k_factor >= 0.0) || !std::isfinite(k_factor)) {
    throw DomainError("RicianShadowedParams: k_factor must be non-negative");
  }
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw DomainError("RicianShadowedParams: m must be positive");
  }
}

void ExponentialParams::validate() const {
  if (!(mean_power > 0.0) || !std::isfinite(mean_power)) {
    throw DomainError("ExponentialParams: mean_power must be positive");
  }
}

double rician_shadowed_log_moment(const RicianShadowedParams& p, unsigned l) {
  p.validate();
  if (l == 0) return 0.0;
  const double K = p.k_factor;
  const double m = p.m;
  const double ld = static_cast<double>(l);
  const double hyp = specfun::gauss_2f1(1.0 - m, 1.0 + ld, 1.0, -K / m);
  return ld * std::log(p.mean_power / (1.0 + K)) + specfun::log_gamma(1.0 + ld) +
         (m - 1.0 - ld) * std::log(m / (K + m)) + std::log(hyp);
}

double rician_shadowed_moment(const RicianShadowedParams& p, unsigned l, unsigned max_order) {
  if (l > max_order) {
    throw DomainError("rician_shadowed_moment: order " + std::to_string(l) +
                      " exceeds configured maximum " + std::to_string(max_order));
  }
  const double log_moment = rician_shadowed_log_moment(p, l);
  const double v = std::exp(log_moment);
  if (!std::isfinite(v)) {
    throw NumericalError("rician_shadowed_moment: overflow", v, l);
  }
  return v;
}

double exponential_log_moment(const ExponentialParams& p, unsigned l) {
  p.validate();
  if (l == 0) return 0.0;
  const double ld = static_cast<double>(l);
  return ld * std::log(p.mean_power) + specfun::log_gamma(ld + 1.0);
}

double exponential_moment(const ExponentialParams& p, unsigned l) {
  return std::exp(exponential_log_moment(p, l));
}

SignedLog cdf_series_log_coeff(unsigned n, const RicianShadowedParams& p, double gamma) {
  p.validate();
  if (!(gamma >= 0.0)) throw DomainError("cdf_series_coeff: gamma must be non-negative");
  if (gamma == 0.0) return {-std::numeric_limits<double>::infinity(), 0};

  const long double K = p.k_factor;
  const long double m = p.m;
  const long double nd = n;
  const long double scaled = (1.0L + K) * gamma / p.mean_power;
  const long double delta = K / (K + m);

  // n! * sum_i (-1)^(n-i) (m)_i delta^i / ((n-i)! (i!)^2), accumulated by the
  // term ratio in extended precision: the alternating terms cancel heavily
  // once (1+K) gamma / P is of order ten.
  long double term = 1.0L;  // i = 0
  long double inner = (n % 2 == 0) ? term : -term;
  const unsigned last = K > 0.0L ? n : 0;
  for (unsigned i = 0; i < last; ++i) {
    const long double id = i;
    term *= (m + id) * delta * (nd - id) / ((id + 1.0L) * (id + 1.0L));
    inner += ((n - i - 1) % 2 == 0) ? term : -term;
  }
  if (inner == 0.0L) return {-std::numeric_limits<double>::infinity(), 0};

  const long double log_abs = m * std::log(m / (K + m)) + (nd + 1.0L) * std::log(scaled) -
                              std::log(nd + 1.0L) - log_factorial_ld(nd) +
                              std::log(std::fabs(inner));
  return {static_cast<double>(log_abs), inner > 0.0L ? 1 : -1};
}

double cdf_series_coeff(unsigned n, const RicianShadowedParams& p, double gamma) {
  const SignedLog c = cdf_series_log_coeff(n, p, gamma);
  if (c.sign == 0) return 0.0;
  return c.sign * std::exp(c.log_abs);
}

void DivergenceMonitor::observe(unsigned order, double term_magnitude) {
  if (order > 10 && previous_ >= 0.0 && term_magnitude > previous_) {
    if (++growth_streak_ >= 5) diverging_ = true;
  } else {
    growth_streak_ = 0;
  }
  previous_ = term_magnitude;
}

SeriesEstimate cdf_truncated(const RicianShadowedParams& p, double gamma, unsigned k_tr) {
  p.validate();
  if (!(gamma >= 0.0)) throw DomainError("cdf_truncated: gamma must be non-negative");
  SeriesEstimate out;
  out.terms = k_tr + 1;
  if (gamma == 0.0) return out;

  DivergenceMonitor monitor;
  double sum = 0.0;
  for (unsigned i = 0; i <= k_tr; ++i) {
    const double term = cdf_series_coeff(i, p, gamma);
    monitor.observe(i, std::abs(term));
    sum += term;
  }
  out.raw_sum = sum;
  out.converged = !monitor.diverging() && std::isfinite(sum);
  out.probability = std::isfinite(sum) ? std::clamp(sum, 0.0, 1.0) : 1.0;
  return out;
}

namespace {

std::gamma_distribution<double> make_los(const RicianShadowedParams& p) {
  const double omega = p.mean_power * p.k_factor / (1.0 + p.k_factor);
  // K == 0 has no LOS component; the distribution is unused in that case.
  return omega > 0.0 ? std::gamma_distribution<double>(p.m, omega / p.m)
                     : std::gamma_distribution<double>(1.0, 1.0);
}

}  // namespace

RicianShadowedSampler::RicianShadowedSampler(const RicianShadowedParams& p)
    : has_los_((p.validate(), p.k_factor > 0.0)),
      los_power_(make_los(p)),
      phase_(0.0, 2.0 * std::numbers::pi),
      diffuse_(0.0, std::sqrt(p.mean_power / (2.0 * (1.0 + p.k_factor)))) {}

double RicianShadowedSampler::operator()(RandomStream& rng) {
  std::complex<double> los{0.0, 0.0};
  if (has_los_) {
    const double g = los_power_(rng);
    los = std::polar(std::sqrt(g), phase_(rng));
  }
  const std::complex<double> scatter{diffuse_(rng), diffuse_(rng)};
  return std::norm(los + scatter);
}

std::pair<double, double> RicianShadowedSampler::antithetic_pair(RandomStream& rng) {
  std::complex<double> los{0.0, 0.0};
  if (has_los_) {
    const double g = los_power_(rng);
    los = std::polar(std::sqrt(g), phase_(rng));
  }
  const std::complex<double> scatter{diffuse_(rng), diffuse_(rng)};
  return {std::norm(los + scatter), std::norm(los - scatter)};
}

double sample_rician_shadowed(const RicianShadowedParams& p, RandomStream& rng) {
  RicianShadowedSampler sampler(p);
  return sampler(rng);
}

double sample_exponential(const ExponentialParams& p, RandomStream& rng) {
  p.validate();
  std::exponential_distribution<double> dist(1.0 / p.mean_power);
  return dist(rng);
}

}  // namespace fdnoma::channel
