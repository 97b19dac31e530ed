#include "fdnoma/specfun.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fdnoma/errors.hpp"

namespace fdnoma::specfun {

namespace {

bool is_non_positive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// std::lgamma writes the global signgam on glibc; the reentrant variant
// keeps log_gamma free of shared state.
double lgamma_positive(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// Plain power series sum_k (a)_k (b)_k / ((c)_k k!) z^k. Terminates on its own
// when a or b is a non-positive integer.
double hypergeometric_series(double a, double b, double c, double z, const Hyp2f1Options& opts) {
  double term = 1.0;
  double sum = 1.0;
  int small_in_a_row = 0;
  for (std::size_t k = 0; k < opts.max_terms; ++k) {
    const double kd = static_cast<double>(k);
    term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
    if (term == 0.0) return sum;
    sum += term;
    if (!std::isfinite(sum)) {
      throw NumericalError("gauss_2f1: series overflowed", sum, k + 1);
    }
    if (std::abs(term) <= opts.rel_tol * std::abs(sum)) {
      // two consecutive small terms guard against a coefficient passing near zero
      if (++small_in_a_row >= 2) return sum;
    } else {
      small_in_a_row = 0;
    }
  }
  throw NumericalError("gauss_2f1: no convergence after " + std::to_string(opts.max_terms) +
                           " terms",
                       sum, opts.max_terms);
}

double terminating_series(double a, double b, double c, double z) {
  // a is a non-positive integer: exactly |a| + 1 terms.
  const auto n = static_cast<long>(-a);
  double term = 1.0;
  double sum = 1.0;
  for (long k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
    sum += term;
  }
  if (!std::isfinite(sum)) {
    throw NumericalError("gauss_2f1: terminating series overflowed", sum,
                         static_cast<std::size_t>(n + 1));
  }
  return sum;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  return lgamma_positive(x);
}

double pochhammer(double a, unsigned i) {
  double p = 1.0;
  for (unsigned k = 0; k < i; ++k) p *= a + static_cast<double>(k);
  return p;
}

SignedLog log_pochhammer(double a, unsigned i) {
  if (i == 0) return {0.0, 1};
  if (a > 0.0) {
    return {lgamma_positive(a + i) - lgamma_positive(a), 1};
  }
  double log_abs = 0.0;
  int sign = 1;
  for (unsigned k = 0; k < i; ++k) {
    const double f = a + static_cast<double>(k);
    if (f == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (f < 0.0) sign = -sign;
    log_abs += std::log(std::abs(f));
  }
  return {log_abs, sign};
}

double gauss_2f1(double a, double b, double c, double z, const Hyp2f1Options& opts) {
  if (is_non_positive_integer(c)) {
    throw DomainError("gauss_2f1: c must not be a non-positive integer");
  }
  if (!(z < 1.0)) {
    throw DomainError("gauss_2f1: requires z < 1, got " + std::to_string(z));
  }
  if (is_non_positive_integer(a)) return terminating_series(a, b, c, z);
  if (is_non_positive_integer(b)) return terminating_series(b, a, c, z);
  if (z == 0.0) return 1.0;
  if (z > 0.0) return hypergeometric_series(a, b, c, z, opts);

  const double w = z / (z - 1.0);
  const double prefactor = std::pow(1.0 - z, -b);
  const double ca = c - a;
  const double inner = is_non_positive_integer(ca) ? terminating_series(ca, b, c, w)
                                                   : hypergeometric_series(ca, b, c, w, opts);
  return prefactor * inner;
}

Composition::Composition(std::vector<int> parts, int total) : parts_(std::move(parts)), total_(total) {
  long sum = 0;
  for (int p : parts_) {
    if (p < 0) throw DomainError("Composition: parts must be non-negative");
    sum += p;
  }
  if (sum != total_) throw DomainError("Composition: parts do not sum to total");
}

double log_multinomial(std::span<const int> parts, int total) {
  double v = lgamma_positive(static_cast<double>(total) + 1.0);
  for (int p : parts) v -= lgamma_positive(static_cast<double>(p) + 1.0);
  return v;
}

double multinomial_coeff(const Composition& c) {
  return std::exp(log_multinomial(c.parts(), c.total()));
}

CompositionStream::CompositionStream(int total, int num_parts) : total_(total) {
  if (num_parts < 1) throw DomainError("compositions: num_parts must be >= 1");
  if (total < 0) throw DomainError("compositions: total must be >= 0");
  current_.assign(static_cast<std::size_t>(num_parts), 0);
  current_.back() = total;
}

bool CompositionStream::next(std::vector<int>& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    out = current_;
    return true;
  }
  const int k = static_cast<int>(current_.size());
  // Rightmost position i < k-1 that still has mass to its right.
  int i = -1;
  if (k >= 2) {
    if (current_[k - 1] > 0) {
      i = k - 2;
    } else {
      for (int j = k - 2; j >= 0; --j) {
        if (current_[j] > 0) {
          i = j - 1;
          break;
        }
      }
    }
  }
  if (i < 0) {
    done_ = true;
    return false;
  }
  int rest = 0;
  for (int j = i + 1; j < k; ++j) {
    rest += current_[j];
    current_[j] = 0;
  }
  current_[i] += 1;
  current_[k - 1] = rest - 1;
  out = current_;
  return true;
}

std::vector<Composition> compositions(int total, int num_parts) {
  std::vector<Composition> all;
  CompositionStream stream(total, num_parts);
  std::vector<int> parts;
  while (stream.next(parts)) all.emplace_back(parts, total);
  return all;
}

void for_each_composition(int total, int num_parts,
                          const std::function<void(std::span<const int>)>& visit) {
  CompositionStream stream(total, num_parts);
  std::vector<int> parts;
  while (stream.next(parts)) visit(parts);
}

}  // namespace fdnoma::specfun
