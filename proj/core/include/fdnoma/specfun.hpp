#pragma once

// Scalar special functions and combinatorial enumeration used by the
// Rician shadowed CDF expansion and the multinomial outage series.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fdnoma::specfun {

/// Natural log of the gamma function for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Rising factorial a(a+1)...(a+i-1); 1 for i == 0.
double pochhammer(double a, unsigned i);

/// ln|(a)_i| and its sign, for use when the product itself would overflow.
struct SignedLog {
  double log_abs;
  int sign;  // -1, 0 or +1
};
SignedLog log_pochhammer(double a, unsigned i);

struct Hyp2f1Options {
  double rel_tol = 1e-15;
  std::size_t max_terms = 10000;
};

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.
///
/// A non-positive integer a (or b) gives a terminating polynomial that is
/// summed exactly. Otherwise z <= 0 is mapped onto [0, 1) with the Pfaff
/// transformation
///   2F1(a, b; c; z) = (1 - z)^(-b) 2F1(c - a, b; c; z / (z - 1))
/// before summing. Throws DomainError if c is a non-positive integer or
/// z >= 1, and NumericalError if the series has not met `rel_tol` after
/// `max_terms` terms.
double gauss_2f1(double a, double b, double c, double z, const Hyp2f1Options& opts = {});

/// Ordered tuple of non-negative integers with a fixed sum.
class Composition {
 public:
  Composition() = default;
  /// Throws DomainError if any part is negative or the parts do not sum to total.
  Composition(std::vector<int> parts, int total);

  std::span<const int> parts() const noexcept { return parts_; }
  int total() const noexcept { return total_; }
  std::size_t size() const noexcept { return parts_.size(); }
  int operator[](std::size_t i) const { return parts_[i]; }

  friend bool operator==(const Composition&, const Composition&) = default;

 private:
  std::vector<int> parts_;
  int total_ = 0;
};

/// total! / (l_1! ... l_k!), evaluated through log_gamma.
double multinomial_coeff(const Composition& c);

/// ln of multinomial_coeff for a raw part list.
double log_multinomial(std::span<const int> parts, int total);

/// Lexicographic stream of every composition of `total` into `num_parts`
/// non-negative parts.
///
///   CompositionStream s(3, 2);
///   std::vector<int> parts;
///   while (s.next(parts)) { ... }
class CompositionStream {
 public:
  CompositionStream(int total, int num_parts);

  /// Fills `out` with the next tuple. Returns false once exhausted.
  bool next(std::vector<int>& out);

 private:
  int total_;
  std::vector<int> current_;
  bool started_ = false;
  bool done_ = false;
};

/// All compositions of `total` into `num_parts` parts, lexicographic order.
std::vector<Composition> compositions(int total, int num_parts);

/// Visits each composition without materializing Composition objects.
void for_each_composition(int total, int num_parts,
                          const std::function<void(std::span<const int>)>& visit);

}  // namespace fdnoma::specfun
