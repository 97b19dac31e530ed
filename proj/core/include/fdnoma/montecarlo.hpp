#pragma once

// Simulation oracle for the outage events. SINRs are formed from the raw
// received-signal model (power split, residual SIC, uplink interference,
// unit noise) and never through the effective NOMA threshold, so agreement
// with the closed forms is independent evidence.

#include <cstdint>

#include "fdnoma/outage.hpp"

namespace fdnoma::montecarlo {

struct McSettings {
  std::uint64_t num_samples = 1'000'000;
  std::uint64_t seed = 0x5eed'f00d'2019ULL;
  bool antithetic = false;
  /// Worker threads; 0 picks std::thread::hardware_concurrency(). The
  /// estimate does not depend on this value.
  unsigned threads = 0;

  void validate() const;
};

struct McEstimate {
  double probability = 0.0;
  double std_error = 0.0;  // sqrt(p (1 - p) / num_samples)
  std::uint64_t num_samples = 0;
  /// The rate can never be met for any channel realization, so every sample
  /// is an outage.
  bool threshold_infinite = false;
};

/// Samples per independent substream. Batch b draws from a generator seeded
/// by (seed, b), so the result is invariant to how batches are scheduled.
inline constexpr std::uint64_t kBatchSize = 1u << 16;

McEstimate mc_outage(const outage::SystemConfig& cfg, Scheme scheme, Node node,
                     const McSettings& mc = {});

/// Checks, sample by sample, that the direct-SINR outage indicator and the
/// effective-threshold indicator X / (Y + 1) <= gamma* agree for the FD-NOMA
/// downlink at `node`. Throws DomainError if gamma* is infinite or node is GS.
bool mc_threshold_equivalence_check(const outage::SystemConfig& cfg, Node node,
                                    std::uint64_t num_samples = 100'000,
                                    std::uint64_t seed = 1);

/// Generator for substream `index` of `seed`.
channel::RandomStream substream(std::uint64_t seed, std::uint64_t index);

}  // namespace fdnoma::montecarlo
