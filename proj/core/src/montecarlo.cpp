#include "fdnoma/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "fdnoma/errors.hpp"

namespace fdnoma::montecarlo {

using channel::RandomStream;
using channel::RicianShadowedSampler;

void McSettings::validate() const {
  if (num_samples < 1000) throw DomainError("McSettings: num_samples must be >= 1000");
}

channel::RandomStream substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return RandomStream(seq);
}

namespace {

// Exponential draw by inversion so that U and 1 - U give an antithetic pair.
class ExponentialInversion {
 public:
  explicit ExponentialInversion(double mean) : mean_(mean) {}
  double operator()(RandomStream& rng) { return from_uniform(uniform_(rng)); }
  std::pair<double, double> antithetic_pair(RandomStream& rng) {
    const double u = uniform_(rng);
    return {from_uniform(u), from_uniform(1.0 - u)};
  }

 private:
  double from_uniform(double u) const { return -mean_ * std::log1p(-u); }
  double mean_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Received-signal model for one (scheme, node) pair.
struct EventModel {
  Scheme scheme;
  Node node;
  double gamma;  // 2^R - 1 for the scheme's rate; no NOMA transform
  double a_own;
  double a_other;
  double beta;
  outage::LinkBudget budget;

  bool uplink_interference() const { return scheme == Scheme::FdNoma; }

  // SINR of the desired message at a downlink UAV given its received power
  // and the uplink interference power.
  double downlink_sinr(double x, double y) const {
    if (scheme == Scheme::HdOma) return x;
    const double intra = node == Node::Uav2 ? beta * a_other * x : a_other * x;
    return a_own * x / (intra + y + 1.0);
  }

  // Largest SINR any realization can reach.
  double sinr_ceiling() const {
    if (node == Node::Gs || scheme == Scheme::HdOma) return std::numeric_limits<double>::infinity();
    const double intra = node == Node::Uav2 ? beta * a_other : a_other;
    return intra > 0.0 ? a_own / intra : std::numeric_limits<double>::infinity();
  }
};

EventModel make_model(const outage::SystemConfig& cfg, Scheme scheme, Node node) {
  EventModel m{scheme,
               node,
               outage::sinr_threshold(outage::rate_for(scheme, cfg.r_oma)),
               node == Node::Uav3 ? cfg.a_gs3() : cfg.a_gs2,
               node == Node::Uav3 ? cfg.a_gs2 : cfg.a_gs3(),
               cfg.beta,
               outage::make_link_budget(cfg)};
  return m;
}

// Counts outage samples in one batch.
class BatchRunner {
 public:
  BatchRunner(const EventModel& model, bool antithetic) : model_(model), antithetic_(antithetic) {}

  std::uint64_t run(RandomStream& rng, std::uint64_t samples) const {
    const auto& b = model_.budget;
    const double g = model_.gamma;
    std::uint64_t hits = 0;
    auto outage = [g](double sinr) { return sinr <= g; };

    if (model_.node == Node::Gs) {
      RicianShadowedSampler desired(b.x_1g);
      if (model_.scheme != Scheme::FdNoma) {
        for_samples(samples, [&](bool pair) {
          if (pair) {
            auto [x, xa] = desired.antithetic_pair(rng);
            hits += outage(x) + outage(xa);
          } else {
            hits += outage(desired(rng));
          }
        });
        return hits;
      }
      RicianShadowedSampler si(b.y_si1);
      const double err_mean = b.y_si2 ? b.y_si2->mean_power : 0.0;
      ExponentialInversion err(err_mean);
      for_samples(samples, [&](bool pair) {
        if (pair) {
          auto [x, xa] = desired.antithetic_pair(rng);
          auto [s, sa] = si.antithetic_pair(rng);
          auto [e, ea] = err.antithetic_pair(rng);
          hits += outage(x / (s + e + 1.0)) + outage(xa / (sa + ea + 1.0));
        } else {
          const double x = desired(rng);
          const double s = si(rng);
          const double e = err(rng);
          hits += outage(x / (s + e + 1.0));
        }
      });
      return hits;
    }

    RicianShadowedSampler desired(model_.node == Node::Uav2 ? b.x_g2 : b.x_g3);
    if (!model_.uplink_interference()) {
      for_samples(samples, [&](bool pair) {
        if (pair) {
          auto [x, xa] = desired.antithetic_pair(rng);
          hits += outage(model_.downlink_sinr(x, 0.0)) + outage(model_.downlink_sinr(xa, 0.0));
        } else {
          hits += outage(model_.downlink_sinr(desired(rng), 0.0));
        }
      });
      return hits;
    }
    RicianShadowedSampler uplink(model_.node == Node::Uav2 ? b.y_12 : b.y_13);
    for_samples(samples, [&](bool pair) {
      if (pair) {
        auto [x, xa] = desired.antithetic_pair(rng);
        auto [y, ya] = uplink.antithetic_pair(rng);
        hits += outage(model_.downlink_sinr(x, y)) + outage(model_.downlink_sinr(xa, ya));
      } else {
        const double x = desired(rng);
        const double y = uplink(rng);
        hits += outage(model_.downlink_sinr(x, y));
      }
    });
    return hits;
  }

 private:
  // Calls body(true) once per antithetic pair and body(false) per plain sample.
  template <class Body>
  void for_samples(std::uint64_t samples, Body&& body) const {
    if (antithetic_) {
      for (std::uint64_t i = 0; i + 1 < samples; i += 2) body(true);
      if (samples % 2 == 1) body(false);
    } else {
      for (std::uint64_t i = 0; i < samples; ++i) body(false);
    }
  }

  const EventModel& model_;
  bool antithetic_;
};

unsigned worker_count(unsigned requested, std::uint64_t batches) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(n, batches));
}

}  // namespace

McEstimate mc_outage(const outage::SystemConfig& cfg, Scheme scheme, Node node,
                     const McSettings& mc) {
  mc.validate();
  const EventModel model = make_model(cfg, scheme, node);
  const BatchRunner runner(model, mc.antithetic);

  const std::uint64_t batches = (mc.num_samples + kBatchSize - 1) / kBatchSize;
  std::vector<std::uint64_t> hits(batches, 0);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b = next++; b < batches; b = next++) {
      const std::uint64_t begin = b * kBatchSize;
      const std::uint64_t count = std::min(kBatchSize, mc.num_samples - begin);
      RandomStream rng = substream(mc.seed, b);
      hits[b] = runner.run(rng, count);
    }
  };

  const unsigned workers = worker_count(mc.threads, batches);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::uint64_t total = 0;
  for (auto h : hits) total += h;

  McEstimate est;
  est.num_samples = mc.num_samples;
  est.probability = static_cast<double>(total) / static_cast<double>(mc.num_samples);
  est.std_error = std::sqrt(est.probability * (1.0 - est.probability) /
                            static_cast<double>(mc.num_samples));
  est.threshold_infinite = model.gamma >= model.sinr_ceiling();
  return est;
}

bool mc_threshold_equivalence_check(const outage::SystemConfig& cfg, Node node,
                                    std::uint64_t num_samples, std::uint64_t seed) {
  if (node == Node::Gs) throw DomainError("equivalence check applies to downlink UAVs only");
  const outage::Threshold effective = outage::node_threshold(cfg, Scheme::FdNoma, node);
  if (effective.is_infinite()) {
    throw DomainError("equivalence check requires a finite effective threshold");
  }
  const double gamma_star = effective.value();
  const EventModel model = make_model(cfg, Scheme::FdNoma, node);
  const auto& b = model.budget;
  RicianShadowedSampler desired(node == Node::Uav2 ? b.x_g2 : b.x_g3);
  RicianShadowedSampler uplink(node == Node::Uav2 ? b.y_12 : b.y_13);
  RandomStream rng = substream(seed, 0);

  std::uint64_t disagreements = 0;
  for (std::uint64_t i = 0; i < num_samples; ++i) {
    const double x = desired(rng);
    const double y = uplink(rng);
    const bool direct = model.downlink_sinr(x, y) <= model.gamma;
    const bool transformed = x / (y + 1.0) <= gamma_star;
    disagreements += direct != transformed;
  }
  return disagreements == 0;
}

}  // namespace fdnoma::montecarlo
