#pragma once

// Closed-form outage probabilities for FD-NOMA, HD-NOMA and HD-OMA links.
//
// Powers are noise-normalized: the transmit power p_t_db is already relative
// to the receiver noise floor, so every SINR has a unit noise term. The phase
// noise strength and the noise power (both dBm) only enter through their
// ratio, which scales the first residual self-interference term.
//
// The second residual self-interference term (imperfect SI channel estimate)
// is exponential with mean P_t * epsilon; epsilon is applied exactly once.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fdnoma/channel.hpp"

namespace fdnoma {

enum class Scheme { FdNoma, HdNoma, HdOma };
enum class Node { Gs, Uav2, Uav3 };

inline constexpr Scheme kAllSchemes[] = {Scheme::FdNoma, Scheme::HdNoma, Scheme::HdOma};
inline constexpr Node kAllNodes[] = {Node::Gs, Node::Uav2, Node::Uav3};

std::string_view to_string(Scheme s);
std::string_view to_string(Node n);
/// Accepts the canonical names (FD_NOMA, UAV2, ...) case-insensitively, plus
/// the short forms fd/hd/oma and gs/uav2/uav3.
std::optional<Scheme> parse_scheme(std::string_view text);
std::optional<Node> parse_node(std::string_view text);

}  // namespace fdnoma

namespace fdnoma::outage {

/// SINR threshold that may be infinite (outage certain).
class Threshold {
 public:
  static Threshold finite(double value);
  static Threshold infinite() { return Threshold(); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Throws std::logic_error when infinite.
  double value() const;

  friend bool operator==(const Threshold&, const Threshold&) = default;

 private:
  Threshold() = default;
  bool infinite_ = true;
  double value_ = 0.0;
};

/// Euclidean distances in km.
struct NodeGeometry {
  double d_1g = 3.0;
  double d_g2 = 2.0;
  double d_g3 = 3.0;
  // No reference values for the inter-UAV distances; callers must set them.
  double d_12 = std::numeric_limits<double>::quiet_NaN();
  double d_13 = std::numeric_limits<double>::quiet_NaN();
  double pathloss_exp = 2.0;

  void validate() const;
};

/// Per-link fading shape with unit mean power; LinkBudget applies the scale.
struct FadingSet {
  channel::RicianShadowedParams link_1g{1.0, 10.0, 10.0};
  channel::RicianShadowedParams si{1.0, 10.0, 10.0};
  channel::RicianShadowedParams link_g2{1.0, 10.0, 3.0};
  channel::RicianShadowedParams link_g3{1.0, 10.0, 10.0};
  channel::RicianShadowedParams link_12{1.0, 10.0, 3.0};
  channel::RicianShadowedParams link_13{1.0, 10.0, 10.0};

  void validate() const;
};

struct SystemConfig {
  double p_t_db = 0.0;
  double r_oma = 0.2;
  double a_gs2 = 0.5;
  double beta = 0.1;
  double phase_noise_dbm = -140.0;
  double noise_dbm = -131.0;
  double epsilon = 0.1;
  unsigned k_tr = channel::kDefaultTruncationOrder;
  NodeGeometry geometry;
  FadingSet fading;

  double a_gs3() const noexcept { return 1.0 - a_gs2; }

  /// Throws DomainError naming the violated invariant.
  void validate() const;
};

/// Reference operating point: K = 10 on every link, m = 3 on the links to
/// and from UAV-2, m = 10 elsewhere, d_12 = 2 km and d_13 = 3 km.
SystemConfig reference_config();

double db_to_linear(double db);

/// Noise-normalized link statistics derived from a SystemConfig. This is the
/// only place where dB quantities become linear.
struct LinkBudget {
  double pt_linear = 1.0;
  channel::RicianShadowedParams x_1g;
  channel::RicianShadowedParams y_si1;
  std::optional<channel::ExponentialParams> y_si2;  // absent when epsilon == 0
  channel::RicianShadowedParams x_g2;
  channel::RicianShadowedParams x_g3;
  channel::RicianShadowedParams y_12;
  channel::RicianShadowedParams y_13;
};

LinkBudget make_link_budget(const SystemConfig& cfg);

/// Per-scheme rate under the equal-resource fairness rule.
double rate_for(Scheme scheme, double r_oma);

/// 2^rate - 1.
double sinr_threshold(double rate);

/// gamma / (alloc - (1 - alloc) residual gamma), or infinite when the
/// denominator is not positive.
Threshold noma_effective_threshold(double gamma, double alloc, double residual);

/// Threshold on the desired-signal SINR used by the closed form for a pair.
Threshold node_threshold(const SystemConfig& cfg, Scheme scheme, Node node);

/// Source of E{X^l} for an interferer in the multinomial outage series.
class MomentSource {
 public:
  static MomentSource rician_shadowed(const channel::RicianShadowedParams& p);
  static MomentSource exponential(const channel::ExponentialParams& p);

  double log_moment(unsigned l) const;
  double moment(unsigned l) const;

 private:
  using Params = std::variant<channel::RicianShadowedParams, channel::ExponentialParams>;
  explicit MomentSource(Params p) : params_(p) {}
  Params params_;
};

/// Truncated multinomial outage series for SINR = X0 / (1 + sum_j X_j):
///   sum_{n=0}^{k_tr} alpha(n, gamma) sum_{l_1+..+l_{N+1}=n+1}
///       (n+1)! / (l_1! .. l_{N+1}!) prod_j E{X_j^{l_j}}
/// where the last slot is the unit noise term. Infinite gamma gives 1.
channel::SeriesEstimate lemma2_outage(const channel::RicianShadowedParams& desired,
                                      std::span<const MomentSource> interferers,
                                      const Threshold& gamma, unsigned k_tr);

struct OutageResult {
  Scheme scheme = Scheme::FdNoma;
  Node node = Node::Gs;
  double probability = 0.0;
  Threshold threshold_used = Threshold::infinite();
  bool converged = true;
};

OutageResult outage_fd_gs(const SystemConfig& cfg);
OutageResult outage_fd_uav(const SystemConfig& cfg, Node node);
OutageResult outage_hd_gs(const SystemConfig& cfg);
OutageResult outage_hd_uav(const SystemConfig& cfg, Node node);
OutageResult outage_oma_gs(const SystemConfig& cfg);
OutageResult outage_oma_uav(const SystemConfig& cfg, Node node);

/// Dispatches to the evaluator for (scheme, node).
OutageResult evaluate(const SystemConfig& cfg, Scheme scheme, Node node);

}  // namespace fdnoma::outage
