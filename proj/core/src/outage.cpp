#include "fdnoma/outage.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fdnoma/errors.hpp"

namespace fdnoma {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::FdNoma: return "FD_NOMA";
    case Scheme::HdNoma: return "HD_NOMA";
    case Scheme::HdOma: return "HD_OMA";
  }
  return "?";
}

std::string_view to_string(Node n) {
  switch (n) {
    case Node::Gs: return "GS";
    case Node::Uav2: return "UAV2";
    case Node::Uav3: return "UAV3";
  }
  return "?";
}

namespace {

std::string lowered(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

}  // namespace

std::optional<Scheme> parse_scheme(std::string_view text) {
  const std::string s = lowered(text);
  if (s == "fd_noma" || s == "fd") return Scheme::FdNoma;
  if (s == "hd_noma" || s == "hd") return Scheme::HdNoma;
  if (s == "hd_oma" || s == "oma") return Scheme::HdOma;
  return std::nullopt;
}

std::optional<Node> parse_node(std::string_view text) {
  const std::string s = lowered(text);
  if (s == "gs") return Node::Gs;
  if (s == "uav2" || s == "uav_2") return Node::Uav2;
  if (s == "uav3" || s == "uav_3") return Node::Uav3;
  return std::nullopt;
}

}  // namespace fdnoma

namespace fdnoma::outage {

using channel::ExponentialParams;
using channel::RicianShadowedParams;
using channel::SeriesEstimate;

Threshold Threshold::finite(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DomainError("Threshold: finite thresholds must be non-negative");
  }
  Threshold t;
  t.infinite_ = false;
  t.value_ = value;
  return t;
}

double Threshold::value() const {
  if (infinite_) throw std::logic_error("Threshold: value() on an infinite threshold");
  return value_;
}

void NodeGeometry::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string("geometry: ") + name + " must be a positive distance");
    }
  };
  positive(d_1g, "d_1g");
  positive(d_g2, "d_g2");
  positive(d_g3, "d_g3");
  positive(d_12, "d_12");
  positive(d_13, "d_13");
  if (!(d_g2 < d_g3)) throw DomainError("geometry: requires d_g2 < d_g3");
  if (!(pathloss_exp >= 1.0)) throw DomainError("geometry: pathloss_exp must be >= 1");
}

void FadingSet::validate() const {
  link_1g.validate();
  si.validate();
  link_g2.validate();
  link_g3.validate();
  link_12.validate();
  link_13.validate();
}

void SystemConfig::validate() const {
  if (!std::isfinite(p_t_db)) throw DomainError("config: p_t must be finite");
  if (!(r_oma >= 0.0) || !std::isfinite(r_oma)) throw DomainError("config: r_oma must be >= 0");
  if (!(a_gs2 > 0.0 && a_gs2 < 1.0)) throw DomainError("config: requires 0 < a_gs2 < 1");
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("config: requires 0 <= beta <= 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("config: epsilon must be >= 0");
  if (!std::isfinite(phase_noise_dbm) || !std::isfinite(noise_dbm)) {
    throw DomainError("config: phase noise and noise power must be finite");
  }
  geometry.validate();
  fading.validate();
}

SystemConfig reference_config() {
  SystemConfig cfg;
  cfg.geometry.d_12 = 2.0;
  cfg.geometry.d_13 = 3.0;
  return cfg;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

LinkBudget make_link_budget(const SystemConfig& cfg) {
  cfg.validate();
  const auto& g = cfg.geometry;
  const auto& f = cfg.fading;
  const double pt = db_to_linear(cfg.p_t_db);
  const double n = g.pathloss_exp;
  auto scaled = [](RicianShadowedParams p, double mean) {
    p.mean_power *= mean;
    return p;
  };

  LinkBudget b;
  b.pt_linear = pt;
  b.x_1g = scaled(f.link_1g, pt / std::pow(g.d_1g, n));
  // P_si = P_t with unit SI channel gain; phase noise scales it by gamma_phi^2 / sigma^2.
  b.y_si1 = scaled(f.si, pt * db_to_linear(cfg.phase_noise_dbm - cfg.noise_dbm));
  if (cfg.epsilon > 0.0) b.y_si2 = ExponentialParams{pt * cfg.epsilon};
  b.x_g2 = scaled(f.link_g2, pt / std::pow(g.d_g2, n));
  b.x_g3 = scaled(f.link_g3, pt / std::pow(g.d_g3, n));
  b.y_12 = scaled(f.link_12, pt / std::pow(g.d_12, n));
  b.y_13 = scaled(f.link_13, pt / std::pow(g.d_13, n));
  return b;
}

double rate_for(Scheme scheme, double r_oma) {
  if (!(r_oma >= 0.0)) throw DomainError("rate_for: r_oma must be non-negative");
  switch (scheme) {
    case Scheme::FdNoma: return r_oma / 3.0;
    case Scheme::HdNoma: return r_oma / 2.0;
    case Scheme::HdOma: return r_oma;
  }
  return r_oma;
}

double sinr_threshold(double rate) {
  if (!(rate >= 0.0)) throw DomainError("sinr_threshold: rate must be non-negative");
  return std::exp2(rate) - 1.0;
}

Threshold noma_effective_threshold(double gamma, double alloc, double residual) {
  if (!(gamma >= 0.0)) throw DomainError("noma_effective_threshold: gamma must be >= 0");
  if (!(alloc > 0.0 && alloc < 1.0)) throw DomainError("noma_effective_threshold: requires 0 < alloc < 1");
  if (!(residual >= 0.0 && residual <= 1.0)) {
    throw DomainError("noma_effective_threshold: requires 0 <= residual <= 1");
  }
  const double denom = alloc - (1.0 - alloc) * residual * gamma;
  if (!(denom > 0.0)) return Threshold::infinite();
  return Threshold::finite(gamma / denom);
}

Threshold node_threshold(const SystemConfig& cfg, Scheme scheme, Node node) {
  const double gamma = sinr_threshold(rate_for(scheme, cfg.r_oma));
  if (node == Node::Gs || scheme == Scheme::HdOma) return Threshold::finite(gamma);
  if (node == Node::Uav2) return noma_effective_threshold(gamma, cfg.a_gs2, cfg.beta);
  return noma_effective_threshold(gamma, cfg.a_gs3(), 1.0);
}

MomentSource MomentSource::rician_shadowed(const RicianShadowedParams& p) {
  p.validate();
  return MomentSource(p);
}

MomentSource MomentSource::exponential(const ExponentialParams& p) {
  p.validate();
  return MomentSource(p);
}

double MomentSource::log_moment(unsigned l) const {
  return std::visit(
      [l](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RicianShadowedParams>) {
          return channel::rician_shadowed_log_moment(p, l);
        } else {
          return channel::exponential_log_moment(p, l);
        }
      },
      params_);
}

double MomentSource::moment(unsigned l) const { return std::exp(log_moment(l)); }

SeriesEstimate lemma2_outage(const RicianShadowedParams& desired,
                             std::span<const MomentSource> interferers, const Threshold& gamma,
                             unsigned k_tr) {
  desired.validate();
  SeriesEstimate out;
  out.terms = k_tr + 1;
  if (gamma.is_infinite()) {
    out.probability = 1.0;
    out.raw_sum = 1.0;
    return out;
  }
  const double g = gamma.value();
  if (g == 0.0) return out;

  const std::size_t slots = interferers.size() + 1;
  // ln E{X_j^l} for l = 0..k_tr+1; the noise slot has every moment equal to 1.
  std::vector<std::vector<double>> log_moments(slots, std::vector<double>(k_tr + 2, 0.0));
  for (std::size_t j = 0; j < interferers.size(); ++j) {
    for (unsigned l = 1; l <= k_tr + 1; ++l) log_moments[j][l] = interferers[j].log_moment(l);
  }

  channel::DivergenceMonitor monitor;
  double sum = 0.0;
  std::vector<double> logs;
  std::vector<int> parts;
  for (unsigned n = 0; n <= k_tr; ++n) {
    const specfun::SignedLog alpha = channel::cdf_series_log_coeff(n, desired, g);
    double term = 0.0;
    if (alpha.sign != 0) {
      const int total = static_cast<int>(n) + 1;
      logs.clear();
      specfun::CompositionStream stream(total, static_cast<int>(slots));
      while (stream.next(parts)) {
        double v = specfun::log_multinomial(parts, total);
        for (std::size_t j = 0; j < slots; ++j) v += log_moments[j][static_cast<unsigned>(parts[j])];
        logs.push_back(v);
      }
      const double peak = *std::max_element(logs.begin(), logs.end());
      double inner = 0.0;
      for (double v : logs) inner += std::exp(v - peak);
      term = alpha.sign * std::exp(alpha.log_abs + peak + std::log(inner));
    }
    monitor.observe(n, std::abs(term));
    sum += term;
  }
  out.raw_sum = sum;
  out.converged = !monitor.diverging() && std::isfinite(sum);
  out.probability = std::isfinite(sum) ? std::clamp(sum, 0.0, 1.0) : 1.0;
  return out;
}

namespace {

OutageResult finish(Scheme scheme, Node node, const Threshold& t, const SeriesEstimate& est) {
  OutageResult r;
  r.scheme = scheme;
  r.node = node;
  r.threshold_used = t;
  r.probability = est.probability;
  r.converged = est.converged;
  return r;
}

void require_uav(Node node) {
  if (node == Node::Gs) throw DomainError("downlink evaluator called for the ground station");
}

const RicianShadowedParams& downlink_signal(const LinkBudget& b, Node node) {
  return node == Node::Uav2 ? b.x_g2 : b.x_g3;
}

SeriesEstimate single_link(const RicianShadowedParams& p, const Threshold& t, unsigned k_tr) {
  if (t.is_infinite()) {
    SeriesEstimate e;
    e.probability = 1.0;
    e.raw_sum = 1.0;
    return e;
  }
  return channel::cdf_truncated(p, t.value(), k_tr);
}

}  // namespace

OutageResult outage_fd_gs(const SystemConfig& cfg) {
  const LinkBudget b = make_link_budget(cfg);
  std::vector<MomentSource> interferers{MomentSource::rician_shadowed(b.y_si1)};
  if (b.y_si2) interferers.push_back(MomentSource::exponential(*b.y_si2));
  const Threshold t = node_threshold(cfg, Scheme::FdNoma, Node::Gs);
  return finish(Scheme::FdNoma, Node::Gs, t, lemma2_outage(b.x_1g, interferers, t, cfg.k_tr));
}

OutageResult outage_fd_uav(const SystemConfig& cfg, Node node) {
  require_uav(node);
  const LinkBudget b = make_link_budget(cfg);
  const MomentSource uplink =
      MomentSource::rician_shadowed(node == Node::Uav2 ? b.y_12 : b.y_13);
  const Threshold t = node_threshold(cfg, Scheme::FdNoma, node);
  return finish(Scheme::FdNoma, node, t,
                lemma2_outage(downlink_signal(b, node), std::span(&uplink, 1), t, cfg.k_tr));
}

OutageResult outage_hd_gs(const SystemConfig& cfg) {
  const LinkBudget b = make_link_budget(cfg);
  const Threshold t = node_threshold(cfg, Scheme::HdNoma, Node::Gs);
  return finish(Scheme::HdNoma, Node::Gs, t, single_link(b.x_1g, t, cfg.k_tr));
}

OutageResult outage_hd_uav(const SystemConfig& cfg, Node node) {
  require_uav(node);
  const LinkBudget b = make_link_budget(cfg);
  const Threshold t = node_threshold(cfg, Scheme::HdNoma, node);
  return finish(Scheme::HdNoma, node, t, single_link(downlink_signal(b, node), t, cfg.k_tr));
}

OutageResult outage_oma_gs(const SystemConfig& cfg) {
  const LinkBudget b = make_link_budget(cfg);
  const Threshold t = node_threshold(cfg, Scheme::HdOma, Node::Gs);
  return finish(Scheme::HdOma, Node::Gs, t, single_link(b.x_1g, t, cfg.k_tr));
}

OutageResult outage_oma_uav(const SystemConfig& cfg, Node node) {
  require_uav(node);
  const LinkBudget b = make_link_budget(cfg);
  const Threshold t = node_threshold(cfg, Scheme::HdOma, node);
  return finish(Scheme::HdOma, node, t, single_link(downlink_signal(b, node), t, cfg.k_tr));
}

OutageResult evaluate(const SystemConfig& cfg, Scheme scheme, Node node) {
  switch (scheme) {
    case Scheme::FdNoma: return node == Node::Gs ? outage_fd_gs(cfg) : outage_fd_uav(cfg, node);
    case Scheme::HdNoma: return node == Node::Gs ? outage_hd_gs(cfg) : outage_hd_uav(cfg, node);
    case Scheme::HdOma: return node == Node::Gs ? outage_oma_gs(cfg) : outage_oma_uav(cfg, node);
  }
  throw DomainError("evaluate: unknown scheme");
}

}  // namespace fdnoma::outage
