#include "alc/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace alc {

namespace {

void check_probability(double p, const char* what)
{
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string{what} + " must be a probability in [0, 1]");
  }
}

bool draw(double p, Rng& rng)
{
  // p == 1 and p == 0 never consume randomness differently from other p.
  return std::uniform_real_distribution<double>{0.0, 1.0}(rng) < p;
}

} // namespace

bool bernoulli_transmit(double p_success, Rng& rng)
{
  check_probability(p_success, "p_success");
  return draw(p_success, rng);
}

bool feedback_arrives(double p_feedback, Rng& rng)
{
  check_probability(p_feedback, "p_feedback");
  return draw(p_feedback, rng);
}

std::string_view to_string(GeInitial s) noexcept
{
  switch (s) {
    case GeInitial::good: return "good";
    case GeInitial::bad: return "bad";
    case GeInitial::stationary: return "stationary";
  }
  return "unknown";
}

GeInitial parse_ge_initial(std::string_view name)
{
  for (auto s : {GeInitial::good, GeInitial::bad, GeInitial::stationary}) {
    if (to_string(s) == name) {
      return s;
    }
  }
  throw std::invalid_argument("unknown Gilbert-Elliott initial state '" + std::string{name} + "'");
}

void GilbertElliottParams::validate() const
{
  check_probability(p_gb, "p_gb");
  check_probability(p_bg, "p_bg");
}

double GilbertElliottParams::stationary_loss() const noexcept
{
  const double sum = p_gb + p_bg;
  return sum > 0.0 ? p_gb / sum : 0.0;
}

GilbertElliottChannel::GilbertElliottChannel(GilbertElliottParams params, Rng& rng)
  : params_{params}
{
  params_.validate();
  switch (params_.initial_state) {
    case GeInitial::good: good_ = true; break;
    case GeInitial::bad: good_ = false; break;
    case GeInitial::stationary: good_ = !draw(params_.stationary_loss(), rng); break;
  }
}

bool GilbertElliottChannel::step_and_transmit(Rng& rng)
{
  good_ = good_ ? !draw(params_.p_gb, rng) : draw(params_.p_bg, rng);
  return good_;
}

void LoRaParams::validate() const
{
  if (n_interferers < 0) {
    throw std::invalid_argument("n_interferers must be non-negative");
  }
  if (!(nakagami_m > 0.5)) {
    throw std::invalid_argument("nakagami_m must exceed 0.5");
  }
  if (!(box_max >= box_min)) {
    throw std::invalid_argument("interferer box must satisfy box_min <= box_max");
  }
  if (!(d0_m > 0.0) || !(pathloss_exponent > 0.0)) {
    throw std::invalid_argument("d0_m and pathloss_exponent must be positive");
  }
  check_probability(interferer_tx_prob * activity_scale, "interferer_tx_prob * activity_scale");
}

double LoRaParams::path_loss_dB(double distance_m) const
{
  return pl_d0_dB + 10.0 * pathloss_exponent * std::log10(distance_m / d0_m);
}

double LoRaParams::mean_rx_power_dBm(Point from) const
{
  return tx_power_dBm - path_loss_dB(std::hypot(from.x, from.y));
}

double nakagami_power_gain(double m, Rng& rng)
{
  if (std::isinf(m)) {
    return 1.0;
  }
  return std::gamma_distribution<double>{m, 1.0 / m}(rng);
}

LoRaChannel::LoRaChannel(LoRaParams params, Rng& topology_rng)
  : params_{params}
{
  params_.validate();
  std::uniform_real_distribution<double> coord{params_.box_min, params_.box_max};
  interferers_.reserve(static_cast<std::size_t>(params_.n_interferers));
  for (std::int64_t k = 0; k < params_.n_interferers; ++k) {
    const double x = coord(topology_rng);
    const double y = coord(topology_rng);
    interferers_.push_back({x, y});
    interferer_mean_dBm_.push_back(params_.mean_rx_power_dBm(interferers_.back()));
  }
  sender_mean_dBm_ = params_.mean_rx_power_dBm(params_.sender);
}

bool LoRaChannel::transmit(Rng& rng) const
{
  const double m = params_.nakagami_m;
  const double signal_dBm = sender_mean_dBm_ + 10.0 * std::log10(nakagami_power_gain(m, rng));
  bool ok = signal_dBm >= params_.sensitivity_dBm;

  // Every interferer's activity and fading are drawn regardless of the
  // outcome so the random stream does not depend on earlier results.
  const double p_active = params_.interferer_tx_prob * params_.activity_scale;
  for (double mean_dBm : interferer_mean_dBm_) {
    if (!draw(p_active, rng)) {
      continue;
    }
    const double interf_dBm = mean_dBm + 10.0 * std::log10(nakagami_power_gain(m, rng));
    if (signal_dBm - interf_dBm < params_.capture_threshold_dB) {
      ok = false;
    }
  }
  return ok;
}

bool lora_transmit(const LoRaChannel& channel, Rng& rng)
{
  return channel.transmit(rng);
}

} // namespace alc
