#pragma once

#include "alc/degree.hpp"

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace alc {

/// True with probability p_success. Throws std::invalid_argument unless p in [0, 1].
bool bernoulli_transmit(double p_success, Rng& rng);

/// Whether the sender obtains the receiver's feedback this interval.
bool feedback_arrives(double p_feedback, Rng& rng);

enum class GeInitial { good, bad, stationary };

std::string_view to_string(GeInitial s) noexcept;
GeInitial parse_ge_initial(std::string_view name);

struct GilbertElliottParams
{
  double p_gb = 0.2;  ///< good -> bad
  double p_bg = 0.6;  ///< bad -> good
  GeInitial initial_state = GeInitial::stationary;

  void validate() const;
  /// Long-run fraction of time in the bad state.
  double stationary_loss() const noexcept;

  friend bool operator==(const GilbertElliottParams&, const GilbertElliottParams&) = default;
};

/// Two-state Markov packet-erasure channel. The state transitions before
/// every transmission and is held for the whole packet.
class GilbertElliottChannel
{
public:
  GilbertElliottChannel(GilbertElliottParams params, Rng& rng);

  bool step_and_transmit(Rng& rng);
  bool in_good_state() const noexcept { return good_; }

private:
  GilbertElliottParams params_;
  bool good_ = true;
};

struct Point
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Power/interference erasure abstraction of a single-SF LoRa link to a
/// receiver at the origin.
struct LoRaParams
{
  Point sender{36.0, 36.0};
  std::int64_t n_interferers = 0;
  double box_min = 30.0;  ///< interferer x and y drawn uniformly in [box_min, box_max]
  double box_max = 42.0;
  double pathloss_exponent = 4.0;
  double nakagami_m = 2.5;  ///< +inf disables fading
  double tx_power_dBm = 14.0;
  double sensitivity_dBm = -132.0;
  double capture_threshold_dB = 6.0;
  double interferer_tx_prob = 0.01;
  double activity_scale = 1.0;  ///< multiplies interferer_tx_prob
  double pl_d0_dB = 127.0;
  double d0_m = 40.0;

  void validate() const;
  double path_loss_dB(double distance_m) const;
  double mean_rx_power_dBm(Point from) const;

  friend bool operator==(const LoRaParams&, const LoRaParams&) = default;
};

/// Unit-mean Nakagami-m power gain (Gamma(m, 1/m)); 1 when m is infinite.
double nakagami_power_gain(double m, Rng& rng);

class LoRaChannel
{
public:
  /// Interferer positions are drawn once from `topology_rng`.
  LoRaChannel(LoRaParams params, Rng& topology_rng);

  bool transmit(Rng& rng) const;

  const std::vector<Point>& interferers() const noexcept { return interferers_; }
  const LoRaParams& params() const noexcept { return params_; }

private:
  LoRaParams params_;
  std::vector<Point> interferers_;
  std::vector<double> interferer_mean_dBm_;
  double sender_mean_dBm_ = 0.0;
};

bool lora_transmit(const LoRaChannel& channel, Rng& rng);

} // namespace alc
