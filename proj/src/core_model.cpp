#include "mecsim/core_model.hpp"

#include <cmath>

namespace mecsim {

void validate(const Task& t) {
    if (!(t.size_bits > 0.0) || !std::isfinite(t.size_bits))
        throw std::invalid_argument("task " + std::to_string(t.id) + ": size_bits must be > 0");
    if (t.arrival_s < 0.0)
        throw std::invalid_argument("task " + std::to_string(t.id) + ": arrival_s must be >= 0");
    if (!(t.deadline_s > t.arrival_s))
        throw std::invalid_argument("task " + std::to_string(t.id) + ": deadline must be after arrival");
}

void validate(const RadioConfig& radio) {
    if (!(radio.total_bandwidth_hz > 0.0))
        throw std::invalid_argument("total_bandwidth_hz must be > 0");
    if (radio.guard_band_fraction < 0.0 || radio.guard_band_fraction >= 1.0)
        throw std::invalid_argument("guard_band_fraction must be in [0,1)");
    if (!(radio.rb_bandwidth_hz > 0.0))
        throw std::invalid_argument("rb_bandwidth_hz must be > 0");
    if (!(radio.tx_power_w > 0.0))
        throw std::invalid_argument("tx_power_w must be > 0");
    if (!(radio.channel_gain > 0.0))
        throw std::invalid_argument("channel_gain must be > 0");
    if (!(radio.noise_power_w > 0.0))
        throw std::invalid_argument("noise_power_w must be > 0");
    if (rb_max(radio) < 1)
        throw std::invalid_argument("effective bandwidth smaller than one resource block");
}

void validate(const ServerSpec& s) {
    if (s.cpu_count < 1)
        throw std::invalid_argument("server " + std::to_string(s.id) + ": cpu_count must be >= 1");
    if (!(s.speed_factor > 0.0))
        throw std::invalid_argument("server " + std::to_string(s.id) + ": speed_factor must be > 0");
}

int rb_max(const RadioConfig& radio) {
    return static_cast<int>(std::floor(radio.effective_bandwidth_hz() / radio.rb_bandwidth_hz));
}

double data_rate(const RadioAllocation& alloc, const RadioConfig& radio) {
    if (alloc.rb_count < 1 || alloc.rb_count > rb_max(radio))
        throw std::invalid_argument("rb_count " + std::to_string(alloc.rb_count) +
                                    " outside [1, " + std::to_string(rb_max(radio)) + "]");
    return data_rate_for_rbs(alloc.rb_count, radio);
}

double data_rate_for_rbs(int rb_count, const RadioConfig& radio) {
    if (rb_count < 1)
        throw std::invalid_argument("rb_count must be >= 1");
    const double snr = radio.tx_power_w * radio.channel_gain / radio.noise_power_w;
    const double rate = rb_count * radio.rb_bandwidth_hz * std::log2(1.0 + snr);
    if (!std::isfinite(rate) || !(rate > 0.0))
        throw std::invalid_argument("radio config yields non-finite data rate");
    return rate;
}

double comm_latency(double size_bits, double rate_bits_per_s) {
    if (!(rate_bits_per_s > 0.0))
        throw std::invalid_argument("data rate must be > 0");
    return 2.0 * size_bits / rate_bits_per_s;
}

}  // namespace mecsim
