#ifndef MECSIM_CORE_MODEL_HPP_
#define MECSIM_CORE_MODEL_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mecsim {

// One unit of work generated by a UE.
struct Task {
    int id = 0;
    int ue_id = 0;
    double size_bits = 0.0;
    double arrival_s = 0.0;
    double deadline_s = 0.0;  // absolute
};

void validate(const Task& t);

// Static channel constants shared by all UEs.
struct RadioConfig {
    double total_bandwidth_hz = 20e6;
    double guard_band_fraction = 0.10;
    double rb_bandwidth_hz = 180e3;
    double tx_power_w = 0.2;
    double channel_gain = 5e-11;   // gives SNR = 20 dB with the default noise floor
    double noise_power_w = 1e-13;  // -100 dBm

    double effective_bandwidth_hz() const {
        return total_bandwidth_hz * (1.0 - guard_band_fraction);
    }
};

void validate(const RadioConfig& radio);

// Per-task resource-block grant.
struct RadioAllocation {
    int rb_count = 1;

    double bandwidth_hz(const RadioConfig& radio) const {
        return rb_count * radio.rb_bandwidth_hz;
    }
};

struct ServerSpec {
    int id = 0;
    int cpu_count = 1;
    double speed_factor = 1.0;  // 1.0 = reference MEC CPU
};

void validate(const ServerSpec& s);

// Per-task latency components, all seconds.
struct LatencyBreakdown {
    double local_s = 0.0;        // local-portion waiting + processing
    double comm_s = 0.0;         // roundtrip transfer of the offloaded portion
    double mec_compute_s = 0.0;  // offloaded-portion processing
    double waiting_s = 0.0;      // server queueing: start - (arrival + uplink)
};

// Maximum number of resource blocks the effective bandwidth supports.
int rb_max(const RadioConfig& radio);

// Shannon rate in bits/s for a grant of alloc.rb_count blocks.
double data_rate(const RadioAllocation& alloc, const RadioConfig& radio);

// Same formula without the rb_max cap check; the constraint checker
// reports over-cap grants instead of refusing to simulate them.
double data_rate_for_rbs(int rb_count, const RadioConfig& radio);

// Roundtrip transfer time for size_bits at the given rate (factor 2: up + down).
double comm_latency(double size_bits, double rate_bits_per_s);

inline double comm_latency(const Task& task, double rate_bits_per_s) {
    return comm_latency(task.size_bits, rate_bits_per_s);
}

inline double dbm_to_watts(double dbm) {
    return 1e-3 * std::pow(10.0, dbm / 10.0);
}

}  // namespace mecsim

#endif  // MECSIM_CORE_MODEL_HPP_
