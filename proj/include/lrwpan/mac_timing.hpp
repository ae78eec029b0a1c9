#ifndef LRWPAN_MAC_TIMING_HPP
#define LRWPAN_MAC_TIMING_HPP

#include <vector>

namespace lrwpan {

// All durations are in symbol times (T_s = 16 us). A backoff slot is 20
// symbols, a CCA is 8 symbols, the Rx-to-Tx turnaround is 12 symbols and a
// MAC ACK is 22 symbols.
struct MacParams
{
    int mac_min_be = 3;
    int mac_max_be = 5;
    int max_csma_backoffs = 4;  // up to max_csma_backoffs+1 CCA attempts
    int max_frame_retries = 3;  // up to max_frame_retries+1 transmissions
    int data_symbols = 152;     // T_x, DATA frame duration at PHY
    bool ack_enabled = true;

    static constexpr double symbol_time_us = 16.0;
    static constexpr int slot_symbols = 20;
    static constexpr int turnaround_symbols = 12;
    static constexpr int ack_symbols = 22;
    static constexpr int cca_symbols = 8;
    // sender-side wait after DATA: turnaround + ACK
    static constexpr int ack_wait_symbols = turnaround_symbols + ack_symbols;

    int cca_attempts() const { return max_csma_backoffs + 1; }
    int tx_attempts() const { return ack_enabled ? max_frame_retries + 1 : 1; }

    // throws std::invalid_argument on out-of-range fields
    void validate() const;
};

struct BackoffStageMeans
{
    struct Stage
    {
        double fail;     // backoff + CCA, channel found busy
        double success;  // backoff + CCA + turnaround, channel found idle
    };
    std::vector<Stage> stages;  // one entry per CCA attempt
};

// Mean backoff durations per stage; stage k uses BE = min(min_be + k, max_be)
// and the mean of a uniform backoff over [0, 2^BE - 1] slots.
BackoffStageMeans backoff_stage_means(const MacParams& params);

// B-bar: mean time in backoff until the HOL packet is transmitted or
// discarded after exhausting all CCA attempts.
double mean_total_backoff(double alpha, const MacParams& params);

// T1: mean time in backoff given that the packet was transmitted (some CCA
// succeeded). Undefined at alpha = 1.
double mean_backoff_given_success(double alpha, const MacParams& params);

// T2: mean time in backoff given that every CCA attempt failed.
double mean_backoff_given_discard(const MacParams& params);

// T: DATA plus turnaround and ACK when acknowledgements are in use. The same
// period covers success and collision (the sender waits out the full
// macAckWaitDuration either way).
double transmission_period(const MacParams& params);

}  // namespace lrwpan

#endif
