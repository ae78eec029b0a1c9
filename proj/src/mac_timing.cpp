#include "lrwpan/mac_timing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrwpan {

namespace {

void check_alpha(double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must be in [0,1], got " + std::to_string(alpha));
}

}  // namespace

void MacParams::validate() const
{
    if (mac_min_be < 0 || mac_max_be < 0 || mac_min_be > mac_max_be)
        throw std::invalid_argument("require 0 <= mac_min_be <= mac_max_be");
    if (max_csma_backoffs < 0)
        throw std::invalid_argument("max_csma_backoffs must be >= 0");
    if (max_frame_retries < 0)
        throw std::invalid_argument("max_frame_retries must be >= 0");
    if (data_symbols <= 0)
        throw std::invalid_argument("data_symbols must be > 0");
}

BackoffStageMeans backoff_stage_means(const MacParams& params)
{
    params.validate();
    BackoffStageMeans out;
    out.stages.reserve(params.cca_attempts());
    for (int k = 0; k < params.cca_attempts(); ++k) {
        int be = std::min(params.mac_min_be + k, params.mac_max_be);
        // mean of uniform{0, ..., 2^BE - 1} backoff slots
        double mean_backoff = (std::ldexp(1.0, be) - 1.0) / 2.0 * MacParams::slot_symbols;
        double fail = mean_backoff + MacParams::cca_symbols;
        out.stages.push_back({fail, fail + MacParams::turnaround_symbols});
    }
    return out;
}

double mean_total_backoff(double alpha, const MacParams& params)
{
    check_alpha(alpha);
    const BackoffStageMeans means = backoff_stage_means(params);
    const int attempts = params.cca_attempts();
    // Stage k is reached with probability alpha^k and always costs its fail
    // mean (backoff + CCA); a successful CCA adds the 12-symbol turnaround,
    // which happens unless all attempts fail.
    double total = 0.0;
    double ak = 1.0;
    for (int k = 0; k < attempts; ++k) {
        total += ak * means.stages[k].fail;
        ak *= alpha;
    }
    total += MacParams::turnaround_symbols * (1.0 - ak);  // ak == alpha^attempts
    return total;
}

double mean_backoff_given_success(double alpha, const MacParams& params)
{
    check_alpha(alpha);
    if (alpha == 1.0)
        throw std::invalid_argument("mean_backoff_given_success undefined at alpha = 1");
    const BackoffStageMeans means = backoff_stage_means(params);
    const int attempts = params.cca_attempts();
    // Success at stage k has weight alpha^k (1-alpha) and cumulative duration
    // fail_0 + ... + fail_{k-1} + success_k. Evaluated as a ratio of power
    // sums, which stays stable for alpha near 1.
    double cumulative_fail = 0.0;
    double weighted = 0.0;
    double weight_sum = 0.0;
    double ak = 1.0;
    for (int k = 0; k < attempts; ++k) {
        weighted += ak * (cumulative_fail + means.stages[k].success);
        weight_sum += ak;
        cumulative_fail += means.stages[k].fail;
        ak *= alpha;
    }
    return weighted / weight_sum;
}

double mean_backoff_given_discard(const MacParams& params)
{
    const BackoffStageMeans means = backoff_stage_means(params);
    double total = 0.0;
    for (const auto& stage : means.stages)
        total += stage.fail;
    return total;
}

double transmission_period(const MacParams& params)
{
    params.validate();
    if (params.ack_enabled)
        return params.data_symbols + MacParams::ack_wait_symbols;
    return params.data_symbols;
}

}  // namespace lrwpan
