#ifndef LRWPAN_SIM_HPP
#define LRWPAN_SIM_HPP

#include "lrwpan/mac_timing.hpp"
#include "lrwpan/topology.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lrwpan {

struct SimConfig
{
    double measurement_symbols = 0.0;
    double warmup_symbols = -1.0;  // < 0: 10% of measurement, at least 1e5 symbols
    std::uint64_t seed = 1;
    int replications = 1;
    // ACK frames occupy the channel for CCA and collision purposes; turning
    // this off reproduces the analysis assumption that ACKs are invisible.
    bool ack_channel_occupancy = true;

    void validate() const;
    double resolved_warmup() const;
};

// Estimated counterparts of the analytical quantities. Rates are per second,
// times in seconds. delivery/e2e are per source (NaN for relays and sink).
enum Metric : int
{
    kAlpha = 0,   // failed CCAs / CCAs
    kGamma,       // failed transmissions / transmissions
    kColl,        // collided transmissions / transmissions
    kDelta,       // MAC discards / HOL completions
    kTheta,       // packets accepted by the receiver, per second
    kQ,           // non-empty fraction of measurement time
    kB,           // (backoff + CCA + turnaround) time / non-empty time
    kBeta,        // CCAs per second of backoff time
    kSojourn,     // enqueue to HOL completion, seconds
    kDelivery,    // packets reaching the sink / packets generated
    kEndToEnd,    // sum of per-hop sojourns of sink-delivered packets, seconds
    kMetricCount
};

const char* metric_name(int metric);
using MetricArray = std::array<double, kMetricCount>;

// All-time event counts; the conservation identity
//   generated + received == delivered + discarded + lost + queued + serving
// holds exactly at the end of every replication.
struct NodeCounters
{
    std::uint64_t generated = 0;
    std::uint64_t received = 0;
    std::uint64_t delivered = 0;   // accepted by the receiver
    std::uint64_t discarded = 0;   // CCA exhaustion or retry exhaustion
    std::uint64_t lost = 0;        // ACK-less transmissions nobody decoded
    std::uint64_t queued = 0;      // left in queue (incl. HOL) at the end
};

struct RepStats
{
    std::vector<MetricArray> node_metrics;   // per node
    std::vector<NodeCounters> counters;      // per node, all-time
};

struct MetricSummary
{
    double mean = 0.0;
    double ci_half = 0.0;  // Student-t 95% half width across replications
};

struct SimStats
{
    std::vector<std::array<MetricSummary, kMetricCount>> nodes;
    std::vector<RepStats> reps;  // per-replication detail, ordered by index
};

// One replication: event-driven unslotted CSMA/CA with Poisson generation,
// point-sampled CCA, zero propagation delay and zero capture.
RepStats simulate_one(const NetworkSpec& net, const MacParams& params, const SimConfig& cfg,
                      int replication);

// Runs cfg.replications independent replications (seeds seed, seed+1, ...)
// and aggregates mean and 95% confidence half-width per metric.
SimStats simulate(const NetworkSpec& net, const MacParams& params, const SimConfig& cfg);

}  // namespace lrwpan

#endif
