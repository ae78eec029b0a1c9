#include "lrwpan/sim.hpp"

#include "lrwpan/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

namespace lrwpan {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSymbolSeconds = 16e-6;

// two-sided 95% Student-t quantiles by degrees of freedom
double student_t_95(int dof)
{
    static constexpr double table[] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (dof < 1)
        return 0.0;
    if (dof <= 30)
        return table[dof - 1];
    return 1.96;
}

enum class EventType : std::uint8_t
{
    arrival,
    backoff_end,
    cca_end,
    turnaround_end,
    data_end,
    ack_start,
    ack_end,
    period_end
};

struct Event
{
    double t;
    std::uint64_t seq;
    EventType type;
    int node;
};

struct EventAfter
{
    bool operator()(const Event& a, const Event& b) const
    {
        if (a.t != b.t)
            return a.t > b.t;
        return a.seq > b.seq;
    }
};

enum class Phase : std::uint8_t { idle, backoff, cca, turnaround, transmitting };

struct PacketRt
{
    int source;
    double enqueue;
    double sojourn_acc;  // completed-hop sojourns, symbol times
    bool measured;       // generated after warmup
};

struct Measured
{
    std::uint64_t cca_attempts = 0, cca_failures = 0;
    std::uint64_t transmissions = 0, collisions = 0, tx_failures = 0;
    std::uint64_t serviced = 0, discards = 0, deliveries = 0;
    double busy_time = 0.0, backoff_time = 0.0;
    double sojourn_sum = 0.0;
    std::uint64_t sojourn_n = 0;
    std::uint64_t generated = 0, to_sink = 0;
    double e2e_sum = 0.0;
    std::uint64_t e2e_n = 0;
};

struct NodeRt
{
    std::deque<PacketRt> queue;
    Phase phase = Phase::idle;
    double phase_start = 0.0;
    int backoff_stage = 0;
    int retry_count = 0;
    bool cca_busy = false;
    bool tx_active = false;
    double tx_end = 0.0;
    bool tx_corrupted = false;
    bool tx_noise_failed = false;
    bool ack_outcome = false;
    bool ack_active = false;
    double ack_until = 0.0;
    Rng arrivals{0}, backoffs{0}, noise{0};
    NodeCounters count;
    Measured meas;
};

class Simulation
{
  public:
    Simulation(const NetworkSpec& net, const MacParams& params, const SimConfig& cfg,
               int replication)
        : net_(net), params_(params), cfg_(cfg)
    {
        params_.validate();
        cfg_.validate();
        warmup_ = cfg_.resolved_warmup();
        end_ = warmup_ + cfg_.measurement_symbols;
        data_symbols_ = params_.data_symbols;
        ack_mode_ = params_.ack_enabled;
        period_tail_ = ack_mode_ ? MacParams::ack_wait_symbols : 0;

        const int n = net_.size();
        nodes_.resize(n);
        const std::uint64_t seed = cfg_.seed + static_cast<std::uint64_t>(replication);
        for (int i = 0; i < n; ++i) {
            nodes_[i].arrivals = make_stream(seed, i, 0);
            nodes_[i].backoffs = make_stream(seed, i, 1);
            nodes_[i].noise = make_stream(seed, i, 2);
        }

        // interferes_[i][j]: activity of j corrupts a frame on link i -> r(i)
        interferes_.assign(n, std::vector<bool>(n, false));
        const InterferenceSets sets = interference_sets(net_);
        for (int i = 0; i < n; ++i) {
            for (int j : sets.c1[i])
                interferes_[i][j] = true;
            for (int j : sets.c2[i])
                interferes_[i][j] = true;
        }
    }

    RepStats run()
    {
        for (int i = 0; i < net_.size(); ++i) {
            if (net_.node(i).lambda > 0.0)
                schedule(nodes_[i].arrivals.exponential(net_.node(i).lambda), EventType::arrival,
                         i);
        }

        while (!events_.empty() && events_.top().t <= end_) {
            const Event ev = events_.top();
            events_.pop();
            now_ = ev.t;
            dispatch(ev);
        }

        // close all open phase intervals at the horizon
        now_ = end_;
        for (int i = 0; i < net_.size(); ++i)
            set_phase(i, nodes_[i].phase);

        return collect();
    }

  private:
    void schedule(double t, EventType type, int node)
    {
        events_.push(Event{t, next_seq_++, type, node});
    }

    bool measured() const { return now_ >= warmup_; }

    void set_phase(int i, Phase next)
    {
        NodeRt& node = nodes_[i];
        const double lo = std::max(node.phase_start, warmup_);
        const double hi = std::min(now_, end_);
        if (hi > lo) {
            if (node.phase != Phase::idle)
                node.meas.busy_time += hi - lo;
            if (node.phase == Phase::backoff || node.phase == Phase::cca ||
                node.phase == Phase::turnaround)
                node.meas.backoff_time += hi - lo;
        }
        node.phase = next;
        node.phase_start = now_;
    }

    bool channel_busy_for(int i) const
    {
        for (int j : net_.omega(i)) {
            const NodeRt& other = nodes_[j];
            if (other.tx_active && now_ < other.tx_end)
                return true;
            if (cfg_.ack_channel_occupancy && other.ack_active && now_ < other.ack_until)
                return true;
        }
        return false;
    }

    // activity by `actor` corrupts every in-flight frame it interferes with
    void corrupt_overlapping(int actor)
    {
        for (int j = 0; j < net_.size(); ++j) {
            NodeRt& other = nodes_[j];
            if (j != actor && other.tx_active && now_ < other.tx_end &&
                interferes_[j][actor])
                other.tx_corrupted = true;
        }
    }

    void dispatch(const Event& ev)
    {
        switch (ev.type) {
            case EventType::arrival: on_arrival(ev.node); break;
            case EventType::backoff_end: on_backoff_end(ev.node); break;
            case EventType::cca_end: on_cca_end(ev.node); break;
            case EventType::turnaround_end: on_turnaround_end(ev.node); break;
            case EventType::data_end: on_data_end(ev.node); break;
            case EventType::ack_start: on_ack_start(ev.node); break;
            case EventType::ack_end: on_ack_end(ev.node); break;
            case EventType::period_end: on_period_end(ev.node); break;
        }
    }

    void on_arrival(int i)
    {
        NodeRt& node = nodes_[i];
        schedule(now_ + node.arrivals.exponential(net_.node(i).lambda), EventType::arrival, i);
        node.count.generated++;
        if (measured())
            node.meas.generated++;
        node.queue.push_back(PacketRt{i, now_, 0.0, measured()});
        if (node.phase == Phase::idle) {
            node.backoff_stage = 0;
            node.retry_count = 0;
            start_backoff(i);
        }
    }

    void start_backoff(int i)
    {
        NodeRt& node = nodes_[i];
        const int be = std::min(params_.mac_min_be + node.backoff_stage, params_.mac_max_be);
        const double duration =
            static_cast<double>(node.backoffs.uniform_pow2(be)) * MacParams::slot_symbols;
        set_phase(i, Phase::backoff);
        schedule(now_ + duration, EventType::backoff_end, i);
    }

    void on_backoff_end(int i)
    {
        NodeRt& node = nodes_[i];
        // point sample at CCA initiation; the 8 symbols still elapse
        node.cca_busy = channel_busy_for(i);
        if (measured()) {
            node.meas.cca_attempts++;
            if (node.cca_busy)
                node.meas.cca_failures++;
        }
        set_phase(i, Phase::cca);
        schedule(now_ + MacParams::cca_symbols, EventType::cca_end, i);
    }

    void on_cca_end(int i)
    {
        NodeRt& node = nodes_[i];
        if (!node.cca_busy) {
            set_phase(i, Phase::turnaround);
            schedule(now_ + MacParams::turnaround_symbols, EventType::turnaround_end, i);
            return;
        }
        node.backoff_stage++;
        assert(node.backoff_stage <= params_.max_csma_backoffs + 1);
        if (node.backoff_stage > params_.max_csma_backoffs)
            complete_hol(i, Outcome::discarded);
        else
            start_backoff(i);
    }

    void on_turnaround_end(int i)
    {
        NodeRt& node = nodes_[i];
        node.tx_active = true;
        node.tx_end = now_ + data_symbols_;
        node.tx_noise_failed = node.noise.bernoulli(net_.node(i).link_error);
        node.tx_corrupted = false;
        // collision bookkeeping against everything already on the air
        for (int j = 0; j < net_.size(); ++j) {
            if (j == i)
                continue;
            const NodeRt& other = nodes_[j];
            const bool other_data = other.tx_active && now_ < other.tx_end;
            const bool other_ack = cfg_.ack_channel_occupancy && other.ack_active &&
                                   now_ < other.ack_until;
            if ((other_data || other_ack) && interferes_[i][j])
                node.tx_corrupted = true;
        }
        corrupt_overlapping(i);
        if (measured())
            node.meas.transmissions++;
        set_phase(i, Phase::transmitting);
        schedule(now_ + data_symbols_, EventType::data_end, i);
    }

    void on_data_end(int i)
    {
        NodeRt& node = nodes_[i];
        node.tx_active = false;
        const bool failed = node.tx_corrupted || node.tx_noise_failed;
        if (measured()) {
            if (node.tx_corrupted)
                node.meas.collisions++;
            if (failed)
                node.meas.tx_failures++;
        }

        if (!failed)
            deliver(i);

        if (ack_mode_) {
            if (!failed) {
                const int r = net_.parent_index(i);
                schedule(now_ + MacParams::turnaround_symbols, EventType::ack_start, r);
                schedule(now_ + MacParams::ack_wait_symbols, EventType::ack_end, r);
            }
            node.ack_outcome = !failed;
            schedule(now_ + MacParams::ack_wait_symbols, EventType::period_end, i);
        } else {
            complete_hol(i, failed ? Outcome::lost : Outcome::delivered);
        }
    }

    // hands the HOL frame's payload to the parent queue (or the sink)
    void deliver(int i)
    {
        NodeRt& node = nodes_[i];
        assert(!node.queue.empty());
        const PacketRt& hol = node.queue.front();
        const double period_end = now_ + period_tail_;
        const double acc = hol.sojourn_acc + (period_end - hol.enqueue);
        const int r = net_.parent_index(i);
        if (net_.is_sink(r)) {
            if (hol.measured) {
                Measured& src = nodes_[hol.source].meas;
                src.to_sink++;
                src.e2e_sum += acc;
                src.e2e_n++;
            }
            return;
        }
        NodeRt& parent = nodes_[r];
        parent.count.received++;
        parent.queue.push_back(PacketRt{hol.source, now_, acc, hol.measured});
        if (parent.phase == Phase::idle) {
            parent.backoff_stage = 0;
            parent.retry_count = 0;
            start_backoff(r);
        }
    }

    void on_ack_start(int r)
    {
        NodeRt& node = nodes_[r];
        assert(!node.ack_active);
        node.ack_active = true;
        node.ack_until = now_ + MacParams::ack_symbols;
        if (cfg_.ack_channel_occupancy)
            corrupt_overlapping(r);
    }

    void on_ack_end(int r) { nodes_[r].ack_active = false; }

    void on_period_end(int i)
    {
        NodeRt& node = nodes_[i];
        if (node.ack_outcome) {
            complete_hol(i, Outcome::delivered);
            return;
        }
        node.retry_count++;
        assert(node.retry_count <= params_.max_frame_retries + 1);
        if (node.retry_count > params_.max_frame_retries) {
            complete_hol(i, Outcome::discarded);
        } else {
            node.backoff_stage = 0;
            start_backoff(i);
        }
    }

    enum class Outcome { delivered, discarded, lost };

    void complete_hol(int i, Outcome outcome)
    {
        NodeRt& node = nodes_[i];
        assert(!node.queue.empty());
        const PacketRt hol = node.queue.front();
        node.queue.pop_front();

        switch (outcome) {
            case Outcome::delivered: node.count.delivered++; break;
            case Outcome::discarded: node.count.discarded++; break;
            case Outcome::lost: node.count.lost++; break;
        }
        if (measured()) {
            node.meas.serviced++;
            if (outcome == Outcome::delivered)
                node.meas.deliveries++;
            if (outcome == Outcome::discarded)
                node.meas.discards++;
            node.meas.sojourn_sum += now_ - hol.enqueue;
            node.meas.sojourn_n++;
        }

        node.backoff_stage = 0;
        node.retry_count = 0;
        if (!node.queue.empty())
            start_backoff(i);
        else
            set_phase(i, Phase::idle);
    }

    RepStats collect() const
    {
        RepStats rep;
        const int n = net_.size();
        rep.node_metrics.assign(n, MetricArray{});
        rep.counters.assign(n, NodeCounters{});
        const double meas_symbols = cfg_.measurement_symbols;
        const double meas_seconds = meas_symbols * kSymbolSeconds;

        for (int i = 0; i < n; ++i) {
            const NodeRt& node = nodes_[i];
            NodeCounters c = node.count;
            c.queued = node.queue.size();
            rep.counters[i] = c;

            const std::uint64_t in = c.generated + c.received;
            const std::uint64_t out = c.delivered + c.discarded + c.lost + c.queued;
            if (in != out)
                throw std::logic_error("packet conservation violated at node " +
                                       std::to_string(net_.node(i).id));

            const Measured& m = node.meas;
            MetricArray& out_metrics = rep.node_metrics[i];
            auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
            out_metrics[kAlpha] = ratio(double(m.cca_failures), double(m.cca_attempts));
            out_metrics[kGamma] = ratio(double(m.tx_failures), double(m.transmissions));
            out_metrics[kColl] = ratio(double(m.collisions), double(m.transmissions));
            out_metrics[kDelta] = ratio(double(m.discards), double(m.serviced));
            out_metrics[kTheta] = double(m.deliveries) / meas_seconds;
            out_metrics[kQ] = m.busy_time / meas_symbols;
            out_metrics[kB] = ratio(m.backoff_time, m.busy_time);
            out_metrics[kBeta] = ratio(double(m.cca_attempts), m.backoff_time) / kSymbolSeconds;
            out_metrics[kSojourn] =
                ratio(m.sojourn_sum, double(m.sojourn_n)) * kSymbolSeconds;
            const bool is_source = !net_.is_sink(i) && net_.node(i).lambda > 0.0;
            out_metrics[kDelivery] =
                is_source ? ratio(double(m.to_sink), double(m.generated)) : kNaN;
            out_metrics[kEndToEnd] =
                is_source ? ratio(m.e2e_sum, double(m.e2e_n)) * kSymbolSeconds : kNaN;
        }
        return rep;
    }

    const NetworkSpec& net_;
    MacParams params_;
    SimConfig cfg_;
    double warmup_ = 0.0;
    double end_ = 0.0;
    double data_symbols_ = 0.0;
    bool ack_mode_ = true;
    double period_tail_ = 0.0;
    double now_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::vector<NodeRt> nodes_;
    std::vector<std::vector<bool>> interferes_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
};

}  // namespace

void SimConfig::validate() const
{
    if (!(measurement_symbols > 0.0))
        throw std::invalid_argument("measurement duration must be > 0");
    if (replications < 1)
        throw std::invalid_argument("replications must be >= 1");
}

double SimConfig::resolved_warmup() const
{
    if (warmup_symbols >= 0.0)
        return warmup_symbols;
    return std::max(0.1 * measurement_symbols, 1e5);
}

const char* metric_name(int metric)
{
    static constexpr const char* names[kMetricCount] = {
        "alpha", "gamma", "p", "delta", "theta_pps", "q",
        "b",     "beta_pps", "sojourn_s", "delivery", "e2e_delay_s"};
    return names[metric];
}

RepStats simulate_one(const NetworkSpec& net, const MacParams& params, const SimConfig& cfg,
                      int replication)
{
    Simulation sim(net, params, cfg, replication);
    return sim.run();
}

SimStats simulate(const NetworkSpec& net, const MacParams& params, const SimConfig& cfg)
{
    cfg.validate();
    SimStats stats;
    stats.reps.resize(cfg.replications);

    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), cfg.replications);
    if (workers <= 1) {
        for (int k = 0; k < cfg.replications; ++k)
            stats.reps[k] = simulate_one(net, params, cfg, k);
    } else {
        std::vector<std::future<RepStats>> futures;
        futures.reserve(cfg.replications);
        for (int k = 0; k < cfg.replications; ++k)
            futures.push_back(std::async(std::launch::async, [&, k] {
                return simulate_one(net, params, cfg, k);
            }));
        for (int k = 0; k < cfg.replications; ++k)
            stats.reps[k] = futures[k].get();
    }

    const int n = net.size();
    const int reps = cfg.replications;
    stats.nodes.assign(n, {});
    for (int i = 0; i < n; ++i) {
        for (int metric = 0; metric < kMetricCount; ++metric) {
            double sum = 0.0;
            bool any_nan = false;
            for (int k = 0; k < reps; ++k) {
                const double v = stats.reps[k].node_metrics[i][metric];
                any_nan = any_nan || std::isnan(v);
                sum += v;
            }
            MetricSummary& cell = stats.nodes[i][metric];
            if (any_nan) {
                cell.mean = kNaN;
                cell.ci_half = kNaN;
                continue;
            }
            cell.mean = sum / reps;
            if (reps > 1) {
                double ss = 0.0;
                for (int k = 0; k < reps; ++k) {
                    const double d = stats.reps[k].node_metrics[i][metric] - cell.mean;
                    ss += d * d;
                }
                const double stdev = std::sqrt(ss / (reps - 1));
                cell.ci_half = student_t_95(reps - 1) * stdev / std::sqrt(double(reps));
            }
        }
    }
    return stats;
}

}  // namespace lrwpan
