#include "lrwpan/fixed_point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrwpan {

namespace {

constexpr double kResidualFloor = 1e-12;

double relative_change(double prev, double next)
{
    return std::abs(next - prev) / std::max(std::abs(prev), kResidualFloor);
}

void check_finite(double value, const char* quantity, int node_id)
{
    if (!std::isfinite(value))
        throw std::runtime_error(std::string("fixed point: non-finite ") + quantity +
                                 " at node " + std::to_string(node_id));
}

struct Sweep
{
    std::vector<double> alpha, gamma, nu, theta;
};

// One full evaluation of the update equations at `cur`, writing the new
// tracked unknowns into `out` and all derived per-node quantities into `cur`.
void evaluate(const NetworkSpec& net, const MacParams& params, const InterferenceSets& sets,
              Regime regime, std::vector<NodeState>& cur, Sweep& out)
{
    const int n = net.size();
    const double T = transmission_period(params);

    // service, queue and attempt-rate quantities from the previous unknowns
    for (int i = 0; i < n; ++i) {
        if (net.is_sink(i))
            continue;
        NodeState& s = cur[i];
        s.beta = cca_rate(s.alpha, params);
        s.b = backoff_fraction(s.alpha, params);
        const ServiceStats svc = service_stats(s.alpha, s.gamma, params);
        s.sigma = svc.sigma;
        s.delta = discard_prob(s.alpha, s.gamma, params);
        s.q = std::min(1.0, s.nu / s.sigma);
        s.beta_bar = s.beta * s.b * s.q;
        s.tau_bar = s.beta_bar * (1.0 - s.alpha);
    }

    if (regime == Regime::hidden) {
        for (int i = 0; i < n; ++i) {
            if (net.is_sink(i))
                continue;
            NodeState& s = cur[i];
            s.zeta = 0.0;
            for (int j : net.omega(i))
                s.zeta += cur[j].tau_bar;
            s.t_eff = dilated_period(s.zeta, T);
            const EtaG eg = eta_g(s.beta, s.zeta);
            const double c = simultaneous_sensing_prob(s.beta);
            s.h = not_transmitting_fraction(eg.eta, c, eg.g, T, s.t_eff);
            s.h_bar = (1.0 - s.q) + s.q * s.h;
        }
        for (int i = 0; i < n; ++i) {
            if (net.is_sink(i))
                continue;
            NodeState& s = cur[i];
            const EtaG eg = eta_g(s.beta, s.zeta);
            const double c = simultaneous_sensing_prob(s.beta);
            out.alpha[i] = alpha_hidden(eg.eta, c, s.beta, s.t_eff);
            double prod_h_bar = 1.0, sum_tau_c1 = 0.0, sum_tau_c2 = 0.0;
            for (int j : sets.c1[i])
                sum_tau_c1 += cur[j].tau_bar;
            for (int j : sets.c2[i]) {
                prod_h_bar *= cur[j].h_bar;
                sum_tau_c2 += cur[j].tau_bar;
            }
            const HiddenCollisionTerms terms = collision_prob_hidden(
                eg.eta, c, s.beta, T, prod_h_bar, sum_tau_c1, sum_tau_c2, s.zeta);
            s.p = terms.p;
            out.gamma[i] = packet_failure(s.p, net.node(i).link_error);
        }
    } else {
        double total_beta_bar = 0.0;
        for (int i = 0; i < n; ++i)
            total_beta_bar += cur[i].beta_bar;
        for (int i = 0; i < n; ++i) {
            if (net.is_sink(i))
                continue;
            NodeState& s = cur[i];
            const double others = std::max(0.0, total_beta_bar - s.beta_bar);
            const EtaG eg = eta_g(s.beta, others);
            const double c = simultaneous_sensing_prob(s.beta);
            out.alpha[i] = alpha_no_hidden(eg.eta, c, s.beta, T);
            s.p = collision_prob_no_hidden(eg.eta, c, others);
            out.gamma[i] = packet_failure(s.p, net.node(i).link_error);
        }
    }

    // traffic sweep, children before parents so goodput propagates in one pass
    for (int i : net.leaf_to_root_order()) {
        if (net.is_sink(i))
            continue;
        double from_children = 0.0;
        for (int k : net.children(i))
            from_children += out.theta[k];
        const TrafficUpdate traffic =
            traffic_update(net.node(i).lambda, from_children, cur[i].sigma, cur[i].delta,
                           out.gamma[i], params.ack_enabled);
        out.nu[i] = traffic.nu;
        out.theta[i] = traffic.theta;
    }

    for (int i = 0; i < n; ++i) {
        if (net.is_sink(i))
            continue;
        check_finite(out.alpha[i], "alpha", net.node(i).id);
        check_finite(out.gamma[i], "gamma", net.node(i).id);
        check_finite(out.nu[i], "nu", net.node(i).id);
    }
}

}  // namespace

void SolverOptions::validate() const
{
    if (!(tolerance > 0.0))
        throw std::invalid_argument("tolerance must be > 0");
    if (max_iterations < 1)
        throw std::invalid_argument("max_iterations must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("damping must be in (0, 1]");
}

double residual(const std::vector<NodeState>& prev, const std::vector<NodeState>& next)
{
    if (prev.size() != next.size())
        throw std::invalid_argument("residual: state vectors differ in size");
    double worst = 0.0;
    for (size_t i = 0; i < prev.size(); ++i) {
        worst = std::max(worst, relative_change(prev[i].alpha, next[i].alpha));
        worst = std::max(worst, relative_change(prev[i].gamma, next[i].gamma));
        worst = std::max(worst, relative_change(prev[i].nu, next[i].nu));
    }
    return worst;
}

SolverResult solve(const NetworkSpec& net, const MacParams& params, const SolverOptions& opts)
{
    params.validate();
    opts.validate();

    SolverResult result;
    result.regime = has_hidden_nodes(net) ? Regime::hidden : Regime::no_hidden;
    const InterferenceSets sets = interference_sets(net);

    const int n = net.size();
    std::vector<NodeState> states(n);
    for (int i = 0; i < n; ++i) {
        if (!net.is_sink(i))
            states[i].nu = net.node(i).lambda;
    }

    Sweep next;
    next.alpha.assign(n, 0.0);
    next.gamma.assign(n, 0.0);
    next.nu.assign(n, 0.0);
    next.theta.assign(n, 0.0);

    const double d = opts.damping;
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        evaluate(net, params, sets, result.regime, states, next);

        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            if (net.is_sink(i))
                continue;
            worst = std::max(worst, relative_change(states[i].alpha, next.alpha[i]));
            worst = std::max(worst, relative_change(states[i].gamma, next.gamma[i]));
            worst = std::max(worst, relative_change(states[i].nu, next.nu[i]));
        }
        result.residual_history.push_back(worst);
        result.iterations = iter;

        for (int i = 0; i < n; ++i) {
            if (net.is_sink(i))
                continue;
            states[i].alpha = (1.0 - d) * states[i].alpha + d * next.alpha[i];
            states[i].gamma = (1.0 - d) * states[i].gamma + d * next.gamma[i];
            states[i].nu = (1.0 - d) * states[i].nu + d * next.nu[i];
        }

        if (worst <= opts.tolerance) {
            result.converged = true;
            break;
        }
    }

    // consistency pass: rebuild every derived quantity from the final
    // unknowns so the stored identities hold exactly
    evaluate(net, params, sets, result.regime, states, next);
    for (int i = 0; i < n; ++i) {
        if (net.is_sink(i))
            continue;
        const TrafficUpdate traffic =
            traffic_update(0.0, states[i].nu, states[i].sigma, states[i].delta,
                           states[i].gamma, params.ack_enabled);
        states[i].theta = traffic.theta;
        states[i].q = traffic.q;
        states[i].beta_bar = states[i].beta * states[i].b * states[i].q;
        states[i].tau_bar = states[i].beta_bar * (1.0 - states[i].alpha);
        if (result.regime == Regime::hidden)
            states[i].h_bar = (1.0 - states[i].q) + states[i].q * states[i].h;
    }

    result.states = std::move(states);
    return result;
}

}  // namespace lrwpan
