#include "lrwpan/qna.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrwpan {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ServiceMoments service_moments(double beta, double alpha, double gamma, double T)
{
    if (!(beta > 0.0))
        throw std::invalid_argument("service_moments requires beta > 0");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("service_moments requires alpha in [0,1)");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("service_moments requires gamma in [0,1)");
    const double a = beta * (1.0 - alpha);  // effective backoff completion rate
    const double mean = (1.0 / a + T) / (1.0 - gamma);
    const double second = T * T / (1.0 - gamma) +
                          2.0 * (1.0 + a * T) * (1.0 + a * gamma * T) /
                              (a * a * (1.0 - gamma) * (1.0 - gamma));
    return {mean, second};
}

DelayReport qna_sweep(const NetworkSpec& net, const MacParams& params,
                      const SolverResult& solved, QnaVariant variant)
{
    const int n = net.size();
    if (static_cast<int>(solved.states.size()) != n)
        throw std::invalid_argument("qna_sweep: solver result does not match the network");

    const double T = transmission_period(params);
    DelayReport report;
    report.nodes.assign(n, {});
    report.end_to_end.assign(n, kNaN);
    report.delivery.assign(n, kNaN);

    for (int i : net.leaf_to_root_order()) {
        if (net.is_sink(i))
            continue;
        const NodeState& s = solved.states[i];
        NodeDelay& d = report.nodes[i];

        // without ACKs the service ends after the single transmission, so
        // delivery failures do not stretch it
        const double gamma_service = params.ack_enabled ? s.gamma : 0.0;
        const ServiceMoments m = service_moments(s.beta, s.alpha, gamma_service, T);
        d.e_s = m.mean;
        d.e_s2 = m.second;
        d.c_s2 = m.second / (m.mean * m.mean) - 1.0;

        d.arrival_rate = net.node(i).lambda;
        double children_cd2 = 0.0;
        for (int k : net.children(i)) {
            d.arrival_rate += report.nodes[k].arrival_rate;
            children_cd2 += report.nodes[k].arrival_rate * report.nodes[k].c_d2;
        }
        d.rho = d.arrival_rate * d.e_s;
        d.c_a2 = d.arrival_rate > 0.0
                     ? (net.node(i).lambda + children_cd2) / d.arrival_rate
                     : 1.0;
        const double splitting = variant == QnaVariant::paper
                                     ? 1.0 + s.delta * (d.rho * d.rho * (d.c_s2 - 1.0) +
                                                        (1.0 - d.rho * d.rho) * (d.c_a2 - 1.0))
                                     : 1.0 + (1.0 - s.delta) * d.rho * d.rho * (d.c_s2 - 1.0) +
                                           (1.0 - d.rho * d.rho) * (d.c_a2 - 1.0);
        d.c_d2 = splitting;

        d.stable = d.rho < 1.0;
        d.sojourn = d.stable
                        ? d.rho * d.e_s * (d.c_a2 + d.c_s2) / (2.0 * (1.0 - d.rho)) + d.e_s
                        : kNaN;
    }

    for (int i = 0; i < n; ++i) {
        if (net.is_sink(i) || net.role(i) == NodeRole::relay)
            continue;
        report.delivery[i] = delivery_probability(net, params, solved, i);
        bool path_stable = true;
        double total = 0.0;
        for (int v : net.path_to_sink(i)) {
            path_stable = path_stable && report.nodes[v].stable;
            total += report.nodes[v].sojourn;
        }
        report.end_to_end[i] = path_stable ? total : kNaN;
    }
    return report;
}

double end_to_end_delay(const NetworkSpec& net, const DelayReport& report, int source)
{
    double total = 0.0;
    for (int v : net.path_to_sink(source)) {
        if (!report.nodes[v].stable)
            throw std::runtime_error("end_to_end_delay: node " +
                                     std::to_string(net.node(v).id) +
                                     " on the path is unstable");
        total += report.nodes[v].sojourn;
    }
    return total;
}

double delivery_probability(const NetworkSpec& net, const MacParams& params,
                            const SolverResult& solved, int source)
{
    double prob = 1.0;
    for (int v : net.path_to_sink(source)) {
        prob *= 1.0 - solved.states[v].delta;
        if (!params.ack_enabled)
            prob *= 1.0 - solved.states[v].gamma;
    }
    return prob;
}

}  // namespace lrwpan
