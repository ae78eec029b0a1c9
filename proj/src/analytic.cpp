#include "lrwpan/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrwpan {

EtaG eta_g(double beta_i, double competing_rate)
{
    if (!(beta_i > 0.0))
        throw std::invalid_argument("eta_g requires beta_i > 0");
    if (competing_rate < 0.0)
        throw std::invalid_argument("eta_g requires a nonnegative competing rate");
    const double denom = beta_i + competing_rate;
    return {beta_i / denom, 1.0 / denom};
}

double simultaneous_sensing_prob(double beta_i)
{
    if (beta_i < 0.0)
        throw std::invalid_argument("simultaneous_sensing_prob requires beta_i >= 0");
    return -std::expm1(-12.0 * beta_i);
}

double alpha_no_hidden(double eta, double c, double beta_i, double T)
{
    const double busy = (1.0 - eta) * (1.0 - c) * beta_i * T;
    const double denom = eta + (1.0 - eta) * c + busy;
    if (denom <= 0.0)
        throw std::invalid_argument("alpha: degenerate renewal cycle (eta = c = busy = 0)");
    return busy / denom;
}

double alpha_hidden(double eta, double c, double beta_i, double t_eff)
{
    return alpha_no_hidden(eta, c, beta_i, t_eff);
}

double dilated_period(double zeta, double T)
{
    if (zeta < 0.0 || !(T > 0.0))
        throw std::invalid_argument("dilated_period requires zeta >= 0 and T > 0");
    const double x = zeta * T;
    if (x < 1e-6)
        return T * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0);
    return std::expm1(x) / zeta;
}

double collision_prob_no_hidden(double eta, double c, double sum_beta_bar_others)
{
    const double denom = 1.0 - (1.0 - eta) * (1.0 - c);
    if (denom <= 0.0)
        throw std::invalid_argument("collision probability: eta and c both zero");
    const double num = eta * -std::expm1(-12.0 * sum_beta_bar_others) + (1.0 - eta) * c;
    return num / denom;
}

double not_transmitting_fraction(double eta, double c, double g, double T, double t_eff)
{
    const double silent = g + (1.0 - eta) * (1.0 - c) * t_eff;
    const double cycle = g + eta * T + (1.0 - eta) * c * T + (1.0 - eta) * (1.0 - c) * t_eff;
    if (cycle <= 0.0)
        return 1.0;
    return silent / cycle;
}

HiddenCollisionTerms collision_prob_hidden(double eta, double c, double beta_i, double T,
                                           double prod_h_bar_c2, double sum_tau_c1,
                                           double sum_tau_c2, double sum_tau_omega)
{
    HiddenCollisionTerms t{};
    const double hidden_active = 1.0 - prod_h_bar_c2;
    t.r1 = eta * hidden_active;
    t.r2 = (1.0 - eta) * c * hidden_active;
    t.r3 = eta * prod_h_bar_c2 *
           (1.0 - std::exp(-12.0 * sum_tau_c1) * std::exp(-T * sum_tau_c2));
    t.r4 = (sum_tau_c1 / (beta_i + sum_tau_omega)) * c * prod_h_bar_c2;
    const double denom = eta + (1.0 - eta) * c;
    if (denom <= 0.0)
        throw std::invalid_argument("hidden collision probability: eta and c both zero");
    t.p = std::clamp((t.r1 + t.r2 + t.r3 + t.r4) / denom, 0.0, 1.0);
    return t;
}

double packet_failure(double p, double link_error)
{
    if (!(p >= 0.0 && p <= 1.0) || !(link_error >= 0.0 && link_error <= 1.0))
        throw std::invalid_argument("packet_failure requires probabilities in [0,1]");
    return p + (1.0 - p) * link_error;
}

ServiceStats service_stats(double alpha, double gamma, const MacParams& params)
{
    const double T = transmission_period(params);
    const double discard_all_cca = std::pow(alpha, params.cca_attempts());
    const double t2 = mean_backoff_given_discard(params);
    const double t1 = alpha < 1.0 ? mean_backoff_given_success(alpha, params) : 0.0;
    const double g = params.ack_enabled ? gamma : 0.0;

    double z = discard_all_cca * t2 + (1.0 - discard_all_cca) * t1;
    double y = (1.0 - discard_all_cca) * T;
    for (int attempt = 1; attempt < params.tx_attempts(); ++attempt) {
        z = discard_all_cca * t2 + (1.0 - discard_all_cca) * (t1 + g * z);
        y = (1.0 - discard_all_cca) * (T + g * y);
    }
    return {z, y, 1.0 / (z + y)};
}

double discard_prob(double alpha, double gamma, const MacParams& params)
{
    const double discard_all_cca = std::pow(alpha, params.cca_attempts());
    if (!params.ack_enabled)
        return discard_all_cca;
    double d = discard_all_cca + (1.0 - discard_all_cca) * gamma;
    for (int attempt = 1; attempt < params.tx_attempts(); ++attempt)
        d = discard_all_cca + (1.0 - discard_all_cca) * gamma * d;
    return d;
}

double backoff_fraction(double alpha, const MacParams& params)
{
    const double b_bar = mean_total_backoff(alpha, params);
    const double tx = (1.0 - std::pow(alpha, params.cca_attempts())) * transmission_period(params);
    return b_bar / (b_bar + tx);
}

double cca_rate(double alpha, const MacParams& params)
{
    const double b_bar = mean_total_backoff(alpha, params);
    double attempts = 0.0;
    double ak = 1.0;
    for (int k = 0; k < params.cca_attempts(); ++k) {
        attempts += ak;
        ak *= alpha;
    }
    return attempts / b_bar;
}

TrafficUpdate traffic_update(double lambda, double sum_children_theta, double sigma,
                             double delta, double gamma, bool ack_enabled)
{
    if (!(sigma > 0.0))
        throw std::invalid_argument("traffic_update requires sigma > 0");
    TrafficUpdate out{};
    out.nu = lambda + sum_children_theta;
    out.q = std::min(1.0, out.nu / sigma);
    double delivered = std::min(out.nu, sigma) * (1.0 - delta);
    if (!ack_enabled)
        delivered *= 1.0 - gamma;
    out.theta = delivered;
    return out;
}

}  // namespace lrwpan
