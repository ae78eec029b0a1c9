#ifndef LRWPAN_ANALYTIC_HPP
#define LRWPAN_ANALYTIC_HPP

#include "lrwpan/mac_timing.hpp"
#include "lrwpan/topology.hpp"

#include <vector>

namespace lrwpan {

// The per-node unknown vector iterated by the fixed-point solver. Rates are
// per symbol time. beta_bar and tau_bar are recomputed from their identities
// every sweep, never updated independently.
struct NodeState
{
    double alpha = 0.0;    // CCA failure probability
    double p = 0.0;        // packet collision probability
    double gamma = 0.0;    // packet failure probability (collision or noise)
    double nu = 0.0;       // aggregate arrival rate
    double theta = 0.0;    // goodput into the receiver's queue
    double delta = 0.0;    // MAC discard probability
    double sigma = 0.0;    // HOL service rate
    double q = 0.0;        // queue non-empty probability
    double b = 0.0;        // backoff fraction of non-empty time
    double beta = 0.0;     // CCA rate conditioned on backoff
    double beta_bar = 0.0; // = beta * b * q
    double tau_bar = 0.0;  // = beta_bar * (1 - alpha)
    double zeta = 0.0;     // aggregate initiation rate of CS neighbours
    double t_eff = 0.0;    // dilated activity period
    double h = 0.0;        // not-transmitting fraction while non-empty
    double h_bar = 1.0;    // = (1 - q) + q * h
};

struct EtaG
{
    double eta;
    double g;
};

// eta = beta_i / (beta_i + competing), g = 1 / (beta_i + competing).
// No hidden nodes: competing = sum of beta_bar over every other node.
// Hidden nodes: competing = sum of tau_bar over Omega_i.
EtaG eta_g(double beta_i, double competing_rate);

// c_i = 1 - exp(-12 beta_i): both nodes pass CCA inside one turnaround.
double simultaneous_sensing_prob(double beta_i);

// CCA failure probability; the hidden-node form is the same expression with
// T replaced by the dilated period.
double alpha_no_hidden(double eta, double c, double beta_i, double T);
double alpha_hidden(double eta, double c, double beta_i, double t_eff);

// Mean busy period of an M/D/infinity queue: (e^{zeta T} - 1) / zeta,
// evaluated by series for small zeta*T.
double dilated_period(double zeta, double T);

// Collision probability without hidden nodes: simultaneous sensing only.
double collision_prob_no_hidden(double eta, double c, double sum_beta_bar_others);

// h_i: fraction of a renewal cycle spent not transmitting.
double not_transmitting_fraction(double eta, double c, double g, double T, double t_eff);

struct HiddenCollisionTerms
{
    double r1, r2, r3, r4;
    double p;
};

// Hidden-regime collision probability for transmitter i. prod_h_bar_c2 is
// the product of h_bar over C2, the sum arguments range over C1 / C2 /
// Omega_i respectively.
HiddenCollisionTerms collision_prob_hidden(double eta, double c, double beta_i, double T,
                                           double prod_h_bar_c2, double sum_tau_c1,
                                           double sum_tau_c2, double sum_tau_omega);

// gamma = p + (1 - p) l
double packet_failure(double p, double link_error);

struct ServiceStats
{
    double z_bar;  // mean total backoff time per HOL packet
    double y_bar;  // mean total transmission time per HOL packet
    double sigma;  // 1 / (z_bar + y_bar)
};

// Expands the retry recursion to tx_attempts() levels; without ACKs there is
// a single transmission and gamma plays no role.
ServiceStats service_stats(double alpha, double gamma, const MacParams& params);

// Probability that a HOL packet is eventually dropped: CCA exhaustion at any
// attempt, or failure of the final transmission.
double discard_prob(double alpha, double gamma, const MacParams& params);

// b = B / (B + (1 - alpha^K) T)
double backoff_fraction(double alpha, const MacParams& params);

// beta = (1 + alpha + ... + alpha^{K-1}) / B
double cca_rate(double alpha, const MacParams& params);

struct TrafficUpdate
{
    double nu;
    double theta;
    double q;
};

// nu = lambda + sum of children's goodput; q and theta saturate at sigma.
// Without ACKs an undelivered transmission is lost, so the hop goodput picks
// up the extra (1 - gamma) factor.
TrafficUpdate traffic_update(double lambda, double sum_children_theta, double sigma,
                             double delta, double gamma, bool ack_enabled);

}  // namespace lrwpan

#endif
