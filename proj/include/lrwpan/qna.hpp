#ifndef LRWPAN_QNA_HPP
#define LRWPAN_QNA_HPP

#include "lrwpan/fixed_point.hpp"
#include "lrwpan/mac_timing.hpp"
#include "lrwpan/topology.hpp"

#include <vector>

namespace lrwpan {

// Departure-variability recursion: `paper` keeps the delta multiplier as
// printed in the source model, `whitt` is the standard two-moment form.
enum class QnaVariant { paper, whitt };

struct ServiceMoments
{
    double mean;
    double second;
};

// First two moments of the unbounded-retry service time whose MGF is
// beta(1-alpha)(1-gamma)e^{-zT} / (z + beta(1-alpha)(1-gamma e^{-zT})),
// i.e. exponential backoffs at rate beta, repeated on CCA failure (alpha)
// and on delivery failure (gamma). Requires alpha < 1 and gamma < 1.
ServiceMoments service_moments(double beta, double alpha, double gamma, double T);

struct NodeDelay
{
    double e_s = 0.0;
    double e_s2 = 0.0;
    double c_s2 = 0.0;      // squared coefficient of variation of service
    double arrival_rate = 0.0;  // Lambda_i, discards ignored
    double rho = 0.0;
    double c_a2 = 1.0;
    double c_d2 = 1.0;
    double sojourn = 0.0;   // Delta_i, NaN when unstable
    bool stable = true;
};

struct DelayReport
{
    std::vector<NodeDelay> nodes;     // sink entry unused
    std::vector<double> end_to_end;   // per node; NaN unless a source with a stable path
    std::vector<double> delivery;     // per node; NaN unless a source
};

// Leaf-to-root two-moment sweep over a converged solution. Nodes with
// rho >= 1 are marked unstable; their sojourn and every end-to-end delay
// through them are NaN.
DelayReport qna_sweep(const NetworkSpec& net, const MacParams& params,
                      const SolverResult& solved, QnaVariant variant = QnaVariant::paper);

// Sum of sojourns along the path from `source` to the sink. Throws if any
// node on the path is unstable.
double end_to_end_delay(const NetworkSpec& net, const DelayReport& report, int source);

// Product over the path of per-node retention; without ACKs undetected
// transmission failures count against delivery as well.
double delivery_probability(const NetworkSpec& net, const MacParams& params,
                            const SolverResult& solved, int source);

}  // namespace lrwpan

#endif
