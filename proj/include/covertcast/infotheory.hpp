#pragma once

#include "covertcast/channel.hpp"

namespace covertcast {

/// KL divergence D(P||Q) in nats, with 0*log(0/q) = 0.
/// Requires P absolutely continuous w.r.t. Q.
double kl(const Distribution& p, const Distribution& q);

/// Higher-order divergence moment: sum_z (P(z)-Q(z))^k / Q(z)^(k-1).
/// k = 2 is the chi-squared distance. Supported k: 2, 3, 4.
double chi_k(const Distribution& p, const Distribution& q, int k);

/// Same sum restricted to symbols where P(z) < Q(z).
double eta_k(const Distribution& p, const Distribution& q, int k);

/// Total variation distance, in [0, 1].
double variational(const Distribution& p, const Distribution& q);

/// Binary entropy in nats; 0*log 0 = 0.
double binary_entropy(double x);

/// Mutual information of a binary-input channel under input law
/// (1-lambda, lambda), in nats. Zero at lambda = 0 or 1.
double mutual_information(double lambda, const BinaryChannel& ch);

struct CapacityResult {
    double lambda_star;  // capacity-achieving probability of input 1
    double capacity;     // nats per use
};

/// Capacity-achieving input weight of a binary-input channel, found by
/// golden-section bracketing of the concave mutual information followed by
/// bisection on its derivative D(row1||mix) - D(row0||mix). Throws for
/// degenerate channels (capacity below 1e-12).
CapacityResult capacity_input(const BinaryChannel& ch);

/// Scalar functionals of a broadcast channel used by the throughput
/// coefficient formulas: Willie's capacity-achieving input weight, his
/// capacity, and the pairwise divergences of both marginals.
struct ChannelAnalysis {
    double lambda_star;      // in (0,1)
    double capacity_willie;  // nats per use
    double dp10, dp01;       // D(P1||P0), D(P0||P1)
    double dq10, dq01;       // D(Q1||Q0), D(Q0||Q1)
    double chi10, chi01;     // chi^2(Q1||Q0), chi^2(Q0||Q1)
};

ChannelAnalysis analyze_channel(const BroadcastChannel& ch);

/// Covert throughput coefficient at flip ratio gamma:
///   sqrt(2) * (A + B*gamma) / sqrt(C + D*gamma^2)
/// with A=(1-l*)dp10, B=l*dp01, C=(1-l*)chi10, D=l*chi01.
double covert_coefficient(const ChannelAnalysis& a, double gamma);

struct CovertCoefficients {
    double gamma_star;     // maximizer of covert_coefficient, >= 0
    double achievable_ub;  // coefficient value at gamma_star
    double converse_floor; // same quotient with Willie divergences on top
    bool feasible;         // strict keyless advantage at gamma_star
};

/// Closed-form maximizer gamma* = B*C/(A*D) (0 when the numerator
/// degenerates), plus the resulting achievable/converse coefficients and the
/// keyless feasibility flag.
CovertCoefficients optimize_gamma(const ChannelAnalysis& a);

}  // namespace covertcast
