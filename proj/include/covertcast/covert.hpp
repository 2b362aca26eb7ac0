#pragma once

#include <cstdint>

#include "covertcast/channel.hpp"
#include "covertcast/infotheory.hpp"

namespace covertcast {

/// Bit-flip probabilities of the perturbation channel: a 0 becomes 1 with
/// probability alpha, a 1 becomes 0 with probability beta. Both in (0,1);
/// gamma is their ratio beta/alpha.
struct CovertParams {
    double alpha;
    double beta;
    double gamma;

    static CovertParams make(double alpha, double beta) {
        CovertParams p{alpha, beta, beta / alpha};
        p.validate();
        return p;
    }
    void validate() const;
};

/// Apply the perturbation channel independently per symbol.
BitSeq perturb(const BitSeq& x_bar, const CovertParams& params, Rng& rng);

/// Channel seen from the unperturbed symbols: row for innocent 0 is
/// (1-a)q0 + a q1, row for innocent 1 is (1-b)q1 + b q0.
BinaryChannel effective_channel(const BinaryChannel& ch, const CovertParams& params);

/// KL divergence, in nats, between the n-fold output distribution of the
/// perturbed codeword and that of the unperturbed one, at Willie. Depends on
/// the codeword only through its weight fraction:
///   n (1-l) D((1-a)Q0 + a Q1 || Q0) + n l D((1-b)Q1 + b Q0 || Q1).
double exact_covert_kl(double weight_frac, std::size_t n, const CovertParams& params,
                       const BinaryChannel& willie);

struct KlSandwich {
    double lower;
    double upper;
};

/// Second-order sandwich on exact_covert_kl:
///   n [ (1-l) a^2/2 (1 -+ sqrt(a)) chi2(Q1||Q0) + l b^2/2 (1 -+ sqrt(b)) chi2(Q0||Q1) ].
/// Returned without checking order against the exact value; empirically the
/// sandwich holds for alpha, beta <= 0.1 when every channel-row entry is at
/// least 0.08 (see kSandwichMaxFlip / kSandwichMinRowMass). It fails outside
/// that region, e.g. at alpha = 0.15 with rows (0.95, 0.05). Both sides scale
/// linearly in n, so validity is governed by the flip rates alone.
KlSandwich sqrt_slack_bounds(double weight_frac, std::size_t n,
                             const CovertParams& params, const BinaryChannel& willie);

inline constexpr double kSandwichMaxFlip = 0.1;
inline constexpr double kSandwichMinRowMass = 0.08;

/// Sharper sandwich from third/fourth divergence moments:
///   upper: a^2/2 chi2 - a^3/6 chi3 + a^4/3 chi4            (per side)
///   lower: a^2/2 chi2 - a^3 (chi3/2 - 2 eta3/3) + 2 a^4/3 eta4
/// Contains the exact value wherever sqrt_slack_bounds does; it is the tighter
/// of the two roughly when sqrt(alpha) < chi2/(chi3 - 4 eta3/3), e.g. for
/// alpha <= 0.1 on BSC rows with mass >= 0.2 but only alpha <= 5e-3 near
/// mass 0.08.
KlSandwich moment_bounds(double weight_frac, std::size_t n, const CovertParams& params,
                         const BinaryChannel& willie);

/// Block-length schedule: alpha_n = a_alpha * n^(-exponent),
/// beta_n = gamma * alpha_n. The exponent defaults to 1/2, the regime in
/// which exact_covert_kl approaches a constant; smaller exponents (e.g. 1/4)
/// serve as detectability negative controls.
struct Schedule {
    double a_alpha = 0.5;
    double gamma = 1.0;
    double mu = 0.1;          // reliability rate slack, in (0,1)
    double nu = 0.1;          // resolvability rate slack, in (0,1)
    double delta = 0.1;       // covert-decoder threshold slack, in (0,1)
    double epsilon_typ = 0.1; // half-width of the typical weight band
    double t_rate = 0.5;      // position of log M1 inside [floor, ceiling]
    double exponent = 0.5;

    void validate() const;
    bool covert_regime() const { return exponent >= 0.5 && exponent < 1.0; }
};

struct RatePoint {
    CovertParams params;
    double log_m1;        // floor + t_rate * (ceiling - floor), nats
    double log_m2;        // (1-mu) * n * capacity_willie, nats
    double floor;         // resolvability floor on log M1
    double ceiling;       // reliability ceiling on log M1
};

/// Evaluate the schedule at block length n. Throws ScheduleInfeasible when
/// the covert rate interval is empty, std::domain_error when the flip
/// probabilities leave (0,1).
RatePoint schedule_at(std::size_t n, const Schedule& s, const ChannelAnalysis& a);

/// floor(exp(log_m)) clamped to >= 2, saturating for large exponents.
std::uint64_t message_count(double log_m);

}  // namespace covertcast
