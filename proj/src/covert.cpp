#include "covertcast/covert.hpp"

#include <cmath>
#include <stdexcept>

#include "covertcast/errors.hpp"

namespace covertcast {

void CovertParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("CovertParams: alpha outside (0,1)");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("CovertParams: beta outside (0,1)");
}

BitSeq perturb(const BitSeq& x_bar, const CovertParams& params, Rng& rng) {
    if (x_bar.size() == 0) throw std::invalid_argument("perturb: empty codeword");
    params.validate();
    BitSeq out(x_bar.size());
    for (std::size_t i = 0; i < x_bar.size(); ++i) {
        const double u = rng.next_unit();
        if (x_bar.bit(i))
            out.set_bit(i, !(u < params.beta));
        else
            out.set_bit(i, u < params.alpha);
    }
    return out;
}

BinaryChannel effective_channel(const BinaryChannel& ch, const CovertParams& params) {
    return BinaryChannel(mix(ch.row0, ch.row1, params.alpha),
                         mix(ch.row1, ch.row0, params.beta));
}

namespace {

void check_weight_frac(double weight_frac) {
    if (!(weight_frac >= 0.0 && weight_frac <= 1.0))
        throw std::invalid_argument("weight fraction outside [0,1]");
}

}  // namespace

double exact_covert_kl(double weight_frac, std::size_t n, const CovertParams& params,
                       const BinaryChannel& willie) {
    check_weight_frac(weight_frac);
    params.validate();
    const double d0 = kl(mix(willie.row0, willie.row1, params.alpha), willie.row0);
    const double d1 = kl(mix(willie.row1, willie.row0, params.beta), willie.row1);
    const double nd = static_cast<double>(n);
    return nd * (1.0 - weight_frac) * d0 + nd * weight_frac * d1;
}

KlSandwich sqrt_slack_bounds(double weight_frac, std::size_t n,
                             const CovertParams& params, const BinaryChannel& willie) {
    check_weight_frac(weight_frac);
    params.validate();
    const double c10 = chi_k(willie.row1, willie.row0, 2);
    const double c01 = chi_k(willie.row0, willie.row1, 2);
    const double a = params.alpha, b = params.beta;
    const double nd = static_cast<double>(n);
    const double w0 = nd * (1.0 - weight_frac) * a * a / 2.0 * c10;
    const double w1 = nd * weight_frac * b * b / 2.0 * c01;
    return {w0 * (1.0 - std::sqrt(a)) + w1 * (1.0 - std::sqrt(b)),
            w0 * (1.0 + std::sqrt(a)) + w1 * (1.0 + std::sqrt(b))};
}

KlSandwich moment_bounds(double weight_frac, std::size_t n, const CovertParams& params,
                         const BinaryChannel& willie) {
    check_weight_frac(weight_frac);
    params.validate();
    const auto side = [&](const Distribution& from, const Distribution& to, double r) {
        const double c2 = chi_k(from, to, 2);
        const double c3 = chi_k(from, to, 3);
        const double c4 = chi_k(from, to, 4);
        const double e3 = eta_k(from, to, 3);
        const double e4 = eta_k(from, to, 4);
        const double r2 = r * r, r3 = r2 * r, r4 = r3 * r;
        KlSandwich s;
        s.upper = r2 / 2.0 * c2 - r3 / 6.0 * c3 + r4 / 3.0 * c4;
        s.lower = r2 / 2.0 * c2 - r3 * (c3 / 2.0 - 2.0 * e3 / 3.0) + 2.0 * r4 / 3.0 * e4;
        return s;
    };
    const KlSandwich s0 = side(willie.row1, willie.row0, params.alpha);
    const KlSandwich s1 = side(willie.row0, willie.row1, params.beta);
    const double nd = static_cast<double>(n);
    return {nd * ((1.0 - weight_frac) * s0.lower + weight_frac * s1.lower),
            nd * ((1.0 - weight_frac) * s0.upper + weight_frac * s1.upper)};
}

void Schedule::validate() const {
    if (!(a_alpha > 0.0)) throw ConfigError("schedule: a_alpha must be positive");
    if (!(gamma >= 0.0)) throw ConfigError("schedule: gamma must be nonnegative");
    if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("schedule: mu outside (0,1)");
    if (!(nu > 0.0 && nu < 1.0)) throw ConfigError("schedule: nu outside (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("schedule: delta outside (0,1)");
    if (!(epsilon_typ > 0.0)) throw ConfigError("schedule: epsilon_typ must be positive");
    if (!(t_rate >= 0.0 && t_rate <= 1.0)) throw ConfigError("schedule: t_rate outside [0,1]");
    if (!(exponent > 0.0 && exponent < 1.0)) throw ConfigError("schedule: exponent outside (0,1)");
}

RatePoint schedule_at(std::size_t n, const Schedule& s, const ChannelAnalysis& a) {
    s.validate();
    if (n == 0) throw std::invalid_argument("schedule_at: n must be positive");
    const double nd = static_cast<double>(n);
    const double alpha_n = s.a_alpha * std::pow(nd, -s.exponent);
    const double beta_n = s.gamma * alpha_n;
    if (!(alpha_n > 0.0 && alpha_n < 1.0) || !(beta_n > 0.0 && beta_n < 1.0))
        throw std::domain_error("schedule_at: flip probabilities leave (0,1) at this n");
    const CovertParams params = CovertParams::make(alpha_n, beta_n);

    const double l = a.lambda_star;
    const double floor_v =
        (1.0 + s.nu) * nd * ((1.0 - l) * alpha_n * a.dq10 + l * beta_n * a.dq01);
    const double ceiling_v =
        (1.0 - s.mu) * nd * ((1.0 - l) * alpha_n * a.dp10 + l * beta_n * a.dp01);
    if (ceiling_v < floor_v)
        throw ScheduleInfeasible(
            "covert rate interval empty; increase n or check feasibility");
    RatePoint rp{params, 0.0, 0.0, floor_v, ceiling_v};
    rp.log_m1 = floor_v + s.t_rate * (ceiling_v - floor_v);
    rp.log_m2 = (1.0 - s.mu) * nd * a.capacity_willie;
    return rp;
}

std::uint64_t message_count(double log_m) {
    if (log_m > 43.0) return std::uint64_t{1} << 62;  // saturate well past any usable size
    const double m = std::floor(std::exp(log_m));
    return m < 2.0 ? 2 : static_cast<std::uint64_t>(m);
}

}  // namespace covertcast
