#include "covertcast/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace covertcast {

namespace {

double score_word(const LogRows& t, const BitSeq& x, std::span<const std::uint8_t> z) {
    double s = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) s += t.at(x.bit(l), z[l]);
    return s;
}

double logsumexp_minus_logm(const std::vector<double>& v, std::size_t m) {
    const double mx = *std::max_element(v.begin(), v.end());
    if (std::isinf(mx) && mx < 0.0) return mx;
    double acc = 0.0;
    for (double s : v) acc += std::exp(s - mx);
    return mx + std::log(acc) - std::log(static_cast<double>(m));
}

}  // namespace

double induced_logprob(const Codebooks& cb, std::size_t j,
                       std::span<const std::uint8_t> z, const BinaryChannel& willie) {
    if (j < 1 || j > cb.m2) throw std::out_of_range("induced_logprob: j outside [1, M2]");
    if (z.size() != cb.n) throw std::invalid_argument("induced_logprob: length mismatch");
    const LogRows t = log_rows(willie);
    std::vector<double> scores(cb.m1);
    for (std::size_t i = 1; i <= cb.m1; ++i)
        scores[i - 1] = score_word(t, cb.covert_word(j, i), z);
    const double lp = logsumexp_minus_logm(scores, cb.m1);
    if (std::isinf(lp) && lp < 0.0)
        throw std::domain_error(
            "induced_logprob: observation impossible under every covert word");
    return lp;
}

KlEstimate covertness_kl_exact(const Codebooks& cb, std::size_t j,
                               const BinaryChannel& willie, Exec exec) {
    if (j < 1 || j > cb.m2) throw std::out_of_range("covertness_kl_exact: j outside [1, M2]");
    const std::size_t k = willie.alphabet_size();
    double budget = 1.0;
    for (std::size_t i = 0; i < cb.n; ++i) {
        budget *= static_cast<double>(k);
        if (budget > static_cast<double>(kExactEnumerationBudget))
            throw std::domain_error("covertness_kl_exact: |Z|^n exceeds enumeration budget");
    }
    const std::uint64_t total = static_cast<std::uint64_t>(budget);

    const LogRows t = log_rows(willie);
    const BitSeq& x0 = cb.innocent_word(j);

    // the budget keeps n <= 24, so a per-call stack buffer suffices (the
    // term callback runs concurrently and must not share state)
    const double value = sum_chunked(static_cast<std::int64_t>(total), exec,
                                     [&](std::int64_t idx) {
        std::uint8_t zbuf[32];
        std::uint64_t rest = static_cast<std::uint64_t>(idx);
        for (std::size_t l = cb.n; l-- > 0;) {
            zbuf[l] = static_cast<std::uint8_t>(rest % k);
            rest /= k;
        }
        const std::span<const std::uint8_t> z(zbuf, cb.n);
        std::vector<double> scores(cb.m1);
        for (std::size_t i = 1; i <= cb.m1; ++i)
            scores[i - 1] = score_word(t, cb.covert_word(j, i), z);
        const double log_qhat = logsumexp_minus_logm(scores, cb.m1);
        if (std::isinf(log_qhat)) return 0.0;  // zero-probability point adds nothing
        const double log_qbar = score_word(t, x0, z);
        return std::exp(log_qhat) * (log_qhat - log_qbar);
    });

    KlEstimate e;
    e.value = value;
    e.exact = true;
    e.samples = total;
    return e;
}

KlEstimate covertness_kl_mc(const Codebooks& cb, std::size_t j, const BinaryChannel& willie,
                            std::size_t samples, std::uint64_t seed, Exec exec) {
    if (j < 1 || j > cb.m2) throw std::out_of_range("covertness_kl_mc: j outside [1, M2]");
    if (samples < 2) throw std::invalid_argument("covertness_kl_mc: need at least 2 samples");
    const LogRows t = log_rows(willie);
    const BitSeq& x0 = cb.innocent_word(j);

    std::vector<double> g(samples);
    parallel_for(static_cast<std::int64_t>(samples), exec, [&](std::int64_t s) {
        Rng rng(derive_stream(seed, stream_tag::kl_sample, static_cast<std::uint64_t>(s), j));
        const std::size_t i = 1 + rng.next_below(static_cast<std::uint32_t>(cb.m1));
        const auto z = sample_output(willie, cb.covert_word(j, i), rng);
        std::vector<double> scores(cb.m1);
        for (std::size_t ii = 1; ii <= cb.m1; ++ii)
            scores[ii - 1] = score_word(t, cb.covert_word(j, ii), z);
        g[static_cast<std::size_t>(s)] =
            logsumexp_minus_logm(scores, cb.m1) - score_word(t, x0, z);
    });

    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (double v : g) var += (v - mean) * (v - mean);
    var /= static_cast<double>(samples - 1);

    KlEstimate e;
    e.value = mean;
    e.std_error = std::sqrt(var / static_cast<double>(samples));
    e.exact = false;
    e.samples = samples;
    return e;
}

KlEstimate covertness_kl(const Codebooks& cb, std::size_t j, const BinaryChannel& willie,
                         std::optional<std::pair<std::size_t, std::uint64_t>> mc, Exec exec) {
    if (mc) return covertness_kl_mc(cb, j, willie, mc->first, mc->second, exec);
    return covertness_kl_exact(cb, j, willie, exec);
}

DetectionReport lrt_detect(const Codebooks& cb, std::size_t j, const BinaryChannel& willie,
                           double threshold, std::size_t trials, std::uint64_t seed,
                           std::optional<KlEstimate> kl, Exec exec) {
    if (j < 1 || j > cb.m2) throw std::out_of_range("lrt_detect: j outside [1, M2]");
    if (trials < 1) throw std::invalid_argument("lrt_detect: trials must be >= 1");
    const LogRows t = log_rows(willie);
    const BitSeq& x0 = cb.innocent_word(j);

    const auto statistic = [&](std::span<const std::uint8_t> z) {
        std::vector<double> scores(cb.m1);
        for (std::size_t i = 1; i <= cb.m1; ++i)
            scores[i - 1] = score_word(t, cb.covert_word(j, i), z);
        return logsumexp_minus_logm(scores, cb.m1) - score_word(t, x0, z);
    };

    std::vector<std::uint8_t> reject_h0(trials), accept_h1(trials);
    parallel_for(static_cast<std::int64_t>(trials), exec, [&](std::int64_t s) {
        Rng rng0(derive_stream(seed, stream_tag::lrt_h0, static_cast<std::uint64_t>(s), j));
        const auto z0 = sample_output(willie, x0, rng0);
        reject_h0[static_cast<std::size_t>(s)] = statistic(z0) > threshold ? 1 : 0;

        Rng rng1(derive_stream(seed, stream_tag::lrt_h1, static_cast<std::uint64_t>(s), j));
        const std::size_t i = 1 + rng1.next_below(static_cast<std::uint32_t>(cb.m1));
        const auto z1 = sample_output(willie, cb.covert_word(j, i), rng1);
        accept_h1[static_cast<std::size_t>(s)] = statistic(z1) > threshold ? 0 : 1;
    });

    std::size_t r0 = 0, a1 = 0;
    for (std::size_t s = 0; s < trials; ++s) {
        r0 += reject_h0[s];
        a1 += accept_h1[s];
    }

    DetectionReport rep;
    rep.n = cb.n;
    rep.j = j;
    rep.m1 = cb.m1;
    rep.threshold = threshold;
    rep.trials = trials;
    rep.alpha_hat = static_cast<double>(r0) / static_cast<double>(trials);
    rep.beta_hat = static_cast<double>(a1) / static_cast<double>(trials);
    rep.alpha_plus_beta = rep.alpha_hat + rep.beta_hat;
    if (kl) {
        rep.kl_estimate = kl->value;
        rep.kl_stderr = kl->std_error;
        rep.kl_mode = kl->exact ? "exact" : "mc";
        rep.pinsker_floor =
            std::clamp(1.0 - std::sqrt(std::max(kl->value, 0.0)), 0.0, 1.0);
    }
    return rep;
}

}  // namespace covertcast
