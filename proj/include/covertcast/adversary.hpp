#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "covertcast/codec.hpp"
#include "covertcast/parallel.hpp"

namespace covertcast {

/// Enumeration budget for exact covertness computations: |Z|^n points.
inline constexpr std::uint64_t kExactEnumerationBudget = 1ULL << 24;

struct KlEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 for exact mode
    bool exact = false;
    std::size_t samples = 0;
};

/// log of the uniform mixture over sub-codebook j evaluated at z:
///   log (1/M1) sum_i W^n(z | x_ij), via log-sum-exp.
/// Throws when the observation is impossible under every covert word.
double induced_logprob(const Codebooks& cb, std::size_t j,
                       std::span<const std::uint8_t> z, const BinaryChannel& willie);

/// Exact D(Qhat_j^n || Qbar_j^n) by enumerating Z^n, where Qhat is the
/// covert mixture and Qbar the innocent product distribution. Throws when
/// |Z|^n exceeds kExactEnumerationBudget.
KlEstimate covertness_kl_exact(const Codebooks& cb, std::size_t j,
                               const BinaryChannel& willie, Exec exec = Exec::parallel);

/// Monte Carlo estimate of the same divergence: sample z ~ Qhat (uniform
/// covert index, then the channel) and average log Qhat(z) - log Qbar(z).
KlEstimate covertness_kl_mc(const Codebooks& cb, std::size_t j, const BinaryChannel& willie,
                            std::size_t samples, std::uint64_t seed,
                            Exec exec = Exec::parallel);

/// Dispatch on mode: exact when mc is absent.
KlEstimate covertness_kl(const Codebooks& cb, std::size_t j, const BinaryChannel& willie,
                         std::optional<std::pair<std::size_t, std::uint64_t>> mc,
                         Exec exec = Exec::parallel);

struct DetectionReport {
    std::size_t n = 0;
    std::size_t j = 0;
    std::size_t m1 = 0;
    double kl_estimate = 0.0;
    double kl_stderr = 0.0;
    std::string kl_mode;  // "exact", "mc", or "" when not computed
    double alpha_hat = 0.0;       // false alarm rate
    double beta_hat = 0.0;        // missed detection rate
    double alpha_plus_beta = 0.0;
    double pinsker_floor = 0.0;   // max(0, 1 - sqrt(kl_estimate))
    double threshold = 0.0;
    std::size_t trials = 0;
    bool worst_j = false;  // largest divergence among the common messages at this n
};

/// Simulate the likelihood-ratio test log Qhat(z) - log Qbar(z) > threshold
/// with `trials` transmissions under each hypothesis (H0: innocent word,
/// H1: uniformly drawn covert word). The warden knows the codebook, so this
/// is the optimal test up to Monte Carlo noise. When a KL estimate is
/// supplied its fields and the Pinsker floor are filled in.
DetectionReport lrt_detect(const Codebooks& cb, std::size_t j, const BinaryChannel& willie,
                           double threshold, std::size_t trials, std::uint64_t seed,
                           std::optional<KlEstimate> kl = std::nullopt,
                           Exec exec = Exec::parallel);

}  // namespace covertcast
