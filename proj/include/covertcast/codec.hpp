#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "covertcast/channel.hpp"
#include "covertcast/covert.hpp"

namespace covertcast {

/// Innocent codebook plus one covert sub-codebook per common message.
/// innocent[j-1] carries common message j; covert word (j, i) sits at
/// covert[(j-1)*m1 + (i-1)]. Immutable after generation.
struct Codebooks {
    std::size_t n = 0;
    std::size_t m1 = 0;
    std::size_t m2 = 0;
    CovertParams params{0.5, 0.5, 1.0};
    std::uint64_t seed = 0;
    std::vector<BitSeq> innocent;
    std::vector<BitSeq> covert;

    const BitSeq& innocent_word(std::size_t j) const { return innocent[j - 1]; }
    const BitSeq& covert_word(std::size_t j, std::size_t i) const {
        return covert[(j - 1) * m1 + (i - 1)];
    }
};

/// Draw the innocent codebook from the i.i.d. law with weight 1-probability
/// lambda_star, conditioned on the weight fraction lying strictly inside
/// (lambda_star - epsilon, lambda_star + epsilon). Sampling is by
/// composition: a truncated-binomial weight, then a uniform placement of the
/// ones, which is exactly the conditioned product law by exchangeability.
/// Covert words are independent perturbations of their innocent word.
/// Fixed seed reproduces the codebooks byte for byte.
Codebooks generate_codebooks(std::size_t m1, std::size_t m2, std::size_t n,
                             double lambda_star, double epsilon_typ,
                             const CovertParams& params, std::uint64_t seed);

/// Codeword for message pair (w1, w2); w1 = 0 selects the innocent word.
/// w2 in [1, M2], w1 in [0, M1].
const BitSeq& encode(const Codebooks& cb, std::size_t w1, std::size_t w2);

/// ML decoding of the common message against the given effective rows;
/// returns the 1-based index, ties broken toward the lowest index.
std::size_t decode_common(const Codebooks& cb, std::span<const std::uint8_t> y,
                          const BinaryChannel& effective_rows);

/// Covert-decoder threshold for the sub-codebook of x0j:
///   (1-delta) * [ n0 * I0 + n1 * I1 ]
/// where I0 = alpha D(P1||P0) - D((1-a)P0 + a P1 || P0) is the per-symbol
/// information at an innocent 0 and I1 the beta-analogue at an innocent 1.
double threshold_gamma_j(const BitSeq& x0j, const CovertParams& params,
                         const BinaryChannel& bob_rows, double delta);

struct DecodeResult {
    std::size_t w2_hat = 0;  // common message fed to the covert stage
    std::size_t w1_hat = 0;  // 0 means "no covert message"
    bool ambiguous = false;  // more than one sub-codeword above threshold
};

/// Threshold decoding of the covert message within sub-codebook j: score
/// each covert word by log W(y|x_ij) - log Pbar(y), where Pbar is the
/// product of the effective rows along x0j. A unique score >= gamma_j yields
/// that index, none yields 0, several set ambiguous.
DecodeResult decode_covert(const Codebooks& cb, std::size_t j,
                           std::span<const std::uint8_t> y,
                           const BinaryChannel& bob_rows, double delta);

/// Same with an explicit threshold (test hook; -inf admits every word).
DecodeResult decode_covert_at_threshold(const Codebooks& cb, std::size_t j,
                                        std::span<const std::uint8_t> y,
                                        const BinaryChannel& bob_rows, double gamma_j);

/// Binary serialization: fixed header (M1, M2, n, seed, params) followed by
/// the packed codeword payload.
void save_codebooks(const Codebooks& cb, const std::string& path);
Codebooks load_codebooks(const std::string& path);

}  // namespace covertcast
