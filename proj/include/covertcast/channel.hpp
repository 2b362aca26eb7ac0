#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "json.hpp"

#include "covertcast/rng.hpp"

namespace covertcast {

inline constexpr double kProbTolerance = 1e-12;

/// Probability vector over a finite alphabet {0..K-1}, K >= 2.
/// Entries must be nonnegative and sum to 1 within kProbTolerance.
class Distribution {
public:
    explicit Distribution(std::vector<double> probs);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t k) const { return probs_[k]; }
    const std::vector<double>& probs() const { return probs_; }

    bool operator==(const Distribution&) const = default;

private:
    std::vector<double> probs_;
};

/// Convex combination (1-w)*d0 + w*d1, w in [0,1].
Distribution mix(const Distribution& d0, const Distribution& d1, double w);

/// Packed bit sequence; codewords are stored this way.
class BitSeq {
public:
    BitSeq() = default;
    explicit BitSeq(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    static BitSeq from_bits(std::initializer_list<int> bits);
    static BitSeq from_bits(const std::vector<int>& bits);

    std::size_t size() const { return n_; }
    bool bit(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
    void set_bit(std::size_t i, bool v) {
        const std::uint64_t m = 1ULL << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }
    std::size_t weight() const;

    std::span<const std::uint64_t> words() const { return words_; }
    bool operator==(const BitSeq&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Binary-input DMC given by its two output rows (input 0 and input 1).
/// Only alphabet agreement is enforced here; absolute-continuity constraints
/// belong to BroadcastChannel.
struct BinaryChannel {
    Distribution row0;
    Distribution row1;

    BinaryChannel(Distribution r0, Distribution r1);
    std::size_t alphabet_size() const { return row0.size(); }
    const Distribution& row(bool x) const { return x ? row1 : row0; }
};

/// Log-probability tables for a BinaryChannel; entries are -inf where the
/// probability is zero. Decoders score with these so that impossible
/// codewords lose the argmax instead of faulting.
struct LogRows {
    std::vector<double> log0;
    std::vector<double> log1;
    double at(bool x, std::uint8_t y) const { return x ? log1[y] : log0[y]; }
};

LogRows log_rows(const BinaryChannel& ch);

/// Marginals of a broadcast channel: Bob rows (p0, p1) over Y and
/// Willie rows (q0, q1) over Z.
///
/// Invariants enforced at construction:
///  - p0/p1 share an alphabet, q0/q1 share an alphabet
///  - zero sets match within each pair (mutual absolute continuity)
///  - q0 != q1 (some entry differs by more than kProbTolerance)
class BroadcastChannel {
public:
    BroadcastChannel(Distribution p0, Distribution p1, Distribution q0, Distribution q1);

    const BinaryChannel& bob() const { return bob_; }
    const BinaryChannel& willie() const { return willie_; }

private:
    BinaryChannel bob_;
    BinaryChannel willie_;
};

/// Broadcast pair of binary symmetric channels with crossover pB (to Bob)
/// and pW (to Willie). Both must lie strictly inside (0, 0.5).
BroadcastChannel make_bsc_broadcast(double pB, double pW);

/// Memoryless per-symbol sampling: output[i] ~ row(x[i]).
std::vector<std::uint8_t> sample_output(const BinaryChannel& ch, const BitSeq& x, Rng& rng);

/// Sum of per-symbol log row probabilities, in nats. Throws if some symbol
/// has zero probability (observation impossible under the model).
double loglik(const BinaryChannel& ch, const BitSeq& x, std::span<const std::uint8_t> y);

/// Channel spec from JSON: either {"bsc": {"pB": .., "pW": ..}} or
/// {"y_rows": [[..],[..]], "z_rows": [[..],[..]]}.
BroadcastChannel channel_from_json(const nlohmann::json& spec);
BroadcastChannel load_channel(const std::string& path);

}  // namespace covertcast
