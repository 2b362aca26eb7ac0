#include "covertcast/channel.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "covertcast/errors.hpp"

namespace covertcast {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2)
        throw std::invalid_argument("Distribution: alphabet size must be >= 2");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0))
            throw std::invalid_argument("Distribution: entries must be nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
        throw std::invalid_argument("Distribution: entries must sum to 1");
}

Distribution mix(const Distribution& d0, const Distribution& d1, double w) {
    if (d0.size() != d1.size())
        throw std::invalid_argument("mix: alphabet mismatch");
    if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("mix: weight outside [0,1]");
    std::vector<double> out(d0.size());
    for (std::size_t k = 0; k < d0.size(); ++k)
        out[k] = (1.0 - w) * d0[k] + w * d1[k];
    return Distribution(std::move(out));
}

BitSeq BitSeq::from_bits(std::initializer_list<int> bits) {
    return from_bits(std::vector<int>(bits));
}

BitSeq BitSeq::from_bits(const std::vector<int>& bits) {
    BitSeq s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) s.set_bit(i, bits[i] != 0);
    return s;
}

std::size_t BitSeq::weight() const {
    std::size_t w = 0;
    for (std::uint64_t word : words_) w += static_cast<std::size_t>(std::popcount(word));
    return w;
}

BinaryChannel::BinaryChannel(Distribution r0, Distribution r1)
    : row0(std::move(r0)), row1(std::move(r1)) {
    if (row0.size() != row1.size())
        throw std::invalid_argument("BinaryChannel: rows must share an alphabet");
}

LogRows log_rows(const BinaryChannel& ch) {
    LogRows t;
    const std::size_t k = ch.alphabet_size();
    t.log0.resize(k);
    t.log1.resize(k);
    for (std::size_t y = 0; y < k; ++y) {
        t.log0[y] = std::log(ch.row0[y]);  // log(0) == -inf
        t.log1[y] = std::log(ch.row1[y]);
    }
    return t;
}

namespace {

void check_mutual_continuity(const Distribution& a, const Distribution& b, const char* what) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if ((a[k] > 0.0) != (b[k] > 0.0))
            throw std::invalid_argument(std::string("BroadcastChannel: ") + what +
                                        " rows violate mutual absolute continuity");
    }
}

}  // namespace

BroadcastChannel::BroadcastChannel(Distribution p0, Distribution p1, Distribution q0,
                                   Distribution q1)
    : bob_(std::move(p0), std::move(p1)), willie_(std::move(q0), std::move(q1)) {
    check_mutual_continuity(bob_.row0, bob_.row1, "Bob");
    check_mutual_continuity(willie_.row0, willie_.row1, "Willie");
    bool differ = false;
    for (std::size_t k = 0; k < willie_.alphabet_size(); ++k)
        if (std::abs(willie_.row0[k] - willie_.row1[k]) > kProbTolerance) differ = true;
    if (!differ)
        throw std::invalid_argument("BroadcastChannel: Willie rows must differ (Q0 != Q1)");
}

BroadcastChannel make_bsc_broadcast(double pB, double pW) {
    if (!(pB > 0.0 && pB < 0.5))
        throw std::invalid_argument("make_bsc_broadcast: pB must lie in (0, 0.5)");
    if (!(pW > 0.0 && pW < 0.5))
        throw std::invalid_argument("make_bsc_broadcast: pW must lie in (0, 0.5)");
    return BroadcastChannel(Distribution({1.0 - pB, pB}), Distribution({pB, 1.0 - pB}),
                            Distribution({1.0 - pW, pW}), Distribution({pW, 1.0 - pW}));
}

std::vector<std::uint8_t> sample_output(const BinaryChannel& ch, const BitSeq& x, Rng& rng) {
    if (x.size() == 0) throw std::invalid_argument("sample_output: empty codeword");
    std::vector<std::uint8_t> out(x.size());
    const std::size_t k = ch.alphabet_size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Distribution& row = ch.row(x.bit(i));
        const double u = rng.next_unit();
        double acc = 0.0;
        std::uint8_t sym = static_cast<std::uint8_t>(k - 1);
        for (std::size_t y = 0; y + 1 < k; ++y) {
            acc += row[y];
            if (u < acc) {
                sym = static_cast<std::uint8_t>(y);
                break;
            }
        }
        out[i] = sym;
    }
    return out;
}

double loglik(const BinaryChannel& ch, const BitSeq& x, std::span<const std::uint8_t> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("loglik: codeword/observation length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double p = ch.row(x.bit(i))[y[i]];
        if (p <= 0.0)
            throw std::domain_error("loglik: impossible observation (zero-probability symbol)");
        s += std::log(p);
    }
    return s;
}

namespace {

Distribution dist_from_json(const nlohmann::json& row) {
    if (!row.is_array())
        throw ConfigError("channel: row must be an array of probabilities");
    return Distribution(row.get<std::vector<double>>());
}

}  // namespace

BroadcastChannel channel_from_json(const nlohmann::json& spec) {
    if (spec.contains("bsc")) {
        const auto& b = spec.at("bsc");
        if (!b.contains("pB") || !b.contains("pW"))
            throw ConfigError("channel: bsc spec needs pB and pW");
        try {
            return make_bsc_broadcast(b.at("pB").get<double>(), b.at("pW").get<double>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (spec.contains("y_rows") && spec.contains("z_rows")) {
        const auto& yr = spec.at("y_rows");
        const auto& zr = spec.at("z_rows");
        if (!yr.is_array() || yr.size() != 2 || !zr.is_array() || zr.size() != 2)
            throw ConfigError("channel: y_rows and z_rows must each hold two rows");
        try {
            return BroadcastChannel(dist_from_json(yr[0]), dist_from_json(yr[1]),
                                    dist_from_json(zr[0]), dist_from_json(zr[1]));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("channel: expected {\"bsc\": {...}} or {\"y_rows\": .., \"z_rows\": ..}");
}

BroadcastChannel load_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("channel: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("channel: bad JSON: ") + e.what());
    }
    return channel_from_json(j);
}

}  // namespace covertcast
