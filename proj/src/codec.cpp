#include "covertcast/codec.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "covertcast/infotheory.hpp"
#include "covertcast/parallel.hpp"

namespace covertcast {

namespace {

// Cumulative weights of the binomial pmf restricted to the open band
// (n(l-e), n(l+e)); weights[i] corresponds to support[i].
struct WeightTable {
    std::vector<std::size_t> support;
    std::vector<double> cum;
    double total = 0.0;
};

WeightTable truncated_binomial_table(std::size_t n, double lambda, double eps) {
    const double nd = static_cast<double>(n);
    WeightTable t;
    std::vector<double> logp;
    for (std::size_t w = 0; w <= n; ++w) {
        const double wd = static_cast<double>(w);
        if (!(wd > nd * (lambda - eps) && wd < nd * (lambda + eps))) continue;
        t.support.push_back(w);
        logp.push_back(std::lgamma(nd + 1.0) - std::lgamma(wd + 1.0) -
                       std::lgamma(nd - wd + 1.0) + wd * std::log(lambda) +
                       (nd - wd) * std::log(1.0 - lambda));
    }
    if (t.support.empty())
        throw std::domain_error(
            "generate_codebooks: typical weight band is empty; increase epsilon or n");
    const double m = *std::max_element(logp.begin(), logp.end());
    t.cum.resize(logp.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < logp.size(); ++i) {
        acc += std::exp(logp[i] - m);
        t.cum[i] = acc;
    }
    t.total = acc;
    return t;
}

std::size_t sample_weight(const WeightTable& t, Rng& rng) {
    const double u = rng.next_unit() * t.total;
    for (std::size_t i = 0; i < t.cum.size(); ++i)
        if (u < t.cum[i]) return t.support[i];
    return t.support.back();
}

// Place w ones uniformly at random via a partial Fisher-Yates shuffle.
BitSeq place_ones(std::size_t n, std::size_t w, Rng& rng) {
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    BitSeq out(n);
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t pick =
            k + rng.next_below(static_cast<std::uint32_t>(n - k));
        std::swap(idx[k], idx[pick]);
        out.set_bit(idx[k], true);
    }
    return out;
}

}  // namespace

Codebooks generate_codebooks(std::size_t m1, std::size_t m2, std::size_t n,
                             double lambda_star, double epsilon_typ,
                             const CovertParams& params, std::uint64_t seed) {
    if (m1 < 1 || m2 < 1 || n < 1)
        throw std::invalid_argument("generate_codebooks: m1, m2, n must be positive");
    if (!(lambda_star > 0.0 && lambda_star < 1.0))
        throw std::invalid_argument("generate_codebooks: lambda_star outside (0,1)");
    if (!(epsilon_typ > 0.0))
        throw std::invalid_argument("generate_codebooks: epsilon_typ must be positive");
    params.validate();

    const WeightTable table = truncated_binomial_table(n, lambda_star, epsilon_typ);

    Codebooks cb;
    cb.n = n;
    cb.m1 = m1;
    cb.m2 = m2;
    cb.params = params;
    cb.seed = seed;
    cb.innocent.resize(m2);
    cb.covert.resize(m2 * m1);

    for (std::size_t j = 0; j < m2; ++j) {
        Rng rng(derive_stream(seed, stream_tag::innocent, j));
        const std::size_t w = sample_weight(table, rng);
        cb.innocent[j] = place_ones(n, w, rng);
    }
    parallel_for(static_cast<std::int64_t>(m2 * m1), Exec::parallel, [&](std::int64_t k) {
        const std::size_t j = static_cast<std::size_t>(k) / m1;
        const std::size_t i = static_cast<std::size_t>(k) % m1;
        Rng rng(derive_stream(seed, stream_tag::covert, j, i));
        cb.covert[k] = perturb(cb.innocent[j], params, rng);
    });
    return cb;
}

const BitSeq& encode(const Codebooks& cb, std::size_t w1, std::size_t w2) {
    if (w2 < 1 || w2 > cb.m2) throw std::out_of_range("encode: w2 outside [1, M2]");
    if (w1 > cb.m1) throw std::out_of_range("encode: w1 outside [0, M1]");
    return w1 == 0 ? cb.innocent_word(w2) : cb.covert_word(w2, w1);
}

std::size_t decode_common(const Codebooks& cb, std::span<const std::uint8_t> y,
                          const BinaryChannel& effective_rows) {
    if (y.size() != cb.n) throw std::invalid_argument("decode_common: length mismatch");
    const LogRows t = log_rows(effective_rows);
    std::size_t best = 1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= cb.m2; ++j) {
        const BitSeq& x = cb.innocent_word(j);
        double s = 0.0;
        for (std::size_t i = 0; i < cb.n; ++i) s += t.at(x.bit(i), y[i]);
        if (s > best_score) {
            best_score = s;
            best = j;
        }
    }
    return best;
}

double threshold_gamma_j(const BitSeq& x0j, const CovertParams& params,
                         const BinaryChannel& bob_rows, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("threshold_gamma_j: delta outside (0,1)");
    params.validate();
    const double i0 =
        params.alpha * kl(bob_rows.row1, bob_rows.row0) -
        kl(mix(bob_rows.row0, bob_rows.row1, params.alpha), bob_rows.row0);
    const double i1 =
        params.beta * kl(bob_rows.row0, bob_rows.row1) -
        kl(mix(bob_rows.row1, bob_rows.row0, params.beta), bob_rows.row1);
    const double n1 = static_cast<double>(x0j.weight());
    const double n0 = static_cast<double>(x0j.size()) - n1;
    return (1.0 - delta) * (n0 * i0 + n1 * i1);
}

DecodeResult decode_covert_at_threshold(const Codebooks& cb, std::size_t j,
                                        std::span<const std::uint8_t> y,
                                        const BinaryChannel& bob_rows, double gamma_j) {
    if (j < 1 || j > cb.m2) throw std::out_of_range("decode_covert: j outside [1, M2]");
    if (y.size() != cb.n) throw std::invalid_argument("decode_covert: length mismatch");
    const LogRows raw = log_rows(bob_rows);
    const LogRows eff = log_rows(effective_channel(bob_rows, cb.params));

    const BitSeq& x0 = cb.innocent_word(j);
    double log_pbar = 0.0;
    for (std::size_t i = 0; i < cb.n; ++i) log_pbar += eff.at(x0.bit(i), y[i]);
    if (std::isinf(log_pbar))
        throw std::domain_error("decode_covert: observation impossible under the model");

    DecodeResult r;
    r.w2_hat = j;
    std::size_t hits = 0;
    for (std::size_t i = 1; i <= cb.m1; ++i) {
        const BitSeq& x = cb.covert_word(j, i);
        double s = 0.0;
        for (std::size_t l = 0; l < cb.n; ++l) s += raw.at(x.bit(l), y[l]);
        if (s - log_pbar >= gamma_j) {
            ++hits;
            if (hits == 1) r.w1_hat = i;
        }
    }
    if (hits > 1) {
        r.w1_hat = 0;
        r.ambiguous = true;
    }
    return r;
}

DecodeResult decode_covert(const Codebooks& cb, std::size_t j,
                           std::span<const std::uint8_t> y,
                           const BinaryChannel& bob_rows, double delta) {
    const double gamma_j = threshold_gamma_j(cb.innocent_word(j), cb.params, bob_rows, delta);
    return decode_covert_at_threshold(cb, j, y, bob_rows, gamma_j);
}

namespace {

constexpr char kMagic[8] = {'C', 'C', 'B', 'K', '0', '0', '0', '1'};

template <class T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <class T>
T get(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void save_codebooks(const Codebooks& cb, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_codebooks: cannot open " + path);
    out.write(kMagic, sizeof(kMagic));
    put<std::uint64_t>(out, cb.m1);
    put<std::uint64_t>(out, cb.m2);
    put<std::uint64_t>(out, cb.n);
    put<std::uint64_t>(out, cb.seed);
    put<double>(out, cb.params.alpha);
    put<double>(out, cb.params.beta);
    const auto dump = [&](const BitSeq& s) {
        for (std::uint64_t w : s.words()) put<std::uint64_t>(out, w);
    };
    for (const auto& s : cb.innocent) dump(s);
    for (const auto& s : cb.covert) dump(s);
    if (!out) throw std::runtime_error("save_codebooks: write failed");
}

Codebooks load_codebooks(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_codebooks: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("load_codebooks: bad header");
    Codebooks cb;
    cb.m1 = get<std::uint64_t>(in);
    cb.m2 = get<std::uint64_t>(in);
    cb.n = get<std::uint64_t>(in);
    cb.seed = get<std::uint64_t>(in);
    const double alpha = get<double>(in);
    const double beta = get<double>(in);
    cb.params = CovertParams::make(alpha, beta);
    const auto read_seq = [&]() {
        BitSeq s(cb.n);
        const std::size_t nw = (cb.n + 63) / 64;
        std::vector<std::uint64_t> words(nw);
        in.read(reinterpret_cast<char*>(words.data()),
                static_cast<std::streamsize>(nw * sizeof(std::uint64_t)));
        for (std::size_t i = 0; i < cb.n; ++i)
            s.set_bit(i, (words[i >> 6] >> (i & 63)) & 1ULL);
        return s;
    };
    cb.innocent.resize(cb.m2);
    for (auto& s : cb.innocent) s = read_seq();
    cb.covert.resize(cb.m2 * cb.m1);
    for (auto& s : cb.covert) s = read_seq();
    if (!in) throw std::runtime_error("load_codebooks: truncated file");
    return cb;
}

}  // namespace covertcast
