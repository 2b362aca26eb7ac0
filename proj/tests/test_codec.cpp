#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "covertcast/codec.hpp"
#include "covertcast/infotheory.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace covertcast;

namespace {

const CovertParams kParams = CovertParams::make(0.25, 0.25);

double log_choose(double n, double w) {
    return std::lgamma(n + 1) - std::lgamma(w + 1) - std::lgamma(n - w + 1);
}

// truncated-binomial pmf over the open weight band, for GOF expectations
std::map<std::size_t, double> truncated_pmf(std::size_t n, double lam, double eps) {
    std::map<std::size_t, double> pmf;
    double total = 0.0;
    for (std::size_t w = 0; w <= n; ++w) {
        const double wd = static_cast<double>(w), nd = static_cast<double>(n);
        if (!(wd > nd * (lam - eps) && wd < nd * (lam + eps))) continue;
        const double p = std::exp(log_choose(nd, wd) + wd * std::log(lam) +
                                  (nd - wd) * std::log(1 - lam));
        pmf[w] = p;
        total += p;
    }
    for (auto& [w, p] : pmf) p /= total;
    return pmf;
}

}  // namespace

TEST_CASE("generate_codebooks: weights stay strictly inside the band") {
    const auto cb = generate_codebooks(1, 1000, 100, 0.5, 0.1, kParams, 7);
    for (const auto& word : cb.innocent) {
        CHECK(word.weight() > 40);
        CHECK(word.weight() < 60);
    }
}

TEST_CASE("generate_codebooks: empty weight band throws") {
    CHECK_THROWS_AS(generate_codebooks(1, 1, 10, 0.47, 0.005, kParams, 1),
                    std::domain_error);
}

TEST_CASE("generate_codebooks: weight histogram matches the truncated binomial") {
    const std::size_t n = 60, m2 = 100000;
    const double lam = 0.5, eps = 0.1;
    const auto cb = generate_codebooks(1, m2, n, lam, eps, kParams, 11);
    const auto pmf = truncated_pmf(n, lam, eps);
    std::map<std::size_t, double> counts;
    for (const auto& word : cb.innocent) counts[word.weight()] += 1.0;
    std::vector<double> obs, exp_;
    for (const auto& [w, p] : pmf) {
        obs.push_back(counts.count(w) ? counts[w] : 0.0);
        exp_.push_back(p * static_cast<double>(m2));
    }
    CHECK(testsupport::chi2_pvalue(obs, exp_) > 0.001);
}

TEST_CASE("composition sampling matches rejection sampling (two-sample chi-square)") {
    const std::size_t n = 30, draws = 100000;
    const double lam = 0.5, eps = 0.1;
    const auto cb = generate_codebooks(1, draws, n, lam, eps, kParams, 13);
    std::vector<double> hist_a(n + 1, 0.0);
    for (const auto& word : cb.innocent) hist_a[word.weight()] += 1.0;

    // rejection-sampler oracle: draw i.i.d. Bernoulli(lam) words, keep those
    // whose weight lands strictly inside the band
    std::vector<double> hist_b(n + 1, 0.0);
    Rng rng(14);
    std::size_t kept = 0;
    while (kept < draws) {
        std::size_t w = 0;
        for (std::size_t i = 0; i < n; ++i) w += rng.next_unit() < lam ? 1 : 0;
        const double wd = static_cast<double>(w), nd = static_cast<double>(n);
        if (wd > nd * (lam - eps) && wd < nd * (lam + eps)) {
            hist_b[w] += 1.0;
            ++kept;
        }
    }
    CHECK(testsupport::chi2_two_sample_pvalue(hist_a, hist_b) > 0.001);
}

TEST_CASE("generate_codebooks: covert flip rates pass a GOF against (alpha, beta)") {
    const std::size_t n = 500, m1 = 2000;
    const auto params = CovertParams::make(0.04, 0.09);
    const auto cb = generate_codebooks(m1, 1, n, 0.5, 0.2, params, 17);
    const BitSeq& x0 = cb.innocent_word(1);
    double f01 = 0, k0 = 0, f10 = 0, k1 = 0;
    for (std::size_t i = 1; i <= m1; ++i) {
        const BitSeq& x = cb.covert_word(1, i);
        for (std::size_t l = 0; l < n; ++l) {
            if (!x0.bit(l))
                (x.bit(l) ? f01 : k0) += 1;
            else
                (!x.bit(l) ? f10 : k1) += 1;
        }
    }
    const double n0 = f01 + k0, n1 = f10 + k1;
    CHECK(testsupport::chi2_pvalue({f01, k0}, {n0 * params.alpha, n0 * (1 - params.alpha)}) >
          0.001);
    CHECK(testsupport::chi2_pvalue({f10, k1}, {n1 * params.beta, n1 * (1 - params.beta)}) >
          0.001);
}

TEST_CASE("generate_codebooks: fixed seed is byte-identical, new seed differs") {
    const auto a = generate_codebooks(4, 4, 200, 0.5, 0.1, kParams, 99);
    const auto b = generate_codebooks(4, 4, 200, 0.5, 0.1, kParams, 99);
    const auto c = generate_codebooks(4, 4, 200, 0.5, 0.1, kParams, 100);
    CHECK(a.innocent == b.innocent);
    CHECK(a.covert == b.covert);
    CHECK(a.innocent != c.innocent);
}

TEST_CASE("encode: lookup semantics, bounds, injectivity at desk scale") {
    const auto cb = generate_codebooks(8, 4, 64, 0.5, 0.1, kParams, 5);
    CHECK(encode(cb, 0, 2) == cb.innocent_word(2));
    CHECK(encode(cb, 3, 2) == cb.covert_word(2, 3));
    CHECK_THROWS_AS(encode(cb, 9, 1), std::out_of_range);
    CHECK_THROWS_AS(encode(cb, 0, 5), std::out_of_range);
    CHECK_THROWS_AS(encode(cb, 0, 0), std::out_of_range);

    std::set<std::vector<std::uint64_t>> seen;
    std::size_t stored = 0;
    for (std::size_t j = 1; j <= cb.m2; ++j) {
        const auto& w = cb.innocent_word(j);
        seen.insert({w.words().begin(), w.words().end()});
        ++stored;
        for (std::size_t i = 1; i <= cb.m1; ++i) {
            const auto& cw = cb.covert_word(j, i);
            seen.insert({cw.words().begin(), cw.words().end()});
            ++stored;
        }
    }
    CHECK(seen.size() == stored);  // no collisions at this scale
}

TEST_CASE("decode_common is the identity on a noiseless channel") {
    Codebooks cb;
    cb.n = 6;
    cb.m1 = 1;
    cb.m2 = 3;
    cb.params = kParams;
    cb.innocent = {BitSeq::from_bits({0, 0, 1, 1, 0, 1}),
                   BitSeq::from_bits({1, 0, 0, 1, 1, 0}),
                   BitSeq::from_bits({0, 1, 0, 0, 1, 1})};
    cb.covert = cb.innocent;
    const BinaryChannel identity(Distribution({1.0, 0.0}), Distribution({0.0, 1.0}));
    for (std::size_t j = 1; j <= 3; ++j) {
        std::vector<std::uint8_t> y(cb.n);
        for (std::size_t l = 0; l < cb.n; ++l) y[l] = cb.innocent_word(j).bit(l);
        CHECK(decode_common(cb, y, identity) == j);
    }
}

TEST_CASE("decode_common: exact ML error probability matches enumeration, n = 8") {
    const auto ch = make_bsc_broadcast(0.1, 0.15);
    const auto cb = generate_codebooks(2, 2, 8, 0.5, 0.3, kParams, 21);
    const auto willie_err = oracles::enumerated_willie_errors(cb, ch);
    // Monte Carlo at 200k trials per (j, hypothesis)
    const BinaryChannel eff = effective_channel(ch.willie(), cb.params);
    for (std::size_t j = 1; j <= 2; ++j) {
        for (int h = 0; h < 2; ++h) {
            const std::size_t trials = 200000;
            std::size_t errors = 0;
            for (std::size_t t = 0; t < trials; ++t) {
                Rng rng(derive_stream(300 + j, h, t));
                const std::size_t i = h == 0 ? 0 : 1 + rng.next_below(2);
                const auto z = sample_output(ch.willie(), encode(cb, i, j), rng);
                errors += decode_common(cb, z, eff) != j ? 1 : 0;
            }
            const double p = willie_err[h][j - 1];
            const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
            CHECK(std::fabs(static_cast<double>(errors) / trials - p) <= 3 * sigma + 1e-9);
        }
    }
}

TEST_CASE("decode_common: ML error falls with n at a fixed rate below capacity") {
    // rate 0.2 nats/use against a BSC(0.11) with capacity ~0.347 nats/use
    const auto ch = make_bsc_broadcast(0.11, 0.11);
    const auto params = CovertParams::make(1e-9, 1e-9);  // effective ~ raw rows
    const BinaryChannel eff = effective_channel(ch.willie(), params);
    std::vector<double> err_rate;
    for (const std::size_t n : {8u, 16u, 24u}) {
        const auto m2 = static_cast<std::size_t>(
            std::floor(std::exp(0.2 * static_cast<double>(n))));
        const std::size_t books = 8, trials = 500;
        std::size_t errors = 0, total = 0;
        for (std::size_t b = 0; b < books; ++b) {
            const auto cb = generate_codebooks(1, m2, n, 0.5, 0.45, params,
                                               derive_stream(600, n, b));
            for (std::size_t t = 0; t < trials; ++t) {
                Rng rng(derive_stream(601, n, b * trials + t));
                const std::size_t j = 1 + rng.next_below(static_cast<std::uint32_t>(m2));
                const auto z = sample_output(ch.willie(), cb.innocent_word(j), rng);
                errors += decode_common(cb, z, eff) != j ? 1 : 0;
                ++total;
            }
        }
        err_rate.push_back(static_cast<double>(errors) / static_cast<double>(total));
    }
    CHECK(err_rate[1] < err_rate[0]);
    CHECK(err_rate[2] < err_rate[1]);
}

TEST_CASE("threshold_gamma_j: vanishing rates, identity, aggregate form") {
    const auto ch = make_bsc_broadcast(0.05, 0.11);
    BitSeq x0(100);
    for (std::size_t i = 0; i < 40; ++i) x0.set_bit(i, true);

    const double tiny = threshold_gamma_j(x0, CovertParams::make(1e-12, 1e-12),
                                          ch.bob(), 0.1);
    CHECK(tiny == doctest::Approx(0.0).epsilon(1e-8));

    // the threshold is (1-delta) times the summed per-position informations
    Rng rng(23);
    for (int it = 0; it < 200; ++it) {
        const std::size_t k = 2 + rng.next_below(3);
        const BinaryChannel rows(testsupport::random_distribution(rng, k),
                                 testsupport::random_distribution(rng, k));
        const double a = 0.01 + 0.4 * rng.next_unit();
        const double b = 0.01 + 0.4 * rng.next_unit();
        const auto params = CovertParams::make(a, b);
        const double delta = 0.1;
        const double got = threshold_gamma_j(x0, params, rows, delta);
        const double i0 = mutual_information(a, rows);
        const double i1 = mutual_information(b, BinaryChannel(rows.row1, rows.row0));
        const double want = (1 - delta) * (60.0 * i0 + 40.0 * i1);
        CHECK(std::fabs(got - want) <= 1e-10 * std::max(1.0, std::fabs(want)));
    }

    // aggregate linear form plus the exact second-order corrections
    const auto params = CovertParams::make(0.02, 0.05);
    const double delta = 0.25;
    const double got = threshold_gamma_j(x0, params, ch.bob(), delta);
    const double dp10 = kl(ch.bob().row1, ch.bob().row0);
    const double dp01 = kl(ch.bob().row0, ch.bob().row1);
    const double corr0 = kl(mix(ch.bob().row0, ch.bob().row1, params.alpha), ch.bob().row0);
    const double corr1 = kl(mix(ch.bob().row1, ch.bob().row0, params.beta), ch.bob().row1);
    const double linear = 100.0 * (0.6 * params.alpha * dp10 + 0.4 * params.beta * dp01);
    const double want = (1 - delta) * (linear - (60.0 * corr0 + 40.0 * corr1));
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("decode_covert: -inf threshold makes every sub-codeword a hit") {
    const auto ch = make_bsc_broadcast(0.1, 0.15);
    const auto cb = generate_codebooks(3, 1, 8, 0.5, 0.3, kParams, 31);
    Rng rng(32);
    const auto y = sample_output(ch.bob(), cb.innocent_word(1), rng);
    const auto r = decode_covert_at_threshold(cb, 1, y, ch.bob(),
                                              -std::numeric_limits<double>::infinity());
    CHECK(r.ambiguous);
    CHECK(r.w1_hat == 0);
}

TEST_CASE("decode_covert: exact error probabilities match enumeration, n = 8") {
    const auto ch = make_bsc_broadcast(0.1, 0.15);
    const auto cb = generate_codebooks(2, 2, 8, 0.5, 0.3, kParams, 41);
    const double delta = 0.1;
    const auto table = oracles::enumerated_bob_errors(cb, ch, delta);

    for (std::size_t j = 1; j <= 2; ++j) {
        for (int h = 0; h < 2; ++h) {
            const std::size_t trials = 100000;
            std::size_t common_err = 0, covert_joint = 0;
            for (std::size_t t = 0; t < trials; ++t) {
                Rng rng(derive_stream(500 + j, h, t));
                const std::size_t i = h == 0 ? 0 : 1 + rng.next_below(2);
                const auto y = sample_output(ch.bob(), encode(cb, i, j), rng);
                const std::size_t w2 =
                    decode_common(cb, y, effective_channel(ch.bob(), cb.params));
                if (w2 != j) {
                    ++common_err;
                    continue;
                }
                const auto dr = decode_covert(cb, j, y, ch.bob(), delta);
                if (dr.ambiguous || dr.w1_hat != i) ++covert_joint;
            }
            const double pc = table.common_err[h][j - 1];
            const double sc = std::sqrt(pc * (1 - pc) / static_cast<double>(trials));
            CHECK(std::fabs(static_cast<double>(common_err) / trials - pc) <= 3 * sc + 1e-9);
            const double pj = table.covert_err_joint[h][j - 1];
            const double sj = std::sqrt(pj * (1 - pj) / static_cast<double>(trials));
            CHECK(std::fabs(static_cast<double>(covert_joint) / trials - pj) <=
                  3 * sj + 1e-9);
        }
    }
}

TEST_CASE("codebook serialization round trip") {
    const auto cb = generate_codebooks(5, 3, 130, 0.5, 0.1, kParams, 77);
    const std::string path = "/tmp/covertcast_cb_test.bin";
    save_codebooks(cb, path);
    const auto back = load_codebooks(path);
    CHECK(back.n == cb.n);
    CHECK(back.m1 == cb.m1);
    CHECK(back.m2 == cb.m2);
    CHECK(back.seed == cb.seed);
    CHECK(back.params.alpha == cb.params.alpha);
    CHECK(back.params.beta == cb.params.beta);
    CHECK(back.innocent == cb.innocent);
    CHECK(back.covert == cb.covert);
    std::remove(path.c_str());
}
