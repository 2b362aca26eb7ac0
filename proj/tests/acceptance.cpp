// Acceptance suite: end-to-end checks of the library's headline numerical
// claims, one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "covertcast/harness.hpp"
#include "covertcast/infotheory.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace covertcast;

namespace {

struct Criterion {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Generic divergences match the BSC closed forms on a 99-point grid.
void criterion_bsc_closed_forms(Criterion& c) {
    for (int i = 1; i <= 99; ++i) {
        const double p = static_cast<double>(i) / 200.0;
        const Distribution q0({1.0 - p, p}), q1({p, 1.0 - p});
        const double d_closed = (1.0 - 2.0 * p) * std::log((1.0 - p) / p);
        const double x_closed = (1.0 - 2.0 * p) * (1.0 - 2.0 * p) / (p * (1.0 - p));
        c.require(std::fabs(kl(q1, q0) - d_closed) <= 1e-12,
                  "kl(q1,q0) off closed form at p=" + fmt(p));
        c.require(std::fabs(kl(q0, q1) - d_closed) <= 1e-12,
                  "kl(q0,q1) off closed form at p=" + fmt(p));
        c.require(std::fabs(chi_k(q1, q0, 2) - x_closed) <= 1e-12,
                  "chi2(q1||q0) off closed form at p=" + fmt(p));
        c.require(std::fabs(chi_k(q0, q1, 2) - x_closed) <= 1e-12,
                  "chi2(q0||q1) off closed form at p=" + fmt(p));
    }
}

// ---------------------------------------------------------------------------
// 2. Symmetric channel pairs: gamma* = 1, lambda* = 1/2, and the achievable
//    coefficient collapses to sqrt(2) D(P1||P0) / sqrt(chi2(Q1||Q0)).
void criterion_symmetric_optimum(Criterion& c) {
    Rng rng(20260810);
    for (int it = 0; it < 50; ++it) {
        const auto [p0, p1] =
            testsupport::random_symmetric_rows(rng, 2 + 2 * rng.next_below(3));
        const auto [q0, q1] =
            testsupport::random_symmetric_rows(rng, 2 + 2 * rng.next_below(3));
        const BroadcastChannel ch(p0, p1, q0, q1);
        const auto a = analyze_channel(ch);
        const auto co = optimize_gamma(a);
        c.require(std::fabs(a.lambda_star - 0.5) <= 1e-9,
                  "lambda* != 1/2: " + fmt(a.lambda_star));
        c.require(std::fabs(co.gamma_star - 1.0) <= 1e-9,
                  "gamma* != 1: " + fmt(co.gamma_star));
        const double want = std::sqrt(2.0) * a.dp10 / std::sqrt(a.chi10);
        c.require(std::fabs(co.achievable_ub - want) <= 1e-9,
                  "achievable coefficient off the symmetric value");
    }
}

// ---------------------------------------------------------------------------
// 3. Keyless feasibility on a 50x50 BSC grid equals the sign of
//    (1-2pB)ln((1-pB)/pB) - (1-2pW)ln((1-pW)/pW), exactly.
void criterion_feasibility_grid(Criterion& c) {
    for (int i = 0; i < 50; ++i) {
        for (int k = 0; k < 50; ++k) {
            const double pb = 0.01 + 0.48 * static_cast<double>(i) / 49.0;
            const double pw = 0.01 + 0.48 * static_cast<double>(k) / 49.0;
            const auto a = analyze_channel(make_bsc_broadcast(pb, pw));
            const auto co = optimize_gamma(a);
            const double fb = (1.0 - 2.0 * pb) * std::log((1.0 - pb) / pb);
            const double fw = (1.0 - 2.0 * pw) * std::log((1.0 - pw) / pw);
            c.require(co.feasible == (fb > fw),
                      "feasibility flag disagrees at pB=" + fmt(pb) + ", pW=" + fmt(pw));
        }
    }
}

// ---------------------------------------------------------------------------
// 4. Second-order sandwich on the exact perturbation divergence over the
//    full cell grid.
void criterion_sandwich(Criterion& c) {
    for (const double pw : {0.05, 0.11, 0.3}) {
        const BinaryChannel rows(Distribution({1.0 - pw, pw}), Distribution({pw, 1.0 - pw}));
        for (const double rate : {1e-2, 1e-3}) {
            const auto params = CovertParams::make(rate, rate);
            for (const double lam : {0.0, 0.3, 0.5, 1.0}) {
                for (const std::size_t n : {1000u, 10000u, 100000u}) {
                    const double exact = exact_covert_kl(lam, n, params, rows);
                    const auto s = sqrt_slack_bounds(lam, n, params, rows);
                    c.require(s.lower <= exact && exact <= s.upper,
                              "sandwich violated at pW=" + fmt(pw) + " a=" + fmt(rate) +
                                  " lam=" + fmt(lam) + " n=" + std::to_string(n));
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 5. Brute-force oracle equivalence at n <= 8, binary outputs, M1 <= 4,
//    M2 <= 2: (a) product-KL identity, (b) Monte Carlo error rates and LRT
//    operating point vs enumeration, (c) exact vs MC covertness divergence.
void criterion_oracle_equivalence(Criterion& c) {
    const auto ch = make_bsc_broadcast(0.1, 0.15);

    // (a) exact_covert_kl vs full enumeration
    Rng rng(31);
    for (const std::size_t n : {2u, 5u, 8u}) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto params = CovertParams::make(0.05 + 0.25 * rng.next_unit(),
                                                   0.05 + 0.25 * rng.next_unit());
            const std::size_t wt = rng.next_below(static_cast<std::uint32_t>(n + 1));
            BitSeq x(n);
            for (std::size_t i = 0; i < wt; ++i) x.set_bit(i, true);
            const double fast =
                exact_covert_kl(static_cast<double>(wt) / n, n, params, ch.willie());
            const double slow = oracles::enumerated_covert_kl(x, params, ch.willie());
            c.require(std::fabs(fast - slow) <= 1e-10,
                      "product-KL mismatch " + fmt(fast) + " vs " + fmt(slow));
        }
    }

    // shared small codebook for (b) and (c)
    auto j = nlohmann::json::parse(R"({
        "channel": {"bsc": {"pB": 0.1, "pW": 0.15}},
        "schedule": {"a_alpha": 0.70710678118654752, "epsilon_typ": 0.3},
        "n_grid": [8], "M1_override": 2, "M2_override": 2,
        "trials": 100000, "seed": 12, "modes": {"reliability": true}})");
    const auto cfg = ExperimentConfig::from_json(j);
    const auto r = run_reliability(cfg);
    const auto rp = schedule_at(8, cfg.schedule, r.analysis);
    const Codebooks cb = generate_codebooks(
        2, 2, 8, r.analysis.lambda_star, cfg.schedule.epsilon_typ, rp.params,
        derive_stream(cfg.seed, stream_tag::codebook, 8));
    const auto bob = oracles::enumerated_bob_errors(cb, cfg.channel, cfg.schedule.delta);
    const auto willie = oracles::enumerated_willie_errors(cb, cfg.channel);

    const auto close3 = [](const ErrorEstimate& got, double want) {
        const double sigma = std::sqrt(std::max(want * (1.0 - want), 1e-12) /
                                       std::max<double>(1.0, static_cast<double>(got.denom)));
        return std::fabs(got.estimate - want) <= 3.0 * sigma + 1e-9;
    };
    for (const auto& row : r.reliability) {
        if (row.j == 0) continue;
        const std::size_t jj = row.j - 1;
        c.require(close3(row.bob_common_h0, bob.common_err[0][jj]),
                  "bob common | h0 off enumeration at j=" + std::to_string(row.j));
        c.require(close3(row.bob_common_h1, bob.common_err[1][jj]),
                  "bob common | h1 off enumeration at j=" + std::to_string(row.j));
        c.require(close3(row.bob_covert_h0, bob.covert_err_joint[0][jj] / bob.common_ok[0][jj]),
                  "bob covert | h0 off enumeration at j=" + std::to_string(row.j));
        c.require(close3(row.bob_covert_h1, bob.covert_err_joint[1][jj] / bob.common_ok[1][jj]),
                  "bob covert | h1 off enumeration at j=" + std::to_string(row.j));
        c.require(close3(row.willie_common_h0, willie[0][jj]),
                  "willie common | h0 off enumeration at j=" + std::to_string(row.j));
        c.require(close3(row.willie_common_h1, willie[1][jj]),
                  "willie common | h1 off enumeration at j=" + std::to_string(row.j));
    }

    // LRT operating point, M1 = 4 book
    const Codebooks cb4 = generate_codebooks(4, 1, 8, 0.5, 0.3,
                                             CovertParams::make(0.25, 0.25), 13);
    const std::size_t trials = 100000;
    const auto rep = lrt_detect(cb4, 1, ch.willie(), 0.0, trials, 14);
    const auto exact_lrt = oracles::enumerated_lrt_errors(cb4, 1, ch.willie(), 0.0);
    const double sa = std::sqrt(exact_lrt.alpha * (1 - exact_lrt.alpha) / trials);
    const double sb = std::sqrt(exact_lrt.beta * (1 - exact_lrt.beta) / trials);
    c.require(std::fabs(rep.alpha_hat - exact_lrt.alpha) <= 3 * sa,
              "LRT alpha off enumeration: " + fmt(rep.alpha_hat) + " vs " +
                  fmt(exact_lrt.alpha));
    c.require(std::fabs(rep.beta_hat - exact_lrt.beta) <= 3 * sb,
              "LRT beta off enumeration: " + fmt(rep.beta_hat) + " vs " +
                  fmt(exact_lrt.beta));

    // exact vs MC covertness divergence
    const auto exact_kl = covertness_kl_exact(cb4, 1, ch.willie());
    const auto mc_kl = covertness_kl_mc(cb4, 1, ch.willie(), 100000, 15);
    c.require(std::fabs(mc_kl.value - exact_kl.value) <= 4 * mc_kl.std_error,
              "covertness KL: MC " + fmt(mc_kl.value) + " vs exact " + fmt(exact_kl.value));
}

// ---------------------------------------------------------------------------
// 6. Exact per-symbol information identity under fuzzing.
void criterion_information_identity(Criterion& c) {
    Rng rng(41);
    for (int it = 0; it < 1000; ++it) {
        const std::size_t k = 2 + rng.next_below(4);
        const BinaryChannel rows(testsupport::random_distribution(rng, k),
                                 testsupport::random_distribution(rng, k));
        const double a = rng.next_unit();
        const double direct = mutual_information(a, rows);
        const double via_kl =
            a * kl(rows.row1, rows.row0) - kl(mix(rows.row0, rows.row1, a), rows.row0);
        c.require(std::fabs(direct - via_kl) <= 1e-12,
                  "identity off by " + fmt(std::fabs(direct - via_kl)));
    }
}

// ---------------------------------------------------------------------------
// 7. Square-root-law signature at desk scale: flat exact KL under the
//    n^(-1/2) schedule, growing KL under the n^(-1/4) control, and the
//    throughput ratio inside [converse_floor, achievable_ub] at both rate
//    endpoints.
void criterion_scaling_signature(Criterion& c) {
    auto base = nlohmann::json::parse(R"({
        "channel": {"bsc": {"pB": 0.05, "pW": 0.11}},
        "schedule": {"a_alpha": 0.5, "gamma": 1.0, "mu": 0.1, "nu": 0.1,
                     "delta": 0.1, "epsilon_typ": 0.1, "t_rate": 0.5, "exponent": 0.5},
        "n_grid": [500, 1000, 2000, 4000],
        "trials": 1000, "seed": 7, "modes": {"scaling": true}})");

    const auto run_rows = [&](double t_rate, double exponent) {
        auto j = base;
        j["schedule"]["t_rate"] = t_rate;
        j["schedule"]["exponent"] = exponent;
        return run_scaling(ExperimentConfig::from_json(j)).scaling;
    };

    const auto sqrt_rows = run_rows(0.5, 0.5);
    c.require(sqrt_rows.size() == 4, "scaling run lost grid points");
    double lo = 1e300, hi = 0.0;
    for (const auto& row : sqrt_rows) {
        lo = std::min(lo, row.kl_exact);
        hi = std::max(hi, row.kl_exact);
    }
    c.require(hi / lo < 1.05, "sqrt-schedule KL varies by " + fmt(100 * (hi / lo - 1)) + "%");

    const auto ctrl_rows = run_rows(0.5, 0.25);
    c.require(ctrl_rows.size() == 4, "control run lost grid points");
    c.require(ctrl_rows.back().kl_exact / ctrl_rows.front().kl_exact > 2.0,
              "n^(-1/4) control grew only " +
                  fmt(ctrl_rows.back().kl_exact / ctrl_rows.front().kl_exact) + "x");

    for (const double t : {0.0, 1.0}) {
        for (const auto& row : run_rows(t, 0.5)) {
            c.require(row.ratio >= row.converse_floor - 1e-9 &&
                          row.ratio <= row.achievable_ub + 1e-9,
                      "ratio " + fmt(row.ratio) + " outside [" + fmt(row.converse_floor) +
                          ", " + fmt(row.achievable_ub) + "] at n=" + std::to_string(row.n) +
                          ", t_rate=" + fmt(t));
        }
    }
}

// ---------------------------------------------------------------------------
// 8. Warden detection bound on the default experiment grid: every report
//    satisfies alpha+beta >= 1 - sqrt(KL) - 3 sigma.
void criterion_detection_bound(Criterion& c) {
    auto j = nlohmann::json::parse(R"({
        "channel": {"bsc": {"pB": 0.05, "pW": 0.11}},
        "schedule": {"a_alpha": 0.5},
        "n_grid": [500, 1000, 2000, 4000],
        "M1_override": 16, "M2_override": 2,
        "trials": 2000, "seed": 9, "modes": {"detection": true}})");
    const auto r = run_detection(ExperimentConfig::from_json(j));
    c.require(r.detection.size() == 8, "detection run lost rows");
    for (std::size_t i = 0; i < r.detection.size(); ++i) {
        const auto& d = r.detection[i];
        c.require(r.detection_floor_ok[i],
                  "detection floor violated at n=" + std::to_string(d.n) +
                      ", j=" + std::to_string(d.j) + ": a+b=" + fmt(d.alpha_plus_beta) +
                      " floor=" + fmt(d.pinsker_floor));
    }
}

// ---------------------------------------------------------------------------
// 9. Determinism: identical config and seed give byte-identical outputs,
//    independent of the execution policy.
void criterion_determinism(Criterion& c) {
    auto j = nlohmann::json::parse(R"({
        "channel": {"bsc": {"pB": 0.05, "pW": 0.11}},
        "schedule": {"a_alpha": 0.5, "epsilon_typ": 0.2},
        "n_grid": [64, 128],
        "M1_override": 8, "M2_override": 2,
        "trials": 400, "codebook_replicates": 2, "seed": 11,
        "modes": {"reliability": true, "detection": true, "scaling": true,
                  "covertness_mc": true}})");
    const auto cfg = ExperimentConfig::from_json(j);
    const auto render = [](const ExperimentResult& r) {
        std::ostringstream os;
        write_reliability_csv(os, r);
        write_trials_jsonl(os, r);
        write_detection_csv(os, r);
        write_detection_jsonl(os, r);
        write_scaling_csv(os, r);
        write_status_csv(os, r);
        return os.str();
    };
    const std::string a = render(run_experiment(cfg, Exec::parallel));
    const std::string b = render(run_experiment(cfg, Exec::parallel));
    const std::string s = render(run_experiment(cfg, Exec::serial));
    c.require(a == b, "two parallel runs differ");
    c.require(a == s, "serial and parallel runs differ");
    c.require(a.find(config_hash(cfg)) != std::string::npos, "output rows lack the hash");
}

struct Entry {
    const char* name;
    std::function<void(Criterion&)> fn;
    double budget_seconds;  // 0 = no stated budget
};

}  // namespace

int main() {
    const std::vector<Entry> entries{
        {"1 BSC closed forms (99-point grid)", criterion_bsc_closed_forms, 1.0},
        {"2 symmetric optimum (50 random pairs)", criterion_symmetric_optimum, 0.0},
        {"3 keyless feasibility (50x50 grid)", criterion_feasibility_grid, 0.0},
        {"4 perturbation-KL sandwich (72 cells)", criterion_sandwich, 5.0},
        {"5 brute-force oracle equivalence (n<=8)", criterion_oracle_equivalence, 120.0},
        {"6 per-symbol information identity (1000 draws)", criterion_information_identity,
         0.0},
        {"7 square-root-law scaling signature", criterion_scaling_signature, 600.0},
        {"8 warden detection bound (default grid)", criterion_detection_bound, 0.0},
        {"9 byte-identical reruns", criterion_determinism, 0.0},
    };

    int failures = 0;
    for (const auto& e : entries) {
        Criterion c;
        const auto t0 = std::chrono::steady_clock::now();
        e.fn(c);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (e.budget_seconds > 0.0 && secs > e.budget_seconds) {
            c.pass = false;
            c.detail = "runtime " + fmt(secs) + " s over budget " + fmt(e.budget_seconds);
        }
        if (c.pass) {
            std::printf("PASS  %-48s (%.2f s)\n", e.name, secs);
        } else {
            std::printf("FAIL  %-48s (%.2f s): %s\n", e.name, secs, c.detail.c_str());
            ++failures;
        }
    }
    return failures;
}
