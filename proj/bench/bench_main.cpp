// Timing comparison of the OpenMP kernels against their serial reference.
// Both paths are required to produce bit-identical results; this binary
// asserts that while reporting wall times and speedup.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "covertcast/adversary.hpp"
#include "covertcast/harness.hpp"
#include "covertcast/parallel.hpp"

using namespace covertcast;

namespace {

template <class F>
double timed(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   %s\n", name,
                serial_s, parallel_s, serial_s / parallel_s,
                identical ? "results identical" : "RESULTS DIFFER");
    if (!identical) std::exit(1);
}

std::string render(const ExperimentResult& r) {
    std::ostringstream os;
    write_reliability_csv(os, r);
    write_trials_jsonl(os, r);
    write_detection_csv(os, r);
    write_scaling_csv(os, r);
    return os.str();
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());

    auto j = nlohmann::json::parse(R"({
        "channel": {"bsc": {"pB": 0.05, "pW": 0.11}},
        "schedule": {"a_alpha": 0.5},
        "n_grid": [2000],
        "M1_override": 16, "M2_override": 4,
        "trials": 2000, "seed": 1, "modes": {"reliability": true}})");
    const auto cfg = ExperimentConfig::from_json(j);

    {
        ExperimentResult rs, rp;
        const double ts = timed([&] { rs = run_reliability(cfg, Exec::serial); });
        const double tp = timed([&] { rp = run_reliability(cfg, Exec::parallel); });
        report("reliability trials", ts, tp, render(rs) == render(rp));
    }

    const auto ch = make_bsc_broadcast(0.05, 0.11);
    const auto cb = generate_codebooks(32, 1, 1000, 0.5, 0.1,
                                       CovertParams::make(0.0158, 0.0158), 3);
    {
        KlEstimate es, ep;
        const double ts = timed(
            [&] { es = covertness_kl_mc(cb, 1, ch.willie(), 20000, 4, Exec::serial); });
        const double tp = timed(
            [&] { ep = covertness_kl_mc(cb, 1, ch.willie(), 20000, 4, Exec::parallel); });
        report("covertness KL (MC)", ts, tp,
               es.value == ep.value && es.std_error == ep.std_error);
    }
    {
        DetectionReport rs, rp;
        const double ts = timed([&] {
            rs = lrt_detect(cb, 1, ch.willie(), 0.0, 20000, 5, std::nullopt, Exec::serial);
        });
        const double tp = timed([&] {
            rp = lrt_detect(cb, 1, ch.willie(), 0.0, 20000, 5, std::nullopt, Exec::parallel);
        });
        report("LRT detection trials", ts, tp,
               rs.alpha_hat == rp.alpha_hat && rs.beta_hat == rp.beta_hat);
    }
    {
        const auto small = generate_codebooks(4, 1, 12, 0.5, 0.2,
                                              CovertParams::make(0.2, 0.2), 6);
        KlEstimate es, ep;
        const double ts =
            timed([&] { es = covertness_kl_exact(small, 1, ch.willie(), Exec::serial); });
        const double tp =
            timed([&] { ep = covertness_kl_exact(small, 1, ch.willie(), Exec::parallel); });
        report("exact KL enumeration", ts, tp, es.value == ep.value);
    }
    return 0;
}
