#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "covertcast/adversary.hpp"
#include "covertcast/codec.hpp"
#include "covertcast/covert.hpp"

namespace covertcast {

struct Modes {
    bool reliability = true;
    bool covertness_exact = false;
    bool covertness_mc = false;
    bool detection = false;
    bool scaling = false;
};

struct ExperimentConfig {
    BroadcastChannel channel;
    nlohmann::json channel_spec;  // as given, echoed into outputs
    Schedule schedule;
    std::vector<std::size_t> n_grid;
    std::optional<std::size_t> m1_override;
    std::optional<std::size_t> m2_override;
    std::size_t trials = 2000;
    // Reliability trials rotate over this many independent codebook draws;
    // the error metrics are codebook-ensemble averages, and a single draw's
    // realization noise can hide the trend in n at desk scale.
    std::size_t codebook_replicates = 1;
    std::uint64_t seed = 1;
    Modes modes;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    nlohmann::json to_json() const;  // canonical echo of the effective config
};

/// FNV-1a over the canonical config serialization; hex string.
std::string config_hash(const ExperimentConfig& cfg);

struct TrialRecord {
    std::size_t n = 0;
    std::size_t replicate = 0;  // codebook draw index
    std::size_t j = 0;          // true common message, 1-based
    std::size_t trial = 0;
    bool h1 = false;         // covert message present
    std::size_t w1_true = 0;
    long w1_hat = -1;        // -1: covert stage not attributed (common decode failed)
    std::size_t w2_hat_bob = 0;
    std::size_t w2_hat_willie = 0;
    bool ambiguous = false;
    bool covert_attributed = false;
    bool bob_common_err = false;
    bool bob_covert_err = false;   // meaningful only when covert_attributed
    bool willie_common_err = false;
};

struct ErrorEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t denom = 0;
};

/// One aggregate row; j = 0 pools all common messages.
struct ReliabilityRow {
    std::size_t n = 0;
    std::size_t j = 0;
    std::size_t m1 = 0, m2 = 0;
    ErrorEstimate bob_common_h0, bob_common_h1;
    ErrorEstimate bob_covert_h0, bob_covert_h1;
    ErrorEstimate willie_common_h0, willie_common_h1;
};

struct ScalingRow {
    std::size_t n = 0;
    double alpha_n = 0.0, beta_n = 0.0;
    double log_m1 = 0.0, log_m2 = 0.0;
    double kl_exact = 0.0;
    double ratio = 0.0;  // log_m1 / sqrt(n * kl_exact)
    double achievable_ub = 0.0, converse_floor = 0.0, gamma_star = 0.0;
    std::optional<double> kl_mc, kl_mc_stderr;  // codebook cross-check at small n
};

struct NStatus {
    std::size_t n = 0;
    bool ok = true;
    std::string message;
};

struct ExperimentResult {
    std::string hash;
    nlohmann::json config_echo;
    ChannelAnalysis analysis{};
    CovertCoefficients coefficients{};
    std::vector<TrialRecord> trials;
    std::vector<ReliabilityRow> reliability;
    std::vector<DetectionReport> detection;
    std::vector<bool> detection_floor_ok;  // parallel to detection
    std::vector<ScalingRow> scaling;
    std::vector<NStatus> statuses;

    bool all_infeasible() const;
};

ExperimentResult run_reliability(const ExperimentConfig& cfg, Exec exec = Exec::parallel);
ExperimentResult run_detection(const ExperimentConfig& cfg, Exec exec = Exec::parallel);
ExperimentResult run_scaling(const ExperimentConfig& cfg, Exec exec = Exec::parallel);

/// Run whatever the config's mode flags select, merged into one result.
ExperimentResult run_experiment(const ExperimentConfig& cfg, Exec exec = Exec::parallel);

/// Deterministic text writers; identical (config, seed) give byte-identical
/// output.
void write_reliability_csv(std::ostream& out, const ExperimentResult& r);
void write_trials_jsonl(std::ostream& out, const ExperimentResult& r);
void write_detection_csv(std::ostream& out, const ExperimentResult& r);
void write_detection_jsonl(std::ostream& out, const ExperimentResult& r);
void write_scaling_csv(std::ostream& out, const ExperimentResult& r);
void write_status_csv(std::ostream& out, const ExperimentResult& r);
nlohmann::json result_to_json(const ExperimentResult& r);

/// Shortest round-trip decimal representation of a double.
std::string double_str(double v);

}  // namespace covertcast
