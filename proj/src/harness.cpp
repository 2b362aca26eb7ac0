#include "covertcast/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "covertcast/errors.hpp"
#include "covertcast/infotheory.hpp"

namespace covertcast {

namespace {

Schedule schedule_from_json(const nlohmann::json& j) {
    Schedule s;
    const auto grab = [&](const char* key, double& field) {
        if (j.contains(key)) field = j.at(key).get<double>();
    };
    grab("a_alpha", s.a_alpha);
    grab("gamma", s.gamma);
    grab("mu", s.mu);
    grab("nu", s.nu);
    grab("delta", s.delta);
    grab("epsilon_typ", s.epsilon_typ);
    grab("t_rate", s.t_rate);
    grab("exponent", s.exponent);
    s.validate();
    return s;
}

nlohmann::json schedule_to_json(const Schedule& s) {
    return nlohmann::json{{"a_alpha", s.a_alpha},   {"gamma", s.gamma},
                          {"mu", s.mu},             {"nu", s.nu},
                          {"delta", s.delta},       {"epsilon_typ", s.epsilon_typ},
                          {"t_rate", s.t_rate},     {"exponent", s.exponent}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    if (!j.contains("channel")) throw ConfigError("config: missing \"channel\"");
    if (!j.contains("n_grid")) throw ConfigError("config: missing \"n_grid\"");

    nlohmann::json spec = j.at("channel");
    BroadcastChannel channel = channel_from_json(spec);

    ExperimentConfig cfg{std::move(channel), std::move(spec), Schedule{}, {},
                         std::nullopt,       std::nullopt,    2000,       1,
                         1,                  Modes{}};

    if (j.contains("schedule")) cfg.schedule = schedule_from_json(j.at("schedule"));
    cfg.schedule.validate();

    try {
        cfg.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: n_grid must be an array of positive integers");
    }
    if (cfg.n_grid.empty()) throw ConfigError("config: n_grid must be nonempty");
    for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
        if (cfg.n_grid[i] == 0) throw ConfigError("config: n_grid entries must be positive");
        if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1])
            throw ConfigError("config: n_grid must be strictly increasing");
    }

    if (j.contains("M1_override")) cfg.m1_override = j.at("M1_override").get<std::size_t>();
    if (j.contains("M2_override")) cfg.m2_override = j.at("M2_override").get<std::size_t>();
    if ((cfg.m1_override && *cfg.m1_override < 1) || (cfg.m2_override && *cfg.m2_override < 1))
        throw ConfigError("config: codebook size overrides must be >= 1");

    if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
    if (cfg.trials < 1) throw ConfigError("config: trials must be >= 1");
    if (j.contains("codebook_replicates"))
        cfg.codebook_replicates = j.at("codebook_replicates").get<std::size_t>();
    if (cfg.codebook_replicates < 1)
        throw ConfigError("config: codebook_replicates must be >= 1");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("modes")) {
        const auto& m = j.at("modes");
        const auto flag = [&](const char* key, bool& field) {
            if (m.contains(key)) field = m.at(key).get<bool>();
        };
        flag("reliability", cfg.modes.reliability);
        flag("covertness_exact", cfg.modes.covertness_exact);
        flag("covertness_mc", cfg.modes.covertness_mc);
        flag("detection", cfg.modes.detection);
        flag("scaling", cfg.modes.scaling);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: bad JSON: ") + e.what());
    }
    return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j{{"channel", channel_spec},
                     {"schedule", schedule_to_json(schedule)},
                     {"n_grid", n_grid},
                     {"trials", trials},
                     {"codebook_replicates", codebook_replicates},
                     {"seed", seed},
                     {"modes",
                      {{"reliability", modes.reliability},
                       {"covertness_exact", modes.covertness_exact},
                       {"covertness_mc", modes.covertness_mc},
                       {"detection", modes.detection},
                       {"scaling", modes.scaling}}}};
    if (m1_override) j["M1_override"] = *m1_override;
    if (m2_override) j["M2_override"] = *m2_override;
    return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string s = cfg.to_json().dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

bool ExperimentResult::all_infeasible() const {
    if (statuses.empty()) return false;
    for (const auto& s : statuses)
        if (s.ok) return false;
    return true;
}

namespace {

struct SizesAtN {
    RatePoint rate;
    std::size_t m1, m2;
};

// Per-n codebook sizes: schedule values unless overridden, with a hard cap
// on total storage so a missing override fails loudly instead of allocating
// the exponential-size codebook.
SizesAtN sizes_at(const ExperimentConfig& cfg, const ChannelAnalysis& a, std::size_t n) {
    SizesAtN s{schedule_at(n, cfg.schedule, a), 0, 0};
    const std::uint64_t m1 =
        cfg.m1_override ? *cfg.m1_override : message_count(s.rate.log_m1);
    const std::uint64_t m2 =
        cfg.m2_override ? *cfg.m2_override : message_count(s.rate.log_m2);
    const double bits = static_cast<double>(m2) * (1.0 + static_cast<double>(m1)) *
                        static_cast<double>(n) * static_cast<double>(cfg.codebook_replicates);
    if (bits > static_cast<double>(1ULL << 31))
        throw ConfigError("codebook too large at n=" + std::to_string(n) +
                          "; set M1_override/M2_override");
    s.m1 = static_cast<std::size_t>(m1);
    s.m2 = static_cast<std::size_t>(m2);
    return s;
}

ExperimentResult make_result(const ExperimentConfig& cfg) {
    ExperimentResult r;
    r.hash = config_hash(cfg);
    r.config_echo = cfg.to_json();
    r.analysis = analyze_channel(cfg.channel);
    r.coefficients = optimize_gamma(r.analysis);
    return r;
}

ErrorEstimate to_estimate(std::size_t num, std::size_t den) {
    ErrorEstimate e;
    e.denom = den;
    if (den == 0) return e;
    const double p = static_cast<double>(num) / static_cast<double>(den);
    e.estimate = p;
    e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(den));
    return e;
}

void aggregate_reliability(ExperimentResult& r, std::size_t n, std::size_t m1, std::size_t m2,
                           const std::vector<TrialRecord>& recs) {
    // index 0 pools all j
    struct Bucket {
        std::size_t bc_num[2] = {0, 0}, bc_den[2] = {0, 0};
        std::size_t cv_num[2] = {0, 0}, cv_den[2] = {0, 0};
        std::size_t wc_num[2] = {0, 0}, wc_den[2] = {0, 0};
    };
    std::vector<Bucket> b(m2 + 1);
    for (const auto& t : recs) {
        const int h = t.h1 ? 1 : 0;
        for (std::size_t idx : {std::size_t{0}, t.j}) {
            b[idx].bc_den[h]++;
            b[idx].bc_num[h] += t.bob_common_err ? 1 : 0;
            b[idx].wc_den[h]++;
            b[idx].wc_num[h] += t.willie_common_err ? 1 : 0;
            if (t.covert_attributed) {
                b[idx].cv_den[h]++;
                b[idx].cv_num[h] += t.bob_covert_err ? 1 : 0;
            }
        }
    }
    for (std::size_t j = 0; j <= m2; ++j) {
        ReliabilityRow row;
        row.n = n;
        row.j = j;
        row.m1 = m1;
        row.m2 = m2;
        row.bob_common_h0 = to_estimate(b[j].bc_num[0], b[j].bc_den[0]);
        row.bob_common_h1 = to_estimate(b[j].bc_num[1], b[j].bc_den[1]);
        row.bob_covert_h0 = to_estimate(b[j].cv_num[0], b[j].cv_den[0]);
        row.bob_covert_h1 = to_estimate(b[j].cv_num[1], b[j].cv_den[1]);
        row.willie_common_h0 = to_estimate(b[j].wc_num[0], b[j].wc_den[0]);
        row.willie_common_h1 = to_estimate(b[j].wc_num[1], b[j].wc_den[1]);
        r.reliability.push_back(row);
    }
}

}  // namespace

ExperimentResult run_reliability(const ExperimentConfig& cfg, Exec exec) {
    ExperimentResult r = make_result(cfg);
    for (std::size_t n : cfg.n_grid) {
        SizesAtN sizes{RatePoint{CovertParams{0.5, 0.5, 1.0}, 0, 0, 0, 0}, 0, 0};
        try {
            sizes = sizes_at(cfg, r.analysis, n);
        } catch (const std::exception& e) {
            r.statuses.push_back({n, false, std::string("reliability: ") + e.what()});
            continue;
        }
        const std::size_t reps = cfg.codebook_replicates;
        std::vector<Codebooks> books;
        books.reserve(reps);
        for (std::size_t rep = 0; rep < reps; ++rep)
            books.push_back(generate_codebooks(
                sizes.m1, sizes.m2, n, r.analysis.lambda_star, cfg.schedule.epsilon_typ,
                sizes.rate.params, derive_stream(cfg.seed, stream_tag::codebook, n, rep)));
        const BinaryChannel bob_eff = effective_channel(cfg.channel.bob(),
                                                        sizes.rate.params);
        const BinaryChannel willie_eff = effective_channel(cfg.channel.willie(),
                                                           sizes.rate.params);

        std::vector<TrialRecord> recs(cfg.trials);
        parallel_for(static_cast<std::int64_t>(cfg.trials), exec, [&](std::int64_t t) {
            Rng rng(derive_stream(cfg.seed, stream_tag::trial, n,
                                  static_cast<std::uint64_t>(t)));
            TrialRecord rec;
            rec.n = n;
            rec.trial = static_cast<std::size_t>(t);
            rec.replicate = static_cast<std::size_t>(t) % reps;
            const Codebooks& cb = books[rec.replicate];
            rec.h1 = (t % 2) == 1;
            rec.j = 1 + rng.next_below(static_cast<std::uint32_t>(sizes.m2));
            rec.w1_true = rec.h1 ? 1 + rng.next_below(static_cast<std::uint32_t>(sizes.m1)) : 0;

            const BitSeq& x = encode(cb, rec.w1_true, rec.j);
            // Y and Z drawn independently given X; every computed metric
            // depends on the marginals only
            const auto y = sample_output(cfg.channel.bob(), x, rng);
            const auto z = sample_output(cfg.channel.willie(), x, rng);

            rec.w2_hat_bob = decode_common(cb, y, bob_eff);
            rec.w2_hat_willie = decode_common(cb, z, willie_eff);
            rec.bob_common_err = rec.w2_hat_bob != rec.j;
            rec.willie_common_err = rec.w2_hat_willie != rec.j;

            if (!rec.bob_common_err) {
                const DecodeResult dr = decode_covert(cb, rec.w2_hat_bob, y,
                                                      cfg.channel.bob(), cfg.schedule.delta);
                rec.covert_attributed = true;
                rec.ambiguous = dr.ambiguous;
                rec.w1_hat = static_cast<long>(dr.w1_hat);
                rec.bob_covert_err = dr.ambiguous || dr.w1_hat != rec.w1_true;
            }
            recs[static_cast<std::size_t>(t)] = rec;
        });

        aggregate_reliability(r, n, sizes.m1, sizes.m2, recs);
        r.trials.insert(r.trials.end(), recs.begin(), recs.end());
        r.statuses.push_back({n, true, "reliability: ok"});
    }
    return r;
}

ExperimentResult run_detection(const ExperimentConfig& cfg, Exec exec) {
    ExperimentResult r = make_result(cfg);
    const std::size_t kz = cfg.channel.willie().alphabet_size();
    for (std::size_t n : cfg.n_grid) {
        SizesAtN sizes{RatePoint{CovertParams{0.5, 0.5, 1.0}, 0, 0, 0, 0}, 0, 0};
        try {
            sizes = sizes_at(cfg, r.analysis, n);
        } catch (const std::exception& e) {
            r.statuses.push_back({n, false, std::string("detection: ") + e.what()});
            continue;
        }
        const Codebooks cb =
            generate_codebooks(sizes.m1, sizes.m2, n, r.analysis.lambda_star,
                               cfg.schedule.epsilon_typ, sizes.rate.params,
                               derive_stream(cfg.seed, stream_tag::codebook, n));

        double points = 1.0;
        for (std::size_t i = 0; i < n && points <= 2.0 * kExactEnumerationBudget; ++i)
            points *= static_cast<double>(kz);
        const bool exact_ok = cfg.modes.covertness_exact &&
                              points <= static_cast<double>(kExactEnumerationBudget);

        const std::size_t first_row = r.detection.size();
        for (std::size_t j = 1; j <= sizes.m2; ++j) {
            const KlEstimate kl =
                exact_ok ? covertness_kl_exact(cb, j, cfg.channel.willie(), exec)
                         : covertness_kl_mc(cb, j, cfg.channel.willie(), cfg.trials,
                                            derive_stream(cfg.seed, stream_tag::detect, n, j),
                                            exec);
            const DetectionReport rep =
                lrt_detect(cb, j, cfg.channel.willie(), 0.0, cfg.trials,
                           derive_stream(cfg.seed, stream_tag::detect, n, j), kl, exec);
            double sig = std::sqrt((rep.alpha_hat * (1.0 - rep.alpha_hat) +
                                    rep.beta_hat * (1.0 - rep.beta_hat)) /
                                   static_cast<double>(rep.trials));
            if (!kl.exact && kl.value > 0.0)
                sig += 0.5 * kl.std_error / std::sqrt(kl.value);
            const bool ok = rep.alpha_plus_beta >= rep.pinsker_floor - 3.0 * sig - 1e-12;
            r.detection.push_back(rep);
            r.detection_floor_ok.push_back(ok);
        }
        // covertness must hold for every common message; flag the worst one
        std::size_t worst = first_row;
        for (std::size_t i = first_row; i < r.detection.size(); ++i)
            if (r.detection[i].kl_estimate > r.detection[worst].kl_estimate) worst = i;
        r.detection[worst].worst_j = true;
        r.statuses.push_back({n, true, "detection: ok"});
    }
    return r;
}

ExperimentResult run_scaling(const ExperimentConfig& cfg, Exec exec) {
    ExperimentResult r = make_result(cfg);
    for (std::size_t n : cfg.n_grid) {
        RatePoint rp{CovertParams{0.5, 0.5, 1.0}, 0, 0, 0, 0};
        try {
            rp = schedule_at(n, cfg.schedule, r.analysis);
        } catch (const std::exception& e) {
            r.statuses.push_back({n, false, std::string("scaling: ") + e.what()});
            continue;
        }
        ScalingRow row;
        row.n = n;
        row.alpha_n = rp.params.alpha;
        row.beta_n = rp.params.beta;
        row.log_m1 = rp.log_m1;
        row.log_m2 = rp.log_m2;
        row.kl_exact =
            exact_covert_kl(r.analysis.lambda_star, n, rp.params, cfg.channel.willie());
        row.ratio = rp.log_m1 / std::sqrt(static_cast<double>(n) * row.kl_exact);
        row.achievable_ub = r.coefficients.achievable_ub;
        row.converse_floor = r.coefficients.converse_floor;
        row.gamma_star = r.coefficients.gamma_star;

        // Codebook-induced divergence cross-check, affordable only at small n.
        if (cfg.modes.covertness_mc && n <= 64) {
            const std::size_t m1 =
                static_cast<std::size_t>(std::min<std::uint64_t>(message_count(rp.log_m1), 4096));
            const Codebooks cb = generate_codebooks(
                m1, 1, n, r.analysis.lambda_star, cfg.schedule.epsilon_typ, rp.params,
                derive_stream(cfg.seed, stream_tag::codebook, n));
            const KlEstimate kl = covertness_kl_mc(
                cb, 1, cfg.channel.willie(), cfg.trials,
                derive_stream(cfg.seed, stream_tag::detect, n, 0), exec);
            row.kl_mc = kl.value;
            row.kl_mc_stderr = kl.std_error;
        }
        r.scaling.push_back(row);
        r.statuses.push_back({n, true, "scaling: ok"});
    }
    return r;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, Exec exec) {
    ExperimentResult r = make_result(cfg);
    const auto merge = [&r](ExperimentResult part) {
        r.trials.insert(r.trials.end(), part.trials.begin(), part.trials.end());
        r.reliability.insert(r.reliability.end(), part.reliability.begin(),
                             part.reliability.end());
        r.detection.insert(r.detection.end(), part.detection.begin(), part.detection.end());
        r.detection_floor_ok.insert(r.detection_floor_ok.end(),
                                    part.detection_floor_ok.begin(),
                                    part.detection_floor_ok.end());
        r.scaling.insert(r.scaling.end(), part.scaling.begin(), part.scaling.end());
        r.statuses.insert(r.statuses.end(), part.statuses.begin(), part.statuses.end());
    };
    if (cfg.modes.reliability) merge(run_reliability(cfg, exec));
    if (cfg.modes.detection) merge(run_detection(cfg, exec));
    if (cfg.modes.scaling) merge(run_scaling(cfg, exec));
    return r;
}

std::string double_str(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

constexpr const char* kReliabilitySchema = "covertcast.reliability.v1";
constexpr const char* kDetectionSchema = "covertcast.detection.v1";
constexpr const char* kScalingSchema = "covertcast.scaling.v1";
constexpr const char* kStatusSchema = "covertcast.status.v1";

void emit_metric(std::ostream& out, const ExperimentResult& r, const ReliabilityRow& row,
                 const char* metric, const ErrorEstimate& e, double hi_cap = 1.0) {
    const double lo = std::max(0.0, e.estimate - 1.96 * e.std_error);
    const double hi = std::min(hi_cap, e.estimate + 1.96 * e.std_error);
    out << kReliabilitySchema << ',' << r.hash << ',' << row.n << ',' << row.j << ','
        << row.m1 << ',' << row.m2 << ',' << metric << ',' << double_str(e.estimate) << ','
        << double_str(e.std_error) << ',' << double_str(lo) << ',' << double_str(hi) << ','
        << e.denom << '\n';
}

ErrorEstimate sum_estimates(const ErrorEstimate& a, const ErrorEstimate& b) {
    ErrorEstimate e;
    e.estimate = a.estimate + b.estimate;
    e.std_error = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    e.denom = a.denom + b.denom;
    return e;
}

}  // namespace

void write_reliability_csv(std::ostream& out, const ExperimentResult& r) {
    out << "schema,config_hash,n,j,m1,m2,metric,estimate,std_error,ci95_lo,ci95_hi,"
           "denominator\n";
    for (const auto& row : r.reliability) {
        emit_metric(out, r, row, "bob_common_err_given_h0", row.bob_common_h0);
        emit_metric(out, r, row, "bob_common_err_given_h1", row.bob_common_h1);
        const auto bc = sum_estimates(row.bob_common_h0, row.bob_common_h1);
        emit_metric(out, r, row, "bob_common_err_sum", bc, 2.0);
        emit_metric(out, r, row, "bob_covert_err_given_h0", row.bob_covert_h0);
        emit_metric(out, r, row, "bob_covert_err_given_h1", row.bob_covert_h1);
        const auto cv = sum_estimates(row.bob_covert_h0, row.bob_covert_h1);
        emit_metric(out, r, row, "bob_covert_err_sum", cv, 2.0);
        emit_metric(out, r, row, "willie_common_err_given_h0", row.willie_common_h0);
        emit_metric(out, r, row, "willie_common_err_given_h1", row.willie_common_h1);
        const auto wc = sum_estimates(row.willie_common_h0, row.willie_common_h1);
        emit_metric(out, r, row, "willie_common_err_sum", wc, 2.0);
        emit_metric(out, r, row, "pe1", sum_estimates(bc, cv), 4.0);
        emit_metric(out, r, row, "pe2", wc, 2.0);
    }
}

void write_trials_jsonl(std::ostream& out, const ExperimentResult& r) {
    for (const auto& t : r.trials) {
        nlohmann::json j{{"config_hash", r.hash},
                         {"n", t.n},
                         {"replicate", t.replicate},
                         {"j", t.j},
                         {"trial", t.trial},
                         {"h1", t.h1},
                         {"w1_true", t.w1_true},
                         {"w1_hat", t.w1_hat},
                         {"w2_hat_bob", t.w2_hat_bob},
                         {"w2_hat_willie", t.w2_hat_willie},
                         {"ambiguous", t.ambiguous},
                         {"covert_attributed", t.covert_attributed},
                         {"bob_common_err", t.bob_common_err},
                         {"bob_covert_err", t.bob_covert_err},
                         {"willie_common_err", t.willie_common_err}};
        out << j.dump() << '\n';
    }
}

namespace {

nlohmann::json detection_json(const ExperimentResult& r, std::size_t idx) {
    const DetectionReport& d = r.detection[idx];
    return nlohmann::json{{"config_hash", r.hash},
                          {"n", d.n},
                          {"j", d.j},
                          {"m1", d.m1},
                          {"kl_mode", d.kl_mode},
                          {"kl_estimate", d.kl_estimate},
                          {"kl_stderr", d.kl_stderr},
                          {"alpha_hat", d.alpha_hat},
                          {"beta_hat", d.beta_hat},
                          {"alpha_plus_beta", d.alpha_plus_beta},
                          {"pinsker_floor", d.pinsker_floor},
                          {"floor_ok", static_cast<bool>(r.detection_floor_ok[idx])},
                          {"worst_j", d.worst_j},
                          {"threshold", d.threshold},
                          {"trials", d.trials}};
}

}  // namespace

void write_detection_csv(std::ostream& out, const ExperimentResult& r) {
    out << "schema,config_hash,n,j,m1,kl_mode,kl_estimate,kl_stderr,alpha_hat,beta_hat,"
           "alpha_plus_beta,pinsker_floor,floor_ok,worst_j,threshold,trials\n";
    for (std::size_t i = 0; i < r.detection.size(); ++i) {
        const auto& d = r.detection[i];
        out << kDetectionSchema << ',' << r.hash << ',' << d.n << ',' << d.j << ',' << d.m1
            << ',' << d.kl_mode << ',' << double_str(d.kl_estimate) << ','
            << double_str(d.kl_stderr) << ',' << double_str(d.alpha_hat) << ','
            << double_str(d.beta_hat) << ',' << double_str(d.alpha_plus_beta) << ','
            << double_str(d.pinsker_floor) << ',' << (r.detection_floor_ok[i] ? 1 : 0) << ','
            << (d.worst_j ? 1 : 0) << ',' << double_str(d.threshold) << ',' << d.trials
            << '\n';
    }
}

void write_detection_jsonl(std::ostream& out, const ExperimentResult& r) {
    for (std::size_t i = 0; i < r.detection.size(); ++i)
        out << detection_json(r, i).dump() << '\n';
}

void write_scaling_csv(std::ostream& out, const ExperimentResult& r) {
    out << "schema,config_hash,n,alpha_n,beta_n,log_m1,log_m2,kl_exact,ratio,achievable_ub,"
           "converse_floor,gamma_star,kl_mc,kl_mc_stderr\n";
    for (const auto& s : r.scaling) {
        out << kScalingSchema << ',' << r.hash << ',' << s.n << ',' << double_str(s.alpha_n)
            << ',' << double_str(s.beta_n) << ',' << double_str(s.log_m1) << ','
            << double_str(s.log_m2) << ',' << double_str(s.kl_exact) << ','
            << double_str(s.ratio) << ',' << double_str(s.achievable_ub) << ','
            << double_str(s.converse_floor) << ',' << double_str(s.gamma_star) << ','
            << (s.kl_mc ? double_str(*s.kl_mc) : std::string()) << ','
            << (s.kl_mc_stderr ? double_str(*s.kl_mc_stderr) : std::string()) << '\n';
    }
}

void write_status_csv(std::ostream& out, const ExperimentResult& r) {
    out << "schema,config_hash,n,ok,message\n";
    for (const auto& s : r.statuses)
        out << kStatusSchema << ',' << r.hash << ',' << s.n << ',' << (s.ok ? 1 : 0) << ",\""
            << s.message << "\"\n";
}

nlohmann::json result_to_json(const ExperimentResult& r) {
    nlohmann::json j;
    j["config_hash"] = r.hash;
    j["config"] = r.config_echo;
    j["analysis"] = {{"lambda_star", r.analysis.lambda_star},
                     {"capacity_willie", r.analysis.capacity_willie},
                     {"dp10", r.analysis.dp10},
                     {"dp01", r.analysis.dp01},
                     {"dq10", r.analysis.dq10},
                     {"dq01", r.analysis.dq01},
                     {"chi10", r.analysis.chi10},
                     {"chi01", r.analysis.chi01}};
    j["coefficients"] = {{"gamma_star", r.coefficients.gamma_star},
                         {"achievable_ub", r.coefficients.achievable_ub},
                         {"converse_floor", r.coefficients.converse_floor},
                         {"feasible", r.coefficients.feasible}};
    j["reliability"] = nlohmann::json::array();
    for (const auto& row : r.reliability) {
        const auto est = [](const ErrorEstimate& e) {
            return nlohmann::json{{"estimate", e.estimate},
                                  {"std_error", e.std_error},
                                  {"denominator", e.denom}};
        };
        j["reliability"].push_back({{"n", row.n},
                                    {"j", row.j},
                                    {"m1", row.m1},
                                    {"m2", row.m2},
                                    {"bob_common_err_given_h0", est(row.bob_common_h0)},
                                    {"bob_common_err_given_h1", est(row.bob_common_h1)},
                                    {"bob_covert_err_given_h0", est(row.bob_covert_h0)},
                                    {"bob_covert_err_given_h1", est(row.bob_covert_h1)},
                                    {"willie_common_err_given_h0", est(row.willie_common_h0)},
                                    {"willie_common_err_given_h1", est(row.willie_common_h1)}});
    }
    j["detection"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.detection.size(); ++i)
        j["detection"].push_back(detection_json(r, i));
    j["scaling"] = nlohmann::json::array();
    for (const auto& s : r.scaling) {
        nlohmann::json row{{"n", s.n},
                           {"alpha_n", s.alpha_n},
                           {"beta_n", s.beta_n},
                           {"log_m1", s.log_m1},
                           {"log_m2", s.log_m2},
                           {"kl_exact", s.kl_exact},
                           {"ratio", s.ratio},
                           {"achievable_ub", s.achievable_ub},
                           {"converse_floor", s.converse_floor},
                           {"gamma_star", s.gamma_star}};
        if (s.kl_mc) row["kl_mc"] = *s.kl_mc;
        if (s.kl_mc_stderr) row["kl_mc_stderr"] = *s.kl_mc_stderr;
        j["scaling"].push_back(row);
    }
    j["statuses"] = nlohmann::json::array();
    for (const auto& s : r.statuses)
        j["statuses"].push_back({{"n", s.n}, {"ok", s.ok}, {"message", s.message}});
    return j;
}

}  // namespace covertcast
