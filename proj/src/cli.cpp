#include "covertcast/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "covertcast/errors.hpp"
#include "covertcast/harness.hpp"
#include "covertcast/infotheory.hpp"

namespace covertcast {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// --channel accepts a JSON file path or the inline form "bsc:pB,pW".
nlohmann::json channel_spec_from_arg(const std::string& arg) {
    if (arg.rfind("bsc:", 0) == 0) {
        const std::string rest = arg.substr(4);
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw ConfigError("--channel bsc:<pB>,<pW> requires two values");
        try {
            return nlohmann::json{
                {"bsc",
                 {{"pB", std::stod(rest.substr(0, comma))},
                  {"pW", std::stod(rest.substr(comma + 1))}}}};
        } catch (const std::exception&) {
            throw ConfigError("--channel bsc: values must be numbers");
        }
    }
    std::ifstream in(arg);
    if (!in) throw ConfigError("cannot open channel file " + arg);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("channel file: bad JSON: ") + e.what());
    }
    return j;
}

double scaled(double nats, bool bits) { return bits ? nats / kLn2 : nats; }

int do_analyze(const std::string& channel_arg, bool bits) {
    const nlohmann::json spec = channel_spec_from_arg(channel_arg);
    const BroadcastChannel ch = channel_from_json(spec);
    const ChannelAnalysis a = analyze_channel(ch);
    const CovertCoefficients c = optimize_gamma(a);
    nlohmann::json out;
    out["channel"] = spec;
    out["units"] = bits ? "bits" : "nats";
    out["analysis"] = {{"lambda_star", a.lambda_star},
                       {"capacity_willie", scaled(a.capacity_willie, bits)},
                       {"dp10", scaled(a.dp10, bits)},
                       {"dp01", scaled(a.dp01, bits)},
                       {"dq10", scaled(a.dq10, bits)},
                       {"dq01", scaled(a.dq01, bits)},
                       {"chi10", a.chi10},
                       {"chi01", a.chi01}};
    out["coefficients"] = {{"gamma_star", c.gamma_star},
                           {"achievable_ub", scaled(c.achievable_ub, bits)},
                           {"converse_floor", scaled(c.converse_floor, bits)},
                           {"feasible", c.feasible}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

int do_bsc_table(const std::vector<double>& pbs, const std::vector<double>& pws, bool bits,
                 const std::string& out_path) {
    std::ostringstream os;
    os << "pB,pW,d_p,d_q,chi2_willie,coeff_upper,coeff_lower,feasible\n";
    for (double pb : pbs) {
        for (double pw : pws) {
            const BroadcastChannel ch = make_bsc_broadcast(pb, pw);
            const ChannelAnalysis a = analyze_channel(ch);
            const CovertCoefficients c = optimize_gamma(a);
            os << double_str(pb) << ',' << double_str(pw) << ','
               << double_str(scaled(a.dp10, bits)) << ',' << double_str(scaled(a.dq10, bits))
               << ',' << double_str(a.chi10) << ','
               << double_str(scaled(c.achievable_ub, bits)) << ','
               << double_str(scaled(c.converse_floor, bits)) << ',' << (c.feasible ? 1 : 0)
               << '\n';
        }
    }
    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw ConfigError("cannot open output file " + out_path);
        f << os.str();
    }
    return 0;
}

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string out_prefix;
    std::string format = "csv";
    bool bits = false;
};

// --bits rescales the pure log-domain quantities; unit-free columns and the
// mixed-normalization ones (ratio, coefficients, pinsker_floor, which are
// defined from nat-valued divergences) stay as computed.
ExperimentResult rescale_logs(ExperimentResult r, bool bits) {
    if (!bits) return r;
    for (auto& s : r.scaling) {
        s.log_m1 /= kLn2;
        s.log_m2 /= kLn2;
        s.kl_exact /= kLn2;
        if (s.kl_mc) *s.kl_mc /= kLn2;
        if (s.kl_mc_stderr) *s.kl_mc_stderr /= kLn2;
    }
    for (auto& d : r.detection) {
        d.kl_estimate /= kLn2;
        d.kl_stderr /= kLn2;
    }
    return r;
}

ExperimentConfig load_run_config(const RunOptions& opt) {
    ExperimentConfig cfg = ExperimentConfig::load(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.trials) cfg.trials = *opt.trials;
    if (cfg.trials < 1) throw ConfigError("config: trials must be >= 1");
    return cfg;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + path);
    fn(f);
}

int finish(const ExperimentResult& r, const RunOptions& opt,
           const std::vector<std::string>& kinds) {
    if (!opt.out_prefix.empty()) {
        if (opt.format == "json") {
            write_file(opt.out_prefix + ".json",
                       [&](std::ostream& o) { o << result_to_json(r).dump(2) << '\n'; });
        } else {
            for (const auto& kind : kinds) {
                if (kind == "reliability") {
                    write_file(opt.out_prefix + ".reliability.csv",
                               [&](std::ostream& o) { write_reliability_csv(o, r); });
                    write_file(opt.out_prefix + ".trials.jsonl",
                               [&](std::ostream& o) { write_trials_jsonl(o, r); });
                } else if (kind == "detection") {
                    write_file(opt.out_prefix + ".detection.csv",
                               [&](std::ostream& o) { write_detection_csv(o, r); });
                    write_file(opt.out_prefix + ".detection.jsonl",
                               [&](std::ostream& o) { write_detection_jsonl(o, r); });
                } else if (kind == "scaling") {
                    write_file(opt.out_prefix + ".scaling.csv",
                               [&](std::ostream& o) { write_scaling_csv(o, r); });
                }
            }
            write_file(opt.out_prefix + ".status.csv",
                       [&](std::ostream& o) { write_status_csv(o, r); });
        }
    } else {
        if (opt.format == "json") {
            std::cout << result_to_json(r).dump(2) << '\n';
        } else {
            for (const auto& kind : kinds) {
                if (kind == "reliability") write_reliability_csv(std::cout, r);
                if (kind == "detection") write_detection_csv(std::cout, r);
                if (kind == "scaling") write_scaling_csv(std::cout, r);
            }
            write_status_csv(std::cout, r);
        }
    }
    for (const auto& s : r.statuses)
        if (!s.ok) std::cerr << "warning: n=" << s.n << ": " << s.message << '\n';
    return r.all_infeasible() ? 2 : 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"covertcast: covert-throughput analysis and link simulation for "
                 "binary-input broadcast channels"};
    app.require_subcommand(1);

    std::string channel_arg;
    bool bits = false;
    auto* analyze = app.add_subcommand(
        "analyze", "Channel divergences, capacity input, throughput coefficients");
    analyze->add_option("--channel", channel_arg, "JSON channel file or bsc:<pB>,<pW>")
        ->required();
    analyze->add_flag("--bits", bits, "report log quantities in bits");

    RunOptions sim_opt, det_opt, scal_opt;
    const auto add_run_options = [](CLI::App* cmd, RunOptions& opt) {
        cmd->add_option("--config", opt.config_path, "experiment config JSON")->required();
        cmd->add_option("--seed", [&opt](const CLI::results_t& v) {
            opt.seed = std::stoull(v[0]);
            return true;
        }, "override config seed");
        cmd->add_option("--trials", [&opt](const CLI::results_t& v) {
            opt.trials = std::stoull(v[0]);
            return true;
        }, "override config trial count");
        cmd->add_option("--out", opt.out_prefix, "output file prefix");
        cmd->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_flag("--bits", opt.bits, "report log-domain quantities in bits");
    };
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo reliability runs");
    add_run_options(simulate, sim_opt);
    auto* detect = app.add_subcommand("detect", "Warden detection study");
    add_run_options(detect, det_opt);
    auto* scaling = app.add_subcommand("scaling", "Throughput scaling table");
    add_run_options(scaling, scal_opt);

    std::vector<double> pbs{0.05, 0.11, 0.2, 0.3, 0.4};
    std::vector<double> pws{0.05, 0.11, 0.2, 0.3, 0.4};
    bool table_bits = false;
    std::string table_out;
    auto* bsc_table = app.add_subcommand(
        "bsc-table", "Closed-form divergences and coefficient bounds on a BSC grid");
    bsc_table->add_option("--pb", pbs, "Bob crossover probabilities")->delimiter(',');
    bsc_table->add_option("--pw", pws, "Willie crossover probabilities")->delimiter(',');
    bsc_table->add_flag("--bits", table_bits, "report log quantities in bits");
    bsc_table->add_option("--out", table_out, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) return do_analyze(channel_arg, bits);
        if (bsc_table->parsed()) return do_bsc_table(pbs, pws, table_bits, table_out);
        if (simulate->parsed()) {
            ExperimentConfig cfg = load_run_config(sim_opt);
            cfg.modes.reliability = true;
            return finish(rescale_logs(run_reliability(cfg, Exec::parallel), sim_opt.bits),
                          sim_opt, {"reliability"});
        }
        if (detect->parsed()) {
            ExperimentConfig cfg = load_run_config(det_opt);
            cfg.modes.detection = true;
            return finish(rescale_logs(run_detection(cfg, Exec::parallel), det_opt.bits),
                          det_opt, {"detection"});
        }
        if (scaling->parsed()) {
            ExperimentConfig cfg = load_run_config(scal_opt);
            cfg.modes.scaling = true;
            return finish(rescale_logs(run_scaling(cfg, Exec::parallel), scal_opt.bits),
                          scal_opt, {"scaling"});
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace covertcast
