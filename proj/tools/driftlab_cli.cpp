/// @file driftlab_cli.cpp
/// @brief Command-line front end: `run` and `sweep`

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftlab/config.hpp"
#include "driftlab/scenario.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::vector<std::string> sets;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

driftlab::RunConfig load(const CommonArgs& a) {
    driftlab::RunConfig c;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw driftlab::ConfigError("", 0, "cannot read " + a.config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        c = driftlab::parse_config(ss.str());
    } else {
        c = driftlab::preset_config(a.preset);
    }
    for (const auto& s : a.sets) driftlab::apply_override(c, s);
    if (!a.out.empty()) c.output.dir = a.out;
    if (a.seed) c.seed = *a.seed;
    if (a.threads) c.threads = *a.threads;
    driftlab::validate_config(c);
    return c;
}

void add_common(CLI::App* cmd, CommonArgs& a) {
    auto* cfg = cmd->add_option("--config", a.config_path, "configuration file")->check(CLI::ExistingFile);
    auto* pre = cmd->add_option("--preset", a.preset, "scenario preset")
                    ->check(CLI::IsMember(driftlab::preset_names()));
    cfg->excludes(pre);
    cmd->add_option("--set", a.sets, "override, section.key=value (repeatable)");
    cmd->add_option("--out", a.out, "output directory");
    cmd->add_option("--seed", a.seed, "particle seed");
    cmd->add_option("--threads", a.threads, "OpenMP threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

void print_summary(const driftlab::ScenarioResult& r, const std::string& dir) {
    const auto& rep = r.pde.report;
    std::printf("%s: verdict=%s", dir.c_str(), driftlab::to_string(rep.verdict));
    if (rep.t_detect) std::printf(" t_detect=%.6g", *rep.t_detect);
    if (rep.t_star_estimate) std::printf(" t_star=%.6g", *rep.t_star_estimate);
    if (rep.theory_bound) std::printf(" %s=%.6g", rep.theory_name.c_str(), *rep.theory_bound);
    std::printf(" steps=%zu exit=%d\n", r.pde.steps, r.exit_code);
}

int run_one(const driftlab::RunConfig& c) {
    const auto r = driftlab::run_config(c);
    if (r.exit_code == driftlab::exit_numerical_failure) {
        std::fprintf(stderr, "%s: numerical failure: %s\n", c.output.dir.c_str(), r.error.c_str());
        return r.exit_code;
    }
    print_summary(r, c.output.dir);
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"driftlab: age-structured drift-diffusion solver"};
    app.require_subcommand(1);

    CommonArgs run_args;
    auto* run = app.add_subcommand("run", "run one configuration or preset");
    add_common(run, run_args);

    CommonArgs sweep_args;
    std::string param;
    std::vector<std::string> values;
    auto* sweep = app.add_subcommand("sweep", "serial parameter sweep, one subdirectory per value");
    add_common(sweep, sweep_args);
    sweep->add_option("--param", param, "key to vary (gamma or section.key)")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (run_args.config_path.empty() && run_args.preset.empty())
                throw driftlab::ConfigError("", 0, "run needs --config or --preset");
            return run_one(load(run_args));
        }
        if (sweep_args.config_path.empty() && sweep_args.preset.empty())
            throw driftlab::ConfigError("", 0, "sweep needs --config or --preset");
        const auto base = load(sweep_args);
        std::vector<driftlab::RunConfig> runs;
        for (const auto& v : values) {
            auto c = base;
            driftlab::apply_override(c, param + "=" + v);
            const auto slash = param.rfind('.');
            const std::string leaf = slash == std::string::npos ? param : param.substr(slash + 1);
            c.output.dir = base.output.dir + "/" + leaf + "=" + v;
            driftlab::validate_config(c);
            runs.push_back(std::move(c));
        }
        int worst = 0;
        for (const auto& c : runs) {
            const int code = run_one(c);
            if (code == driftlab::exit_numerical_failure) worst = code;
        }
        return worst;
    } catch (const driftlab::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return driftlab::exit_config_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return driftlab::exit_numerical_failure;
    }
}
