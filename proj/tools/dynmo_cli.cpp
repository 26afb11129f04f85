// dynmo: run dynamic multi-objective experiments, aggregate their reports,
// and self-check the transfer-boosting core.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <mutex>

#include "dynmo/experiment.hpp"
#include "dynmo/synthetic_tasks.hpp"

namespace {

using namespace dynmo;

struct RunOptions {
    std::string config;
    std::string problems;
    std::vector<std::size_t> tau_t;
    std::vector<std::size_t> n_t;
    std::string seeds;
    std::string variants;
    std::string optimizer;
    std::string out;
    std::size_t threads = 0;
    bool quiet = false;
};

void apply_overrides(ExperimentConfig& cfg, const RunOptions& o) {
    if (!o.problems.empty()) cfg.problems = split_list(o.problems);
    if (!o.seeds.empty()) cfg.seeds = parse_seed_list(o.seeds);
    if (!o.variants.empty()) {
        cfg.variants.clear();
        for (const auto& v : split_list(o.variants)) cfg.variants.push_back(parse_variant(v));
    }
    if (!o.optimizer.empty()) cfg.optimizer = o.optimizer;
    if (!o.out.empty()) cfg.output = o.out;
    if (o.threads != 0) cfg.threads = o.threads;
    if (o.tau_t.empty() && o.n_t.empty()) return;

    std::vector<std::size_t> taus = o.tau_t, nts = o.n_t;
    for (const auto& s : cfg.settings) {
        if (o.tau_t.empty()) taus.push_back(s.tau_t);
        if (o.n_t.empty()) nts.push_back(s.n_t);
    }
    std::vector<DynamicSetting> settings;
    for (auto tau : taus)
        for (auto nt : nts) {
            const DynamicSetting s{tau, nt};
            if (std::find(settings.begin(), settings.end(), s) == settings.end())
                settings.push_back(s);
        }
    cfg.settings = settings;
}

int run_command(const RunOptions& o) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    apply_overrides(cfg, o);
    cfg.validate();

    const auto total = enumerate_cells(cfg).size();
    std::size_t done = 0;
    run_experiment(cfg, [&](const RunReport& r) {
        const auto path = save_report(cfg.output, r);
        ++done;
        if (!o.quiet) {
            std::cout << '[' << done << '/' << total << "] " << r.problem << " (" << r.tau_t << ','
                      << r.n_t << ") seed " << r.seed << ' ' << r.variant << "  MIGD "
                      << r.migd() << "  MS " << r.mean_ms() << "  -> " << path.string() << '\n';
        }
    });
    return 0;
}

int report_command(const std::string& dir, const std::string& out) {
    const auto rows = summarize(load_reports(dir));
    const std::filesystem::path target =
        out.empty() ? std::filesystem::path(dir) / "summary.csv" : std::filesystem::path(out);
    std::ofstream f(target, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + target.string());
    write_summary_csv(f, rows);
    print_summary_table(std::cout, rows);
    std::cout << "summary written to " << target.string() << '\n';
    return 0;
}

int selftest_transfer(std::uint64_t seed) {
    bool ok = true;
    for (const auto& r : {check_unrelated_filtering(seed), check_identical_harmless(seed)}) {
        std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << "  (" << r.successes << '/'
                  << r.trials << ", need " << r.required << ")\n";
        ok = ok && r.passed();
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfer-seeded dynamic multi-objective optimization harness"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment grid and write per-cell CSVs");
    run_cmd->add_option("--config", run.config, "Key = value config file")->check(CLI::ExistingFile);
    run_cmd->add_option("--problem", run.problems, "Comma-separated problem names");
    run_cmd->add_option("--tau-t", run.tau_t, "Frequency of change (repeatable)");
    run_cmd->add_option("--n-t", run.n_t, "Severity of change (repeatable)");
    run_cmd->add_option("--seeds", run.seeds, "Seeds, e.g. 1-10 or 1,4,9");
    run_cmd->add_option("--variant", run.variants, "rtlp, plain, random-restart (comma list)");
    run_cmd->add_option("--optimizer", run.optimizer, "Static optimizer (nsga2)");
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
    run_cmd->add_flag("--quiet", run.quiet, "Suppress per-cell progress");

    std::string in_dir, summary_out;
    auto* report_cmd = app.add_subcommand("report", "Aggregate per-cell CSVs into a summary");
    report_cmd->add_option("--in", in_dir, "Directory of per-cell CSVs")->required();
    report_cmd->add_option("--out", summary_out, "Summary path (default <in>/summary.csv)");

    std::uint64_t selftest_seed = 1;
    auto* selftest_cmd = app.add_subcommand("selftest", "Built-in property checks");
    auto* transfer_cmd = selftest_cmd->add_subcommand("transfer", "Synthetic transfer-task checks");
    transfer_cmd->add_option("--seed", selftest_seed, "First seed of the repetition block");
    selftest_cmd->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run_command(run);
        if (*report_cmd) return report_command(in_dir, summary_out);
        if (*transfer_cmd) return selftest_transfer(selftest_seed);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
