#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynmo/benchmarks.hpp"
#include "dynmo/metrics.hpp"
#include "dynmo/optimizer.hpp"
#include "dynmo/svr.hpp"

namespace dynmo {

/// Invalid configuration, raised before any run starts.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Variant {
    Rtlp,           // transfer-trained ensemble seeds the population
    Plain,          // previous final population carried forward
    RandomRestart,  // fresh uniform population
};

const char* to_string(Variant v);
Variant parse_variant(std::string_view s);

enum class ChangeDetection {
    Schedule,  // trust the tau_t schedule
    Sentinel,  // re-evaluate a sentinel panel and respond only on a detected change
};

struct DynamicSetting {
    std::size_t tau_t = 5;
    std::size_t n_t = 10;

    friend bool operator==(const DynamicSetting&, const DynamicSetting&) = default;
};

struct ExperimentConfig {
    std::vector<std::string> problems = problem_names();
    std::vector<DynamicSetting> settings = {{5, 10}, {10, 10}};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<Variant> variants = {Variant::Rtlp, Variant::Plain};
    std::string optimizer = "nsga2";
    std::filesystem::path output = "results";

    std::size_t population_size = 100;  // N
    std::size_t rounds = 10;            // K
    std::size_t target_count = 50;
    std::size_t test_count = 500;
    /// Environment changes per run; 0 means 3 * n_t.
    std::size_t changes = 0;
    std::size_t initial_generations = kInitialGenerations;

    IgdForm igd_form = IgdForm::Euclidean;
    ChangeDetection detection = ChangeDetection::Schedule;
    std::size_t pof_points_2d = 500;
    std::size_t pof_grid_3d = 32;
    /// Worker threads for independent cells; 0 means hardware concurrency.
    std::size_t threads = 0;

    SvrParams svr;
    OptimizerConfig optimizer_config;

    /// Throws `ConfigError` on unknown names or out-of-range values.
    void validate() const;
    std::size_t changes_for(const DynamicSetting& s) const {
        return changes == 0 ? 3 * s.n_t : changes;
    }
};

/// Parses the key = value format. `#` starts a comment. Lists are
/// comma-separated; settings are written `tau_t:n_t`; seed lists accept
/// ranges such as `1-10`. Throws `ConfigError`.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Inverse of `parse_config` for the keys it understands.
std::string format_config(const ExperimentConfig& cfg);

std::vector<std::string> split_list(std::string_view s);
std::vector<std::uint64_t> parse_seed_list(std::string_view s);

/// One grid cell: a single seeded run of one variant.
struct Cell {
    std::string problem;
    DynamicSetting setting;
    std::uint64_t seed = 0;
    Variant variant = Variant::Rtlp;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& cfg);

/// Re-evaluates ceil(10%) of `pop` at `env` and reports whether any objective
/// moved by more than 1e-12. Sentinels are drawn without replacement from
/// `rng`; their evaluations are added to `evaluations` when non-null.
bool detect_change(const Population& pop, const DynamicProblem& problem, const Environment& env,
                   Rng& rng, std::size_t* evaluations = nullptr);

/// Runs one cell end to end.
RunReport run_cell(const Cell& cell, const ExperimentConfig& cfg);

/// Runs every cell, writing each report through `sink` as it completes (calls
/// are serialized). Cells run on `cfg.threads` workers.
std::vector<RunReport> run_experiment(const ExperimentConfig& cfg,
                                      const std::function<void(const RunReport&)>& sink = {});

// CSV --------------------------------------------------------------------

inline constexpr std::string_view kRunCsvHeader =
    "problem,tau_t,n_t,seed,variant,env_index,t,igd,ms,evals_used";
inline constexpr std::string_view kSummaryCsvHeader =
    "problem,tau_t,n_t,variant,migd_mean,migd_std,ms_mean,ms_std,n_seeds";

void write_report_csv(std::ostream& os, const RunReport& report);
/// File name of a cell's report inside an output directory.
std::string report_file_name(const RunReport& report);
/// Writes (or overwrites) the cell's file under `dir`.
std::filesystem::path save_report(const std::filesystem::path& dir, const RunReport& report);
RunReport read_report_csv(std::istream& is);
/// Loads every per-cell CSV in `dir` (the summary file is skipped).
std::vector<RunReport> load_reports(const std::filesystem::path& dir);

struct SummaryRow {
    std::string problem;
    std::size_t tau_t = 0;
    std::size_t n_t = 0;
    std::string variant;
    double migd_mean = 0.0;
    double migd_std = 0.0;
    double ms_mean = 0.0;
    double ms_std = 0.0;
    std::size_t n_seeds = 0;
};

/// Mean and sample standard deviation per (problem, setting, variant).
std::vector<SummaryRow> summarize(const std::vector<RunReport>& reports);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
/// Human-readable table; the best variant per cell and metric carries `*`.
void print_summary_table(std::ostream& os, const std::vector<SummaryRow>& rows);

}  // namespace dynmo
