#include "dynmo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "dynmo/pareto.hpp"
#include "dynmo/seeder.hpp"
#include "dynmo/transfer_boost.hpp"

namespace dynmo {

namespace {

// Decorrelates the environment stream (dMOP3's active variable) from the run's
// main stream so every variant of a seed sees the same schedule.
constexpr std::uint64_t kEnvironmentStream = 0x9E3779B97F4A7C15ULL;

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    const std::string v = trim(value);
    std::istringstream is(v);
    T out{};
    is >> out;
    if (!is || !is.eof()) {
        throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + v + "'");
    }
    return out;
}

std::size_t parse_size(std::string_view key, std::string_view value) {
    const std::string v = trim(value);
    if (v.empty() || v.front() == '-')
        throw ConfigError("config key '" + std::string(key) + "': expected a non-negative integer");
    return parse_number<std::size_t>(key, v);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Vector> reference_front(const DynamicProblem& problem, const Environment& env,
                                    const ExperimentConfig& cfg) {
    const std::size_t count =
        problem.objectives() == 2 ? cfg.pof_points_2d : cfg.pof_grid_3d * cfg.pof_grid_3d;
    return problem.sample_true_pof(env, count);
}

Population uniform_population(const DynamicProblem& problem, std::size_t n, Rng& rng) {
    Population pop;
    pop.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pop.push_back({sample_uniform(problem, rng), std::nullopt, 0});
    return pop;
}

}  // namespace

const char* to_string(Variant v) {
    switch (v) {
        case Variant::Rtlp: return "rtlp";
        case Variant::Plain: return "plain";
        case Variant::RandomRestart: return "random-restart";
    }
    return "?";
}

Variant parse_variant(std::string_view s) {
    const std::string v = trim(s);
    if (v == "rtlp") return Variant::Rtlp;
    if (v == "plain") return Variant::Plain;
    if (v == "random-restart") return Variant::RandomRestart;
    throw ConfigError("unknown variant: " + v);
}

void ExperimentConfig::validate() const {
    if (problems.empty()) throw ConfigError("no problems configured");
    for (const auto& p : problems) {
        try {
            make_problem(p);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (!optimizer_available(optimizer)) {
        throw ConfigError(optimizer == "rmmeda"
                              ? "optimizer 'rmmeda' is reserved but not implemented"
                              : "unknown optimizer: " + optimizer);
    }
    if (settings.empty()) throw ConfigError("no (tau_t, n_t) settings configured");
    for (const auto& s : settings)
        if (s.tau_t == 0 || s.n_t == 0) throw ConfigError("tau_t and n_t must be >= 1");
    if (seeds.empty()) throw ConfigError("no seeds configured");
    if (variants.empty()) throw ConfigError("no variants configured");
    if (population_size < 2 || population_size % 2 != 0)
        throw ConfigError("population_size must be even and >= 2");
    if (rounds < 2) throw ConfigError("rounds must be >= 2");
    if (target_count < 2) throw ConfigError("target_count must be >= 2");
    if (test_count < population_size) throw ConfigError("test_count must be >= population_size");
    if (initial_generations == 0) throw ConfigError("initial_generations must be >= 1");
    if (pof_points_2d < 2 || pof_grid_3d < 2) throw ConfigError("reference front too small");
    try {
        OptimizerConfig oc = optimizer_config;
        oc.population_size = population_size;
        oc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    for (auto& item : split(s, ',')) {
        auto t = trim(item);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view s) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(s)) {
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
            out.push_back(parse_number<std::uint64_t>("seeds", item));
            continue;
        }
        const auto lo = parse_number<std::uint64_t>("seeds", item.substr(0, dash));
        const auto hi = parse_number<std::uint64_t>("seeds", item.substr(dash + 1));
        if (hi < lo) throw ConfigError("seeds: empty range '" + item + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
    return out;
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "problems") {
            cfg.problems = split_list(value);
        } else if (key == "settings") {
            cfg.settings.clear();
            for (const auto& item : split_list(value)) {
                const auto parts = split(item, ':');
                if (parts.size() != 2) throw ConfigError("settings: expected tau_t:n_t, got " + item);
                cfg.settings.push_back({parse_size(key, parts[0]), parse_size(key, parts[1])});
            }
        } else if (key == "seeds") {
            cfg.seeds = parse_seed_list(value);
        } else if (key == "variants") {
            cfg.variants.clear();
            for (const auto& v : split_list(value)) cfg.variants.push_back(parse_variant(v));
        } else if (key == "optimizer") {
            cfg.optimizer = value;
        } else if (key == "output") {
            cfg.output = value;
        } else if (key == "population_size") {
            cfg.population_size = parse_size(key, value);
        } else if (key == "rounds") {
            cfg.rounds = parse_size(key, value);
        } else if (key == "target_count") {
            cfg.target_count = parse_size(key, value);
        } else if (key == "test_count") {
            cfg.test_count = parse_size(key, value);
        } else if (key == "changes") {
            cfg.changes = parse_size(key, value);
        } else if (key == "initial_generations") {
            cfg.initial_generations = parse_size(key, value);
        } else if (key == "igd_form") {
            if (value == "euclidean") cfg.igd_form = IgdForm::Euclidean;
            else if (value == "squared") cfg.igd_form = IgdForm::Squared;
            else throw ConfigError("igd_form must be 'euclidean' or 'squared'");
        } else if (key == "change_detection") {
            if (value == "schedule") cfg.detection = ChangeDetection::Schedule;
            else if (value == "sentinel") cfg.detection = ChangeDetection::Sentinel;
            else throw ConfigError("change_detection must be 'schedule' or 'sentinel'");
        } else if (key == "pof_points_2d") {
            cfg.pof_points_2d = parse_size(key, value);
        } else if (key == "pof_grid_3d") {
            cfg.pof_grid_3d = parse_size(key, value);
        } else if (key == "threads") {
            cfg.threads = parse_size(key, value);
        } else if (key == "svr_c") {
            cfg.svr.C = parse_number<double>(key, value);
        } else if (key == "svr_epsilon") {
            cfg.svr.epsilon = parse_number<double>(key, value);
        } else if (key == "svr_gamma") {
            cfg.svr.gamma = parse_number<double>(key, value);
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    auto join = [&os](const auto& items, auto&& fmt) {
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) os << ", ";
            fmt(items[i]);
        }
        os << '\n';
    };
    os << "problems = ";
    join(cfg.problems, [&](const std::string& p) { os << p; });
    os << "settings = ";
    join(cfg.settings, [&](const DynamicSetting& s) { os << s.tau_t << ':' << s.n_t; });
    os << "seeds = ";
    join(cfg.seeds, [&](std::uint64_t s) { os << s; });
    os << "variants = ";
    join(cfg.variants, [&](Variant v) { os << to_string(v); });
    os << "optimizer = " << cfg.optimizer << '\n'
       << "output = " << cfg.output.string() << '\n'
       << "population_size = " << cfg.population_size << '\n'
       << "rounds = " << cfg.rounds << '\n'
       << "target_count = " << cfg.target_count << '\n'
       << "test_count = " << cfg.test_count << '\n'
       << "changes = " << cfg.changes << '\n'
       << "initial_generations = " << cfg.initial_generations << '\n'
       << "igd_form = " << (cfg.igd_form == IgdForm::Euclidean ? "euclidean" : "squared") << '\n'
       << "change_detection = "
       << (cfg.detection == ChangeDetection::Schedule ? "schedule" : "sentinel") << '\n'
       << "pof_points_2d = " << cfg.pof_points_2d << '\n'
       << "pof_grid_3d = " << cfg.pof_grid_3d << '\n'
       << "threads = " << cfg.threads << '\n'
       << "svr_c = " << format_double(cfg.svr.C) << '\n'
       << "svr_epsilon = " << format_double(cfg.svr.epsilon) << '\n'
       << "svr_gamma = " << format_double(cfg.svr.gamma) << '\n';
    return os.str();
}

std::vector<Cell> enumerate_cells(const ExperimentConfig& cfg) {
    std::vector<Cell> cells;
    for (const auto& p : cfg.problems)
        for (const auto& s : cfg.settings)
            for (auto seed : cfg.seeds)
                for (auto v : cfg.variants) cells.push_back({p, s, seed, v});
    return cells;
}

bool detect_change(const Population& pop, const DynamicProblem& problem, const Environment& env,
                   Rng& rng, std::size_t* evaluations) {
    if (pop.empty()) return false;
    const std::size_t panel = (pop.size() + 9) / 10;
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;
    for (std::size_t i = 0; i < panel; ++i) {
        const auto& ind = pop[order[i]];
        if (!ind.evaluated()) throw std::invalid_argument("detect_change: unevaluated individual");
        const Vector now = problem.evaluate(ind.x, env);
        if (evaluations) ++*evaluations;
        for (std::size_t k = 0; k < now.size(); ++k)
            if (std::abs(now[k] - (*ind.f)[k]) > 1e-12) changed = true;
    }
    return changed;
}

RunReport run_cell(const Cell& cell, const ExperimentConfig& cfg) {
    const auto problem = make_problem(cell.problem);
    OptimizerConfig oc = cfg.optimizer_config;
    oc.population_size = cfg.population_size;
    const auto optimizer = make_optimizer(cfg.optimizer, oc);

    SeederParams seeding;
    seeding.population_size = cfg.population_size;
    seeding.test_count = cfg.test_count;
    TrainOptions boosting;
    boosting.rounds = cfg.rounds;
    const LearnerFactory learner = svr_learner(cfg.svr);

    RunReport report;
    report.problem = problem->name();
    report.tau_t = cell.setting.tau_t;
    report.n_t = cell.setting.n_t;
    report.seed = cell.seed;
    report.variant = to_string(cell.variant);

    Rng rng(cell.seed);
    Rng env_rng(cell.seed ^ kEnvironmentStream);
    std::uniform_int_distribution<std::size_t> pick_variable(0, problem->dimension() - 1);

    const std::size_t changes = cfg.changes_for(cell.setting);
    Population pop;
    for (std::size_t k = 0; k <= changes; ++k) {
        TimeController clock{cell.setting.n_t, cell.setting.tau_t, k * cell.setting.tau_t};
        const Environment env{time_of_generation(clock), pick_variable(env_rng)};
        Evaluator evaluator(*problem, env, k);
        const bool initial = k == 0;
        const std::size_t generations =
            initial ? cfg.initial_generations : budget_for_environment(cell.setting.tau_t, false);

        std::size_t sentinel_evals = 0;
        Population start;
        if (initial || cell.variant == Variant::RandomRestart) {
            bool respond = true;
            if (!initial && cfg.detection == ChangeDetection::Sentinel)
                respond = detect_change(pop, *problem, env, rng, &sentinel_evals);
            start = respond ? uniform_population(*problem, cfg.population_size, rng) : pop;
        } else if (cell.variant == Variant::Plain) {
            if (cfg.detection == ChangeDetection::Sentinel)
                detect_change(pop, *problem, env, rng, &sentinel_evals);
            start = pop;
        } else {
            bool respond = true;
            if (cfg.detection == ChangeDetection::Sentinel)
                respond = detect_change(pop, *problem, env, rng, &sentinel_evals);
            if (respond) {
                const auto samples = build_training_set(pop, evaluator, cfg.target_count, rng);
                const auto ensemble = train_transfer(samples, learner, boosting);
                start = predict_initial_population(
                    [&ensemble](std::span<const double> x) { return ensemble.predict(x); },
                    *problem, seeding, rng);
            } else {
                start = pop;
            }
        }

        pop = optimizer->optimize(std::move(start), evaluator, generations, rng);

        const auto front = nondominated_objectives(pop);
        const auto reference = reference_front(*problem, env, cfg);
        EnvironmentRecord rec;
        rec.env_index = k;
        rec.t = env.time;
        rec.igd = igd(reference, front, cfg.igd_form);
        rec.ms = maximum_spread(objective_ranges(reference), front);
        rec.evals_used = evaluator.count() + sentinel_evals;
        rec.generations = generations;
        report.environments.push_back(rec);
    }
    return report;
}

std::vector<RunReport> run_experiment(const ExperimentConfig& cfg,
                                      const std::function<void(const RunReport&)>& sink) {
    cfg.validate();
    const auto cells = enumerate_cells(cfg);
    std::vector<RunReport> reports(cells.size());

    std::size_t workers = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(cells.size(), 1));

    std::atomic<std::size_t> next{0};
    std::mutex sink_mutex;
    std::exception_ptr failure;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                reports[i] = run_cell(cells[i], cfg);
                std::lock_guard lock(sink_mutex);
                if (sink) sink(reports[i]);
            } catch (...) {
                std::lock_guard lock(sink_mutex);
                if (!failure) failure = std::current_exception();
                next = cells.size();
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return reports;
}

void write_report_csv(std::ostream& os, const RunReport& r) {
    os << kRunCsvHeader << '\n';
    for (const auto& e : r.environments) {
        os << r.problem << ',' << r.tau_t << ',' << r.n_t << ',' << r.seed << ',' << r.variant
           << ',' << e.env_index << ',' << format_double(e.t) << ',' << format_double(e.igd) << ','
           << format_double(e.ms) << ',' << e.evals_used << '\n';
    }
}

std::string report_file_name(const RunReport& r) {
    std::ostringstream os;
    os << r.problem << "_tau" << r.tau_t << "_nt" << r.n_t << "_seed" << r.seed << '_' << r.variant
       << ".csv";
    return os.str();
}

std::filesystem::path save_report(const std::filesystem::path& dir, const RunReport& report) {
    std::filesystem::create_directories(dir);
    const auto path = dir / report_file_name(report);
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        write_report_csv(out, report);
    }
    std::filesystem::rename(tmp, path);
    return path;
}

RunReport read_report_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != kRunCsvHeader)
        throw std::runtime_error("report csv: unexpected header");
    RunReport r;
    bool first = true;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(trim(line), ',');
        if (f.size() != 10) throw std::runtime_error("report csv: expected 10 fields");
        if (first) {
            r.problem = f[0];
            r.tau_t = std::stoull(f[1]);
            r.n_t = std::stoull(f[2]);
            r.seed = std::stoull(f[3]);
            r.variant = f[4];
            first = false;
        }
        EnvironmentRecord e;
        e.env_index = std::stoull(f[5]);
        e.t = std::stod(f[6]);
        e.igd = std::stod(f[7]);
        e.ms = std::stod(f[8]);
        e.evals_used = std::stoull(f[9]);
        r.environments.push_back(e);
    }
    return r;
}

std::vector<RunReport> load_reports(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        if (entry.path().filename() == "summary.csv") continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RunReport> out;
    for (const auto& p : files) {
        std::ifstream in(p);
        out.push_back(read_report_csv(in));
    }
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<RunReport>& reports) {
    using Key = std::tuple<std::string, std::size_t, std::size_t, std::string>;
    std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& r : reports) {
        auto& g = groups[{r.problem, r.tau_t, r.n_t, r.variant}];
        g.first.push_back(r.migd());
        g.second.push_back(r.mean_ms());
    }
    auto stats = [](const std::vector<double>& v) {
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        return std::pair{mean, sd};
    };
    std::vector<SummaryRow> rows;
    for (const auto& [key, g] : groups) {
        SummaryRow row;
        std::tie(row.problem, row.tau_t, row.n_t, row.variant) = key;
        std::tie(row.migd_mean, row.migd_std) = stats(g.first);
        std::tie(row.ms_mean, row.ms_std) = stats(g.second);
        row.n_seeds = g.first.size();
        rows.push_back(row);
    }
    return rows;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << kSummaryCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.problem << ',' << r.tau_t << ',' << r.n_t << ',' << r.variant << ','
           << format_double(r.migd_mean) << ',' << format_double(r.migd_std) << ','
           << format_double(r.ms_mean) << ',' << format_double(r.ms_std) << ',' << r.n_seeds
           << '\n';
    }
}

void print_summary_table(std::ostream& os, const std::vector<SummaryRow>& rows) {
    using Cell = std::tuple<std::string, std::size_t, std::size_t>;
    std::map<Cell, std::pair<double, double>> best;  // lowest MIGD, highest MS
    for (const auto& r : rows) {
        auto [it, fresh] = best.try_emplace({r.problem, r.tau_t, r.n_t}, r.migd_mean, r.ms_mean);
        if (!fresh) {
            it->second.first = std::min(it->second.first, r.migd_mean);
            it->second.second = std::max(it->second.second, r.ms_mean);
        }
    }
    auto cell = [](double mean, double sd, bool mark) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(4) << mean << '(' << sd << ')' << (mark ? "*" : " ");
        return s.str();
    };
    os << std::left << std::setw(8) << "problem" << std::setw(10) << "(tau,nt)" << std::setw(16)
       << "variant" << std::setw(20) << "MIGD" << std::setw(20) << "MS" << "seeds\n";
    for (const auto& r : rows) {
        const auto& b = best.at({r.problem, r.tau_t, r.n_t});
        std::ostringstream setting;
        setting << '(' << r.tau_t << ',' << r.n_t << ')';
        os << std::left << std::setw(8) << r.problem << std::setw(10) << setting.str()
           << std::setw(16) << r.variant << std::setw(20)
           << cell(r.migd_mean, r.migd_std, r.migd_mean == b.first) << std::setw(20)
           << cell(r.ms_mean, r.ms_std, r.ms_mean == b.second) << r.n_seeds << '\n';
    }
}

}  // namespace dynmo
