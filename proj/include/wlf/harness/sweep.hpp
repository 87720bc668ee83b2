#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wlf/errors.hpp"
#include "wlf/harness/metrics.hpp"
#include "wlf/harness/pipeline.hpp"
#include "wlf/harness/record.hpp"
#include "wlf/pddl/parser.hpp"
#include "wlf/search/gbfs.hpp"

namespace wlf::harness {

struct Budgets {
    double train_seconds = 300.0;
    double plan_seconds = 60.0;
    double oracle_seconds = 300.0;
    std::uint64_t memory_bytes = 4ull << 30;

    search::SearchBudget plan_budget() const {
        search::SearchBudget b;
        b.wall_seconds = plan_seconds;
        b.max_memory_bytes = memory_bytes;
        return b;
    }

    search::SearchBudget oracle_budget() const {
        search::SearchBudget b;
        b.wall_seconds = oracle_seconds;
        b.max_memory_bytes = memory_bytes;
        return b;
    }
};

// Benchmark manifest: domain file, training/testing problem files and
// per-split budgets, with paths resolved against the manifest location.
struct Manifest {
    std::string domain_name;
    std::string domain_path;
    std::vector<std::string> train_problems;
    std::vector<std::string> test_problems;
    Budgets budgets;

    static Manifest load(const std::string &path) {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot read manifest " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception &e) {
            throw ValidationError("malformed manifest " + path + ": " + e.what());
        }
        Manifest m;
        std::filesystem::path base = std::filesystem::path(path).parent_path();
        auto resolve = [&base](const std::string &p) {
            std::filesystem::path fp(p);
            return fp.is_absolute() ? fp.string() : (base / fp).string();
        };
        m.domain_path = resolve(j.at("domain").get<std::string>());
        m.domain_name = j.value("name", std::filesystem::path(m.domain_path)
                                            .parent_path().filename().string());
        for (const auto &p : j.at("train"))
            m.train_problems.push_back(resolve(p.get<std::string>()));
        for (const auto &p : j.at("test"))
            m.test_problems.push_back(resolve(p.get<std::string>()));
        if (j.contains("budgets")) {
            const auto &b = j.at("budgets");
            m.budgets.train_seconds = b.value("train_seconds", m.budgets.train_seconds);
            m.budgets.plan_seconds = b.value("plan_seconds", m.budgets.plan_seconds);
            m.budgets.oracle_seconds = b.value("oracle_seconds", m.budgets.oracle_seconds);
            if (b.contains("memory_mb"))
                m.budgets.memory_bytes = b.at("memory_mb").get<std::uint64_t>() << 20;
        }
        return m;
    }
};

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::vector<RunRecord> load_records(const std::string &path) {
    std::vector<RunRecord> records;
    std::ifstream in(path);
    if (!in)
        return records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        records.push_back(RunRecord::from_json(nlohmann::json::parse(line)));
    }
    return records;
}

struct SweepOptions {
    std::string output_dir = ".";
    int jobs = 1;
    double agile_timeout = 60.0;
};

struct SweepOutcome {
    std::vector<RunRecord> records; // all records, resumed ones included
    int configs_run = 0;
    int configs_resumed = 0;
};

// Censored-value convention for configurations whose model never
// trained, applied in the aggregate view only.
inline constexpr double kCensoredModelSize = 1e6;
inline constexpr double kCensoredTrainSeconds = 300.0;

struct ConfigSummary {
    ModelConfig config;
    std::string config_id;
    int coverage = 0;
    double agile = 0.0;
    double train_seconds = 0.0;
    double model_size = 0.0;
    double eval = 0.0;
    bool censored = false;
};

inline std::vector<ConfigSummary> summarise(const std::vector<RunRecord> &records,
                                            double agile_timeout = 60.0) {
    std::map<std::string, ConfigSummary> by_config;
    auto cov = coverage(records);
    auto agile = agile_scores(records, agile_timeout);
    for (const auto &r : records) {
        auto [it, inserted] = by_config.try_emplace(r.config_id);
        ConfigSummary &s = it->second;
        if (inserted) {
            s.config = r.config;
            s.config_id = r.config_id;
            s.coverage = cov[r.config_id];
            s.agile = agile[r.config_id];
        }
        if (r.model_trained) {
            s.train_seconds = r.train_seconds;
            s.model_size = static_cast<double>(r.model_size);
            s.eval = r.train_eval;
        } else {
            s.censored = true;
            s.train_seconds = kCensoredTrainSeconds;
            s.model_size = kCensoredModelSize;
            s.eval = 0.0;
        }
    }
    std::vector<ConfigSummary> result;
    for (auto &[id, summary] : by_config)
        result.push_back(std::move(summary));
    return result;
}

inline void emit_report(const std::vector<RunRecord> &records, const std::string &output_dir,
                        double agile_timeout = 60.0) {
    std::filesystem::create_directories(output_dir);
    std::vector<ConfigSummary> summaries = summarise(records, agile_timeout);

    std::ofstream csv(output_dir + "/summary.csv");
    if (!csv)
        throw IoError("cannot write " + output_dir + "/summary.csv");
    csv << "# per-configuration aggregates; censored rows use size=1e6, train_seconds=300\n";
    csv << "config,algorithm,iterations,pruning,hash,repr,optimiser,"
           "coverage,agile,train_seconds,model_size,eval,censored\n";
    for (const auto &s : summaries) {
        csv << s.config_id << "," << kernels::to_string(s.config.algorithm) << ","
            << s.config.iterations << "," << to_string(s.config.pruning) << ","
            << kernels::to_string(s.config.hash) << "," << ilg::to_string(s.config.repr) << ","
            << s.config.optimiser << "," << s.coverage << "," << s.agile << ","
            << s.train_seconds << "," << s.model_size << "," << s.eval << ","
            << (s.censored ? "true" : "false") << "\n";
    }

    nlohmann::json summary_json = nlohmann::json::array();
    for (const auto &s : summaries)
        summary_json.push_back({{"config_id", s.config_id},
                                {"config", s.config.to_json()},
                                {"coverage", s.coverage},
                                {"agile", s.agile},
                                {"train_seconds", s.train_seconds},
                                {"model_size", s.model_size},
                                {"eval", s.eval},
                                {"censored", s.censored}});
    std::ofstream json_out(output_dir + "/summary.json");
    json_out << summary_json.dump(2) << "\n";
}

// Per-optimiser Pearson correlations between training metrics and
// coverage across configurations.
inline nlohmann::json correlation_report(const std::vector<RunRecord> &records,
                                         double agile_timeout = 60.0) {
    std::vector<ConfigSummary> summaries = summarise(records, agile_timeout);
    nlohmann::json out = nlohmann::json::array();
    for (const auto &optimiser : known_optimisers()) {
        std::vector<double> cov, eval, time, size;
        for (const auto &s : summaries) {
            if (s.config.optimiser != optimiser)
                continue;
            cov.push_back(static_cast<double>(s.coverage));
            eval.push_back(s.eval);
            time.push_back(s.train_seconds);
            size.push_back(s.model_size);
        }
        if (cov.size() < 4)
            continue;
        nlohmann::json row{{"optimiser", optimiser}, {"configs", cov.size()}};
        auto add = [&row, &cov](const char *metric, const std::vector<double> &x) {
            try {
                PearsonResult p = pearson(x, cov);
                row[metric] = {{"r", p.r},
                               {"ci_low", p.ci_low},
                               {"ci_high", p.ci_high},
                               {"p_value", p.p_value},
                               {"significant", p.significant}};
            } catch (const ValidationError &) {
                row[metric] = {{"r", nullptr}}; // constant metric, undefined r
            }
        };
        add("eval", eval);
        add("time", time);
        add("size", size);
        out.push_back(std::move(row));
    }
    return out;
}

// Runs every accepted configuration over the manifest's test problems.
// Appends one record per (configuration, problem) to results.jsonl;
// existing records are never recomputed, making resumes idempotent.
inline SweepOutcome run_sweep(const Manifest &manifest, const std::vector<ModelConfig> &configs,
                              const SweepOptions &options) {
    std::filesystem::create_directories(options.output_dir);
    std::string results_path = options.output_dir + "/results.jsonl";

    SweepOutcome outcome;
    outcome.records = load_records(results_path);
    std::set<std::pair<std::string, std::string>> done;
    for (const auto &r : outcome.records)
        done.insert({r.config_id, r.problem});

    pddl::DomainDef domain = pddl::parse_domain(read_text_file(manifest.domain_path));
    std::vector<pddl::LiftedTask> train_tasks;
    for (const auto &p : manifest.train_problems)
        train_tasks.push_back(pddl::parse_problem(read_text_file(p), domain));
    std::vector<pddl::LiftedTask> test_tasks;
    for (const auto &p : manifest.test_problems)
        test_tasks.push_back(pddl::parse_problem(read_text_file(p), domain));

    std::mutex io_mutex;
    auto append_record = [&](RunRecord record) {
        std::lock_guard<std::mutex> lock(io_mutex);
        std::ofstream out(results_path, std::ios::app);
        out << record.to_json().dump() << "\n";
        outcome.records.push_back(std::move(record));
    };

    auto run_config = [&](const ModelConfig &config) {
        std::string id = config.id();
        std::vector<std::size_t> missing;
        for (std::size_t t = 0; t < test_tasks.size(); ++t)
            if (!done.count({id, manifest.test_problems[t]}))
                missing.push_back(t);
        if (missing.empty())
            return false;

        RunRecord base;
        base.config_id = id;
        base.config = config;
        base.domain = manifest.domain_name;

        std::optional<TrainedModel> trained_model;
        try {
            trained_model = train_model(train_tasks, config, manifest.budgets.oracle_budget(),
                                        manifest.budgets.train_seconds);
            base.train_eval = trained_model->model.metrics.eval;
            base.train_seconds = trained_model->train_seconds;
            base.model_size = trained_model->model.metrics.size;
        } catch (const ResourceError &) {
            base.model_trained = false;
        }

        for (std::size_t t : missing) {
            RunRecord record = base;
            record.problem = manifest.test_problems[t];
            if (trained_model) {
                const pddl::LiftedTask &task = test_tasks[t];
                std::vector<pddl::GroundAction> ground = pddl::ground_actions(task);
                search::Heuristic h = make_heuristic(trained_model->model, task);
                search::SearchResult r = search::gbfs(task, ground, h,
                                                      manifest.budgets.plan_budget());
                record.solved = r.solved;
                record.wall_seconds = r.stats.wall_seconds;
                record.expansions = r.stats.expansions;
                if (r.solved)
                    record.plan_length = static_cast<int>(r.plan.steps.size());
                else
                    record.unsolved_reason = to_string(r.reason);
            } else {
                record.solved = false;
                record.unsolved_reason = "training-failed";
            }
            append_record(std::move(record));
        }
        return true;
    };

    if (options.jobs <= 1) {
        for (const auto &config : configs)
            (run_config(config) ? outcome.configs_run : outcome.configs_resumed)++;
    } else {
        // Independent (configuration, problem) jobs over a worker pool;
        // the results file is appended under the single-writer lock.
        std::vector<std::thread> workers;
        std::mutex next_mutex;
        std::size_t next = 0;
        int ran = 0, resumed = 0;
        for (int w = 0; w < options.jobs; ++w)
            workers.emplace_back([&]() {
                for (;;) {
                    std::size_t mine;
                    {
                        std::lock_guard<std::mutex> lock(next_mutex);
                        if (next >= configs.size())
                            return;
                        mine = next++;
                    }
                    bool did = run_config(configs[mine]);
                    std::lock_guard<std::mutex> lock(next_mutex);
                    (did ? ran : resumed)++;
                }
            });
        for (auto &w : workers)
            w.join();
        outcome.configs_run = ran;
        outcome.configs_resumed = resumed;
    }

    emit_report(outcome.records, options.output_dir, options.agile_timeout);
    return outcome;
}

} // namespace wlf::harness
