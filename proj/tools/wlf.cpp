#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wlf/config.hpp"
#include "wlf/errors.hpp"
#include "wlf/harness/grid.hpp"
#include "wlf/harness/metrics.hpp"
#include "wlf/harness/pipeline.hpp"
#include "wlf/harness/sweep.hpp"
#include "wlf/ilg/build.hpp"
#include "wlf/learn/model.hpp"
#include "wlf/pddl/ground.hpp"
#include "wlf/pddl/parser.hpp"
#include "wlf/search/gbfs.hpp"
#include "wlf/search/oracle.hpp"

namespace {

using namespace wlf;

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text(const std::string &path, const std::string &content) {
    std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << content;
}

struct GlobalOptions {
    double timeout = 60.0;
    std::uint64_t memory_cap_mb = 4096;
    bool seed_free = false;
    std::string output_dir = ".";

    search::SearchBudget budget() const {
        search::SearchBudget b;
        b.wall_seconds = timeout;
        b.max_memory_bytes = memory_cap_mb << 20;
        return b;
    }
};

pddl::LiftedTask load_task(const std::string &domain_path, const std::string &problem_path) {
    pddl::DomainDef domain = pddl::parse_domain(slurp(domain_path));
    return pddl::parse_problem(slurp(problem_path), domain);
}

int cmd_parse(const std::string &domain_path, const std::string &problem_path,
              bool show_ground, const GlobalOptions &) {
    pddl::DomainDef domain = pddl::parse_domain(slurp(domain_path));
    nlohmann::json out{{"domain", domain.name},
                       {"predicates", domain.predicates.size()},
                       {"schemata", domain.schemata.size()},
                       {"max_arity", domain.max_arity()},
                       {"static_predicates", pddl::detect_static_predicates(domain)}};
    if (!problem_path.empty()) {
        pddl::LiftedTask task = pddl::parse_problem(slurp(problem_path), domain);
        out["problem"] = task.name;
        out["objects"] = task.objects.size();
        out["init_atoms"] = task.init.size();
        out["goal_atoms"] = task.goal.size();
        if (show_ground)
            out["ground_actions"] = pddl::ground_actions(task).size();
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_graphify(const std::string &domain_path, const std::string &problem_path,
                 const std::string &repr, const std::string &output) {
    pddl::LiftedTask task = load_task(domain_path, problem_path);
    auto statics = pddl::detect_static_predicates(task.domain);
    ilg::LabelledGraph g =
        ilg::build_ilg(task, task.init, repr_from_string(repr), statics);
    std::string text = ilg::export_text(
        g, [&](int f) {return ilg::feature_name(task.domain, f);});
    if (output.empty())
        std::cout << text;
    else
        write_text(output, text);
    return 0;
}

int cmd_oracle(const std::string &domain_path, const std::string &problem_path,
               const std::string &output, const GlobalOptions &global) {
    pddl::LiftedTask task = load_task(domain_path, problem_path);
    auto ground = pddl::ground_actions(task);
    search::OracleResult oracle = search::uniform_cost_oracle(task, ground, global.budget());
    nlohmann::json labels = nlohmann::json::array();
    for (std::size_t i = 0; i < oracle.trace.size(); ++i) {
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto &a : oracle.trace[i].atoms)
            atoms.push_back(pddl::format_atom(a, task));
        labels.push_back({{"hstar", oracle.labels[i]}, {"atoms", atoms}});
    }
    nlohmann::json out{{"problem", task.name},
                       {"optimal_plan_length", oracle.plan.steps.size()},
                       {"plan", nlohmann::json::array()},
                       {"trace", labels}};
    for (const auto &step : oracle.plan.steps)
        out["plan"].push_back(pddl::format_action(step, task));
    if (output.empty())
        std::cout << out.dump(2) << "\n";
    else
        write_text(output, out.dump(2) + "\n");
    return 0;
}

int cmd_train(const std::string &manifest_path, const std::string &config_text,
              const std::string &output, const GlobalOptions &) {
    harness::Manifest manifest = harness::Manifest::load(manifest_path);
    ModelConfig config = ModelConfig::parse(config_text);
    if (auto reason = harness::config_rejection(config))
        throw ValidationError(*reason);

    pddl::DomainDef domain = pddl::parse_domain(slurp(manifest.domain_path));
    std::vector<pddl::LiftedTask> tasks;
    for (const auto &p : manifest.train_problems)
        tasks.push_back(pddl::parse_problem(slurp(p), domain));

    harness::TrainedModel trained = harness::train_model(
        tasks, config, manifest.budgets.oracle_budget(), manifest.budgets.train_seconds);
    learn::save_model(output, trained.model);

    // Wall-clock training time lives beside the model, keeping the model
    // file itself a pure function of its inputs.
    nlohmann::json stats{{"config_id", config.id()},
                         {"train_seconds", trained.train_seconds},
                         {"eval", trained.model.metrics.eval},
                         {"size", trained.model.metrics.size},
                         {"prune_report", trained.prune_report.to_json()}};
    write_text(output + ".stats.json", stats.dump(2) + "\n");
    std::cout << "trained " << config.id() << ": " << trained.model.features.size()
              << " features, eval " << trained.model.metrics.eval << "\n";
    return 0;
}

int cmd_solve(const std::string &model_path, const std::string &domain_path,
              const std::string &problem_path, const std::string &plan_path,
              const std::string &stats_path, bool zero_heuristic,
              const GlobalOptions &global) {
    pddl::LiftedTask task = load_task(domain_path, problem_path);
    auto ground = pddl::ground_actions(task);

    std::optional<learn::LinearModel> model;
    search::Heuristic h;
    if (zero_heuristic) {
        h = [](const pddl::State &) {return 0.0;};
    } else {
        model = learn::load_model(model_path);
        h = harness::make_heuristic(*model, task);
    }

    search::SearchResult result = search::gbfs(task, ground, h, global.budget());
    nlohmann::json stats{{"problem", task.name},
                         {"solved", result.solved},
                         {"wall_seconds", result.stats.wall_seconds},
                         {"expansions", result.stats.expansions},
                         {"evaluations", result.stats.evaluations}};
    if (result.solved) {
        stats["plan_length"] = result.plan.steps.size();
        std::string plan_text = search::format_plan(result.plan, task);
        if (plan_path.empty())
            std::cout << plan_text;
        else
            write_text(plan_path, plan_text);
        auto check = search::validate_plan(task, result.plan);
        stats["validated"] = check.valid;
    } else {
        stats["unsolved_reason"] = search::to_string(result.reason);
        std::cout << "unsolved: " << search::to_string(result.reason) << "\n";
    }
    if (stats_path.empty())
        std::cerr << stats.dump(2) << "\n";
    else
        write_text(stats_path, stats.dump(2) + "\n");
    return 0;
}

std::vector<ModelConfig> configs_from_options(const std::string &grid_file,
                                              const std::vector<std::string> &config_texts,
                                              bool full_grid) {
    if (full_grid)
        return harness::enumerate_grid(harness::HyperparameterGrid{}).accepted;
    std::vector<ModelConfig> configs;
    if (!grid_file.empty()) {
        nlohmann::json j = nlohmann::json::parse(slurp(grid_file));
        harness::HyperparameterGrid grid;
        if (j.contains("algorithms")) {
            grid.algorithms.clear();
            for (const auto &a : j.at("algorithms"))
                grid.algorithms.push_back(kernels::algorithm_from_string(a.get<std::string>()));
        }
        if (j.contains("iterations"))
            grid.iterations = j.at("iterations").get<std::vector<int>>();
        if (j.contains("prunings")) {
            grid.prunings.clear();
            for (const auto &p : j.at("prunings"))
                grid.prunings.push_back(pruning_from_string(p.get<std::string>()));
        }
        if (j.contains("hashes")) {
            grid.hashes.clear();
            for (const auto &h : j.at("hashes"))
                grid.hashes.push_back(kernels::hash_from_string(h.get<std::string>()));
        }
        if (j.contains("reprs")) {
            grid.reprs.clear();
            for (const auto &r : j.at("reprs"))
                grid.reprs.push_back(repr_from_string(r.get<std::string>()));
        }
        if (j.contains("optimisers"))
            grid.optimisers = j.at("optimisers").get<std::vector<std::string>>();
        auto enumeration = harness::enumerate_grid(grid);
        configs = enumeration.accepted;
        for (const auto &[config, reason] : enumeration.rejected)
            std::cerr << "rejected " << config.id() << ": " << reason << "\n";
    }
    for (const auto &text : config_texts) {
        ModelConfig c = ModelConfig::parse(text);
        if (auto reason = harness::sweep_rejection(c))
            throw ValidationError("rejected " + c.id() + ": " + *reason);
        configs.push_back(std::move(c));
    }
    if (configs.empty())
        throw ValidationError("no configurations selected; pass --config or --grid/--full-grid");
    return configs;
}

int cmd_sweep(const std::string &manifest_path, const std::string &grid_file,
              const std::vector<std::string> &config_texts, bool full_grid, int jobs,
              const GlobalOptions &global) {
    harness::Manifest manifest = harness::Manifest::load(manifest_path);
    std::vector<ModelConfig> configs = configs_from_options(grid_file, config_texts, full_grid);

    harness::SweepOptions options;
    options.output_dir = global.output_dir;
    options.jobs = jobs;
    options.agile_timeout = std::max(manifest.budgets.plan_seconds, 1.5);
    harness::SweepOutcome outcome = harness::run_sweep(manifest, configs, options);
    std::cout << "sweep complete: " << outcome.configs_run << " configurations run, "
              << outcome.configs_resumed << " resumed, " << outcome.records.size()
              << " records in " << options.output_dir << "/results.jsonl\n";
    return 0;
}

int cmd_stats(const std::string &results_path, const GlobalOptions &global) {
    std::vector<harness::RunRecord> records = harness::load_records(results_path);
    if (records.empty())
        throw ValidationError("no records in " + results_path);
    harness::emit_report(records, global.output_dir);
    nlohmann::json correlations = harness::correlation_report(records);
    write_text(global.output_dir + "/correlations.json", correlations.dump(2) + "\n");
    std::cout << correlations.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Weisfeiler-Leman feature pipeline for learning to plan"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--timeout", global.timeout, "planning timeout in seconds");
    app.add_option("--memory-cap", global.memory_cap_mb, "memory cap in MiB");
    app.add_flag("--seed-free", global.seed_free,
                 "assert the run uses no randomness (always true: the pipeline has no RNG)");
    app.add_option("--output-dir", global.output_dir, "directory for generated reports");

    std::string domain_path, problem_path, repr = "cmpl", output, model_path;
    std::string manifest_path, config_text, grid_file, results_path, plan_path, stats_path;
    std::vector<std::string> config_texts;
    bool show_ground = false, zero_heuristic = false, full_grid = false;
    int jobs = 1;

    CLI::App *parse = app.add_subcommand("parse", "parse a domain and optional problem");
    parse->add_option("--domain", domain_path)->required();
    parse->add_option("--problem", problem_path);
    parse->add_flag("--ground", show_ground, "also count ground actions");

    CLI::App *graphify = app.add_subcommand("graphify", "export the initial state's graph");
    graphify->add_option("--domain", domain_path)->required();
    graphify->add_option("--problem", problem_path)->required();
    graphify->add_option("--repr", repr, "part or cmpl");
    graphify->add_option("--output", output);

    CLI::App *oracle = app.add_subcommand("oracle", "optimal plan and h* labels");
    oracle->add_option("--domain", domain_path)->required();
    oracle->add_option("--problem", problem_path)->required();
    oracle->add_option("--output", output);

    CLI::App *train = app.add_subcommand("train", "train a heuristic model");
    train->add_option("--manifest", manifest_path)->required();
    train->add_option("--config", config_text, "algorithm,L,pruning,hash,repr,optimiser")
        ->required();
    train->add_option("--output", output)->required();

    CLI::App *solve = app.add_subcommand("solve", "plan with a trained model");
    solve->add_option("--model", model_path);
    solve->add_option("--domain", domain_path)->required();
    solve->add_option("--problem", problem_path)->required();
    solve->add_option("--plan", plan_path, "write the plan here instead of stdout");
    solve->add_option("--stats", stats_path, "write search statistics here");
    solve->add_flag("--zero-heuristic", zero_heuristic, "use h=0 instead of a model");

    CLI::App *sweep = app.add_subcommand("sweep", "run configurations over a benchmark");
    sweep->add_option("--manifest", manifest_path)->required();
    sweep->add_option("--grid", grid_file, "JSON file restricting the option ranges");
    sweep->add_option("--config", config_texts, "explicit configuration strings");
    sweep->add_flag("--full-grid", full_grid, "run the full accepted grid");
    sweep->add_option("--jobs", jobs, "worker threads");

    CLI::App *stats = app.add_subcommand("stats", "aggregate results and correlations");
    stats->add_option("--results", results_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (global.seed_free)
            std::cerr << "seed-free: no random number generator is linked into this binary; "
                         "all pipeline stages are deterministic\n";
        if (parse->parsed())
            return cmd_parse(domain_path, problem_path, show_ground, global);
        if (graphify->parsed())
            return cmd_graphify(domain_path, problem_path, repr, output);
        if (oracle->parsed())
            return cmd_oracle(domain_path, problem_path, output, global);
        if (train->parsed())
            return cmd_train(manifest_path, config_text, output, global);
        if (solve->parsed()) {
            if (!zero_heuristic && model_path.empty())
                throw ValidationError("solve requires --model or --zero-heuristic");
            return cmd_solve(model_path, domain_path, problem_path, plan_path, stats_path,
                             zero_heuristic, global);
        }
        if (sweep->parsed())
            return cmd_sweep(manifest_path, grid_file, config_texts, full_grid, jobs, global);
        if (stats->parsed())
            return cmd_stats(results_path, global);
    } catch (const ResourceError &e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedRequirementError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const IoError &e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
