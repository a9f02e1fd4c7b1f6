// Command-line front end: contact plan generation, training, evaluation,
// and policy comparison over CSV outputs.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leodtn/harness.hpp"

using namespace leodtn;

namespace {

RunConfig load_run_config(const std::string& path, std::int64_t seed_override) {
    RunConfig cfg = RunConfig::from_file(path);
    if (seed_override >= 0) {
        cfg.seed = static_cast<std::uint64_t>(seed_override);
        cfg.set("run.seed", std::to_string(seed_override));
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LEO DTN constellation simulator with an A2C buffer-management agent"};
    app.require_subcommand(1);

    std::string config_path, out_path, policy_str, output_dir;
    std::int64_t seed_override = -1;
    int episodes = -1;  // -1: take the config value
    std::vector<std::string> csvs;

    auto* gen = app.add_subcommand("generate-contacts", "Write the scenario's contact plan file");
    gen->add_option("config", config_path, "run config file")->required();
    gen->add_option("out", out_path, "output contact plan path")->required();
    gen->add_option("--seed", seed_override, "override run.seed");

    auto* tr = app.add_subcommand("train", "Train the A2C agent");
    tr->add_option("config", config_path, "run config file")->required();
    tr->add_option("--seed", seed_override, "override run.seed");
    tr->add_option("--output", output_dir, "override run.output_dir");
    tr->add_option("--episodes", episodes, "override train.episodes");

    auto* ev = app.add_subcommand("evaluate", "Evaluate a policy over fresh episodes");
    ev->add_option("config", config_path, "run config file")->required();
    ev->add_option("--policy", policy_str, "checkpoint:PATH | standard | random")->required();
    ev->add_option("--episodes", episodes, "number of evaluation episodes");
    ev->add_option("--seed", seed_override, "override run.seed");
    ev->add_option("--output", output_dir, "override run.output_dir");

    auto* cmp = app.add_subcommand("compare", "Compare evaluation CSVs");
    cmp->add_option("csvs", csvs, "evaluation CSV files")->required()->expected(-1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            RunConfig cfg = load_run_config(config_path, seed_override);
            ContactPlan plan = build_contact_plan(cfg);
            save_contact_plan(plan, out_path);
            std::cout << "wrote " << plan.contacts.size() << " contacts to " << out_path << "\n";
        } else if (tr->parsed()) {
            RunConfig cfg = load_run_config(config_path, seed_override);
            if (!output_dir.empty()) {
                cfg.output_dir = output_dir;
                cfg.set("run.output_dir", output_dir);
            }
            if (episodes >= 0) {
                cfg.train.episodes = episodes;
                cfg.set("train.episodes", std::to_string(episodes));
            }
            TrainResult res = train(cfg, &std::cout);
            std::cout << "training done: " << res.episodes.size() << " episodes, best checkpoint "
                      << res.best_checkpoint << " (episode " << res.best_episode << ", trailing mean "
                      << fmt_double(res.best_score) << ")\n";
        } else if (ev->parsed()) {
            RunConfig cfg = load_run_config(config_path, seed_override);
            if (!output_dir.empty()) {
                cfg.output_dir = output_dir;
                cfg.set("run.output_dir", output_dir);
            }
            int n = episodes >= 0 ? episodes : cfg.evaluation_episodes;
            EvalResult res = evaluate(cfg, PolicySpec::parse(policy_str), n, &std::cout);
            std::cout << "policy " << res.policy_label << ": reward " << fmt_double(res.mean_reward)
                      << " ± " << fmt_double(res.std_reward) << ", delivery "
                      << fmt_double(res.mean_delivery) << ", cost " << fmt_double(res.mean_cost)
                      << ", max-U " << fmt_double(res.mean_maxu) << ", median inference "
                      << fmt_double(res.median_latency_ms) << " ms\n"
                      << "rows written to " << res.csv_path << "\n";
        } else if (cmp->parsed()) {
            CompareReport rep = compare(csvs);
            print_compare(rep, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
