#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "leodtn/agent.hpp"
#include "leodtn/config.hpp"

namespace leodtn {

struct EpisodeMetrics {
    int episode = 0;
    std::uint64_t seed = 0;
    double cum_reward = 0.0;
    double delivery_rate_count = 0.0;
    double delivery_rate_bits = 0.0;
    std::int64_t generated_count = 0;
    std::int64_t delivered_count = 0;
    std::int64_t cost_bits = 0;
    double maxu_mean = 0.0;
    double maxu_max = 0.0;
    std::array<std::int64_t, kNumActions> action_hist{};

    // timing; kept out of the deterministic CSVs and written to *_timing.csv
    double wall_seconds = 0.0;
    double infer_median_ms = 0.0;
    double infer_p99_ms = 0.0;
};

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline const char* kMetricsCsvHeader =
    "episode,seed,cum_reward,delivery_rate_count,delivery_rate_bits,generated,delivered,"
    "cost_bits,maxu_mean,maxu_max,act1,act2,act3,act4,act5,act6,policy";

inline void write_metrics_row(std::ostream& os, const EpisodeMetrics& m, const std::string& policy) {
    os << m.episode << ',' << m.seed << ',' << fmt_double(m.cum_reward) << ','
       << fmt_double(m.delivery_rate_count) << ',' << fmt_double(m.delivery_rate_bits) << ','
       << m.generated_count << ',' << m.delivered_count << ',' << m.cost_bits << ','
       << fmt_double(m.maxu_mean) << ',' << fmt_double(m.maxu_max);
    for (std::int64_t a : m.action_hist) os << ',' << a;
    os << ',' << policy << '\n';
}

struct PolicySpec {
    enum class Kind { checkpoint, standard, random } kind = Kind::standard;
    std::string path;

    static PolicySpec parse(const std::string& s) {
        if (s == "standard") return {Kind::standard, ""};
        if (s == "random") return {Kind::random, ""};
        if (s.rfind("checkpoint:", 0) == 0) {
            PolicySpec p{Kind::checkpoint, s.substr(11)};
            if (p.path.empty()) throw std::runtime_error("policy: empty checkpoint path");
            return p;
        }
        throw std::runtime_error("policy: expected checkpoint:PATH, standard, or random (got '" + s + "')");
    }

    std::string label() const {
        switch (kind) {
            case Kind::standard: return "standard";
            case Kind::random: return "random";
            default: return "checkpoint:" + path;
        }
    }
    std::string short_name() const {
        switch (kind) {
            case Kind::standard: return "standard";
            case Kind::random: return "random";
            default: return "a2c";
        }
    }
};

inline ContactPlan build_contact_plan(const RunConfig& cfg) {
    if (!cfg.contact_plan_file.empty())
        return load_contact_plan(cfg.contact_plan_file, 0.0, cfg.horizon_s(), cfg.env.rate_max_bps);
    VisibilityParams vis = cfg.vis;
    vis.nominal_rate_bps = cfg.env.rate_max_bps;
    return generate_contact_plan(cfg.scenario, 0.0, cfg.horizon_s(), vis);
}

inline DtnEnv make_env(const RunConfig& cfg, const ContactPlan& plan, bool force_max_rates) {
    EnvConfig ec = cfg.env;
    ec.force_max_rates_on_reset = force_max_rates;
    return DtnEnv(plan, cfg.scenario.total_sats(), ec, cfg.traffic);
}

namespace detail {

constexpr std::uint64_t kTrainSeedTag = 0x7e41;
constexpr std::uint64_t kEvalSeedTag = 0xe7a1;
constexpr std::uint64_t kActionSeedTag = 0xac70;

inline double percentile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
    idx = std::min(idx, v.size() - 1);
    return v[static_cast<std::size_t>(std::max<std::int64_t>(0, static_cast<std::int64_t>(idx)))];
}

inline void finalize_episode(EpisodeMetrics& m, const DtnEnv& env, const std::vector<double>& maxus,
                             const std::vector<double>& latencies_ms) {
    auto audit = env.engine().audit();
    m.generated_count = audit.generated.count;
    m.delivered_count = audit.delivered.count;
    m.delivery_rate_count = audit.generated.count > 0
                                ? static_cast<double>(audit.delivered.count) /
                                      static_cast<double>(audit.generated.count)
                                : 0.0;
    m.delivery_rate_bits = audit.generated.bits > 0
                               ? static_cast<double>(audit.delivered.bits) /
                                     static_cast<double>(audit.generated.bits)
                               : 0.0;
    m.cost_bits = audit.cost_bits;
    if (!maxus.empty()) {
        m.maxu_mean = std::accumulate(maxus.begin(), maxus.end(), 0.0) /
                      static_cast<double>(maxus.size());
        m.maxu_max = *std::max_element(maxus.begin(), maxus.end());
    }
    m.infer_median_ms = percentile(latencies_ms, 0.5);
    m.infer_p99_ms = percentile(latencies_ms, 0.99);
}

}  // namespace detail

/// Run one episode under `act`; the act callback is timed per step.
template <typename ActFn>
EpisodeMetrics run_episode(DtnEnv& env, int episode_index, std::uint64_t ep_seed, ActFn&& act) {
    using clock = std::chrono::steady_clock;
    auto wall0 = clock::now();

    EpisodeMetrics m;
    m.episode = episode_index;
    m.seed = ep_seed;
    std::vector<double> maxus, latencies_ms;
    maxus.reserve(env.config().steps_per_episode);

    Observation obs = env.reset(ep_seed);
    bool done = false;
    while (!done) {
        auto t0 = clock::now();
        Action a = act(obs);
        latencies_ms.push_back(std::chrono::duration<double, std::milli>(clock::now() - t0).count());
        StepResult r = env.step(a);
        m.cum_reward += r.reward;
        ++m.action_hist[static_cast<int>(a) - 1];
        maxus.push_back(r.info.max_utilization());
        obs = std::move(r.obs);
        done = r.done;
    }
    detail::finalize_episode(m, env, maxus, latencies_ms);
    m.wall_seconds = std::chrono::duration<double>(clock::now() - wall0).count();
    return m;
}

// ---- training --------------------------------------------------------------

struct TrainResult {
    std::vector<EpisodeMetrics> episodes;
    std::vector<std::pair<int, std::string>> checkpoints;  // (episode, file)
    std::string best_checkpoint;
    int best_episode = 0;
    double best_score = 0.0;
    std::string training_csv;
};

/// Train for cfg.train.episodes episodes, checkpointing every
/// cfg.checkpoint_interval, appending one row per episode to training.csv.
/// With workers > 1, that many environments run in lockstep and their
/// rollouts are concatenated before each update.
inline TrainResult train(const RunConfig& cfg, std::ostream* log = nullptr) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    {
        std::ofstream echo(cfg.output_dir + "/config.effective.conf");
        if (!echo) throw std::runtime_error("train: output directory not writable: " + cfg.output_dir);
        cfg.echo(echo);
    }

    const ContactPlan plan = build_contact_plan(cfg);
    const int num_nodes = cfg.scenario.total_sats();
    const int obs_dim = 2 * num_nodes + 2;
    NetDims dims{obs_dim, 64, 64, kNumActions};
    A2CLearner learner(dims, cfg.train, cfg.seed);

    const int total_episodes = cfg.train.episodes;
    const int workers = cfg.workers;
    std::vector<std::unique_ptr<DtnEnv>> envs;
    for (int w = 0; w < workers; ++w)
        envs.push_back(std::make_unique<DtnEnv>(make_env(cfg, plan, false)));

    TrainResult result;
    result.training_csv = cfg.output_dir + "/training.csv";
    std::ofstream csv(result.training_csv);
    std::ofstream timing(cfg.output_dir + "/training_timing.csv");
    csv << kMetricsCsvHeader << '\n';
    timing << "episode,wall_seconds,infer_median_ms,infer_p99_ms\n";

    std::vector<double> episode_rewards;
    auto checkpoint_score = [&](int episode) {
        int lo = std::max(0, episode - cfg.selection_window);
        if (episode == lo) return 0.0;
        double sum = 0.0;
        for (int i = lo; i < episode; ++i) sum += episode_rewards[i];
        return sum / static_cast<double>(episode - lo);
    };
    auto save_at = [&](const std::string& file, int episode) {
        CheckpointData ck{dims, cfg.seed, static_cast<std::uint64_t>(episode),
                          learner.net().parameters(), learner.optimizer_state()};
        save_checkpoint(file, ck);
    };

    using clock = std::chrono::steady_clock;

    struct EpRun {
        EpisodeMetrics m;
        std::vector<double> norm_obs;
        std::vector<double> maxus;
        std::vector<double> latencies_ms;
        Rollout rollout;
        RngStream act_rng{0};
        clock::time_point wall0;
        bool done = false;
    };

    for (int base = 0; base < total_episodes; base += workers) {
        const int active = std::min(workers, total_episodes - base);
        std::vector<EpRun> runs(active);
        for (int w = 0; w < active; ++w) {
            int ep = base + w;
            std::uint64_t ep_seed =
                RngStream::derive(cfg.seed, {detail::kTrainSeedTag, static_cast<std::uint64_t>(ep)})
                    .next_u64();
            runs[w].m.episode = ep;
            runs[w].m.seed = ep_seed;
            runs[w].act_rng = RngStream::derive(ep_seed, {detail::kActionSeedTag});
            runs[w].wall0 = clock::now();
            Observation obs = envs[w]->reset(ep_seed);
            runs[w].norm_obs = normalize_observation(obs, cfg.env.rate_max_bps, cfg.traffic.ttl_s);
        }

        const int steps = cfg.env.steps_per_episode;
        for (int step = 0; step < steps; ++step) {
            for (int w = 0; w < active; ++w) {
                EpRun& r = runs[w];
                auto t0 = clock::now();
                auto out = learner.forward(r.norm_obs);
                int ai = select_action_index(out.probs, SelectMode::sample, r.act_rng);
                r.latencies_ms.push_back(
                    std::chrono::duration<double, std::milli>(clock::now() - t0).count());

                StepResult sr = envs[w]->step(action_from_index(ai));
                r.m.cum_reward += sr.reward;
                ++r.m.action_hist[ai];
                r.maxus.push_back(sr.info.max_utilization());

                Transition tr;
                tr.obs = std::move(r.norm_obs);
                tr.action_index = ai;
                tr.reward = sr.reward;
                tr.done = sr.done;
                tr.value = out.value;
                r.rollout.transitions.push_back(std::move(tr));
                r.norm_obs =
                    normalize_observation(sr.obs, cfg.env.rate_max_bps, cfg.traffic.ttl_s);
                r.done = sr.done;
            }

            if ((step + 1) % cfg.train.n_steps == 0 || step == steps - 1) {
                std::vector<PolicyValueNet::Sample> batch;
                for (int w = 0; w < active; ++w) {
                    EpRun& r = runs[w];
                    if (r.rollout.transitions.empty()) continue;
                    r.rollout.bootstrap_value = r.done ? 0.0 : learner.forward(r.norm_obs).value;
                    auto ra = compute_returns(r.rollout, cfg.train.gamma);
                    for (std::size_t i = 0; i < r.rollout.transitions.size(); ++i) {
                        PolicyValueNet::Sample s;
                        s.obs = std::move(r.rollout.transitions[i].obs);
                        s.action = r.rollout.transitions[i].action_index;
                        s.ret = ra.returns[i];
                        s.advantage = ra.advantages[i];
                        batch.push_back(std::move(s));
                    }
                    r.rollout.transitions.clear();
                }
                try {
                    learner.update_batch(batch);
                } catch (const std::exception& e) {
                    std::ofstream dump(cfg.output_dir + "/diagnostics.txt");
                    dump << "aborted at episode " << base << " step " << step << ": " << e.what()
                         << "\n";
                    throw;
                }
            }
        }

        for (int w = 0; w < active; ++w) {
            EpRun& r = runs[w];
            detail::finalize_episode(r.m, *envs[w], r.maxus, r.latencies_ms);
            r.m.wall_seconds = std::chrono::duration<double>(clock::now() - r.wall0).count();
            episode_rewards.push_back(r.m.cum_reward);
            write_metrics_row(csv, r.m, "train");
            timing << r.m.episode << ',' << fmt_double(r.m.wall_seconds) << ','
                   << fmt_double(r.m.infer_median_ms) << ',' << fmt_double(r.m.infer_p99_ms) << '\n';
            result.episodes.push_back(r.m);

            int completed = r.m.episode + 1;
            if (completed % cfg.checkpoint_interval == 0) {
                char name[64];
                std::snprintf(name, sizeof(name), "/checkpoint_ep%05d.bin", completed);
                std::string file = cfg.output_dir + name;
                save_at(file, completed);
                result.checkpoints.emplace_back(completed, file);
            }
            if (log && (completed % 50 == 0 || completed == total_episodes))
                *log << "episode " << completed << "/" << total_episodes
                     << " reward=" << fmt_double(r.m.cum_reward) << "\n";
        }
    }

    std::string final_file = cfg.output_dir + "/checkpoint_final.bin";
    save_at(final_file, total_episodes);

    // pick the checkpoint with the best trailing-window training reward
    std::ofstream index(cfg.output_dir + "/checkpoint_index.csv");
    index << "episode,file,trailing_mean_reward,selected\n";
    double best = -std::numeric_limits<double>::infinity();
    int best_ep = total_episodes;
    std::string best_file = final_file;
    std::vector<std::pair<int, std::string>> all = result.checkpoints;
    all.emplace_back(total_episodes, final_file);
    for (const auto& [ep, file] : all) {
        double score = checkpoint_score(ep);
        if (score >= best) {
            best = score;
            best_ep = ep;
            best_file = file;
        }
    }
    for (const auto& [ep, file] : all)
        index << ep << ',' << file << ',' << fmt_double(checkpoint_score(ep)) << ','
              << (file == best_file ? 1 : 0) << '\n';

    result.best_checkpoint = cfg.output_dir + "/checkpoint_best.bin";
    result.best_episode = best_ep;
    result.best_score = best;
    std::filesystem::copy_file(best_file, result.best_checkpoint,
                               std::filesystem::copy_options::overwrite_existing);
    return result;
}

// ---- evaluation ------------------------------------------------------------

struct EvalResult {
    std::vector<EpisodeMetrics> episodes;
    std::string csv_path;
    std::string policy_label;
    double mean_reward = 0.0, std_reward = 0.0;
    double mean_delivery = 0.0, std_delivery = 0.0;
    double mean_cost = 0.0, std_cost = 0.0;
    double mean_maxu = 0.0, std_maxu = 0.0;
    double median_latency_ms = 0.0;
};

inline std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double sq = 0.0;
    for (double x : v) sq += (x - mean) * (x - mean);
    return {mean, std::sqrt(sq / static_cast<double>(v.size() - 1))};
}

/// Fresh-seeded episodes with greedy (checkpoint) or baseline action
/// selection; one CSV row per episode plus mean/std summary comment lines.
inline EvalResult evaluate(const RunConfig& cfg, const PolicySpec& policy, int episodes,
                           std::ostream* log = nullptr) {
    if (episodes < 1) throw std::runtime_error("evaluate: episodes must be >= 1");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);

    const ContactPlan plan = build_contact_plan(cfg);
    DtnEnv env = make_env(cfg, plan, policy.kind == PolicySpec::Kind::standard);

    std::optional<PolicyValueNet> net;
    if (policy.kind == PolicySpec::Kind::checkpoint) {
        CheckpointData ck = load_checkpoint(policy.path);
        if (ck.dims.input != 2 * cfg.scenario.total_sats() + 2)
            throw std::runtime_error("evaluate: checkpoint input dimension " +
                                     std::to_string(ck.dims.input) + " does not match scenario");
        net.emplace(ck.dims);
        net->parameters() = ck.params;
    }

    EvalResult result;
    result.policy_label = policy.label();
    result.csv_path = cfg.output_dir + "/evaluation_" + policy.short_name() + ".csv";
    std::ofstream csv(result.csv_path);
    std::ofstream timing(cfg.output_dir + "/evaluation_" + policy.short_name() + "_timing.csv");
    csv << kMetricsCsvHeader << '\n';
    timing << "episode,wall_seconds,infer_median_ms,infer_p99_ms\n";

    std::vector<double> rewards, deliveries, costs, maxus, med_lat;
    for (int i = 0; i < episodes; ++i) {
        std::uint64_t ep_seed =
            RngStream::derive(cfg.seed, {detail::kEvalSeedTag, static_cast<std::uint64_t>(i)})
                .next_u64();
        RngStream act_rng = RngStream::derive(ep_seed, {detail::kActionSeedTag});

        EpisodeMetrics m = run_episode(env, i, ep_seed, [&](const Observation& obs) -> Action {
            switch (policy.kind) {
                case PolicySpec::Kind::standard:
                    return standard_policy();
                case PolicySpec::Kind::random:
                    return random_policy(act_rng);
                default: {
                    auto x = normalize_observation(obs, cfg.env.rate_max_bps, cfg.traffic.ttl_s);
                    auto out = net->forward(x);
                    return action_from_index(
                        select_action_index(out.probs, SelectMode::greedy, act_rng));
                }
            }
        });
        write_metrics_row(csv, m, result.policy_label);
        timing << m.episode << ',' << fmt_double(m.wall_seconds) << ','
               << fmt_double(m.infer_median_ms) << ',' << fmt_double(m.infer_p99_ms) << '\n';
        rewards.push_back(m.cum_reward);
        deliveries.push_back(m.delivery_rate_count);
        costs.push_back(static_cast<double>(m.cost_bits));
        maxus.push_back(m.maxu_mean);
        med_lat.push_back(m.infer_median_ms);
        result.episodes.push_back(std::move(m));
        if (log && (i + 1) % 25 == 0) *log << "evaluated " << (i + 1) << "/" << episodes << "\n";
    }

    std::tie(result.mean_reward, result.std_reward) = mean_std(rewards);
    std::tie(result.mean_delivery, result.std_delivery) = mean_std(deliveries);
    std::tie(result.mean_cost, result.std_cost) = mean_std(costs);
    std::tie(result.mean_maxu, result.std_maxu) = mean_std(maxus);
    result.median_latency_ms = detail::percentile(med_lat, 0.5);

    csv << "# mean," << fmt_double(result.mean_reward) << ',' << fmt_double(result.mean_delivery)
        << ',' << fmt_double(result.mean_cost) << ',' << fmt_double(result.mean_maxu) << '\n';
    csv << "# std," << fmt_double(result.std_reward) << ',' << fmt_double(result.std_delivery)
        << ',' << fmt_double(result.std_cost) << ',' << fmt_double(result.std_maxu) << '\n';
    return result;
}

// ---- comparison ------------------------------------------------------------

struct PolicyStats {
    std::string label;
    std::string short_name;
    int episodes = 0;
    double mean_reward = 0, std_reward = 0;
    double mean_delivery = 0, std_delivery = 0;
    double mean_cost = 0, std_cost = 0;
    double mean_maxu = 0, std_maxu = 0;
};

struct OrderingCheck {
    std::string description;
    bool hard = true;
    enum class Outcome { pass, fail, tie, skipped } outcome = Outcome::skipped;
    double margin = 0.0;
};

struct CompareReport {
    std::vector<PolicyStats> policies;
    std::vector<OrderingCheck> orderings;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline PolicyStats read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("compare: cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("compare: empty file " + path);
    auto cols = split_csv_line(header);
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return static_cast<int>(i);
        throw std::runtime_error("compare: column '" + name + "' missing in " + path);
    };
    int c_reward = col("cum_reward"), c_del = col("delivery_rate_count"), c_cost = col("cost_bits"),
        c_maxu = col("maxu_mean"), c_policy = col("policy");

    std::vector<double> rewards, dels, costs, maxus;
    std::string policy_label;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto f = split_csv_line(line);
        rewards.push_back(std::stod(f[c_reward]));
        dels.push_back(std::stod(f[c_del]));
        costs.push_back(std::stod(f[c_cost]));
        maxus.push_back(std::stod(f[c_maxu]));
        policy_label = f[c_policy];
    }
    if (rewards.empty()) throw std::runtime_error("compare: no rows in " + path);

    PolicyStats st;
    st.label = policy_label;
    st.short_name = policy_label.rfind("checkpoint", 0) == 0 ? "a2c" : policy_label;
    st.episodes = static_cast<int>(rewards.size());
    std::tie(st.mean_reward, st.std_reward) = mean_std(rewards);
    std::tie(st.mean_delivery, st.std_delivery) = mean_std(dels);
    std::tie(st.mean_cost, st.std_cost) = mean_std(costs);
    std::tie(st.mean_maxu, st.std_maxu) = mean_std(maxus);
    return st;
}

inline CompareReport compare(const std::vector<std::string>& csv_paths) {
    CompareReport rep;
    for (const auto& p : csv_paths) rep.policies.push_back(read_metrics_csv(p));

    auto find = [&](const std::string& name) -> const PolicyStats* {
        for (const auto& st : rep.policies)
            if (st.short_name == name) return &st;
        return nullptr;
    };
    const PolicyStats* a2c = find("a2c");
    const PolicyStats* rnd = find("random");
    const PolicyStats* std_ = find("standard");

    auto check = [&](const std::string& desc, bool hard, const PolicyStats* lhs,
                     const PolicyStats* rhs, double l, double r, bool lhs_greater,
                     bool tie_passes = false) {
        OrderingCheck c{desc, hard};
        if (lhs && rhs) {
            double diff = lhs_greater ? l - r : r - l;
            c.margin = diff;
            c.outcome = diff > 0   ? OrderingCheck::Outcome::pass
                        : diff < 0 ? OrderingCheck::Outcome::fail
                        : tie_passes ? OrderingCheck::Outcome::pass
                                     : OrderingCheck::Outcome::tie;
        }
        rep.orderings.push_back(c);
    };
    if (rep.policies.size() >= 2) {
        check("reward: a2c > random", true, a2c, rnd, a2c ? a2c->mean_reward : 0,
              rnd ? rnd->mean_reward : 0, true);
        check("reward: a2c > standard", true, a2c, std_, a2c ? a2c->mean_reward : 0,
              std_ ? std_->mean_reward : 0, true);
        check("max utilization: a2c < random", true, a2c, rnd, a2c ? a2c->mean_maxu : 0,
              rnd ? rnd->mean_maxu : 0, false);
        check("max utilization: a2c < standard", true, a2c, std_, a2c ? a2c->mean_maxu : 0,
              std_ ? std_->mean_maxu : 0, false);
        check("delivery rate: standard >= a2c", false, std_, a2c, std_ ? std_->mean_delivery : 0,
              a2c ? a2c->mean_delivery : 0, true, true);
        check("cost: a2c < standard", false, a2c, std_, a2c ? a2c->mean_cost : 0,
              std_ ? std_->mean_cost : 0, false);
    }
    return rep;
}

inline void print_compare(const CompareReport& rep, std::ostream& os) {
    os << "policy      episodes       reward          delivery          cost              max-U\n";
    for (const auto& st : rep.policies) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-10s  %8d  %10.4f±%-8.4f %8.4f±%-8.4f %12.0f±%-10.0f %8.4f±%-8.4f\n",
                      st.short_name.c_str(), st.episodes, st.mean_reward, st.std_reward,
                      st.mean_delivery, st.std_delivery, st.mean_cost, st.std_cost, st.mean_maxu,
                      st.std_maxu);
        os << line;
    }
    for (const auto& c : rep.orderings) {
        const char* outcome = c.outcome == OrderingCheck::Outcome::pass   ? "PASS"
                              : c.outcome == OrderingCheck::Outcome::fail ? "FAIL"
                              : c.outcome == OrderingCheck::Outcome::tie  ? "TIE"
                                                                          : "SKIPPED";
        os << (c.hard ? "[hard] " : "[soft] ") << c.description << ": " << outcome;
        if (c.outcome == OrderingCheck::Outcome::pass || c.outcome == OrderingCheck::Outcome::fail)
            os << " (margin " << fmt_double(c.margin) << ")";
        os << "\n";
    }
}

}  // namespace leodtn
