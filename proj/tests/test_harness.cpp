#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "leodtn/harness.hpp"

using namespace leodtn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    EXPECT_TRUE(in.good()) << path;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_dir(const std::string& name) {
    std::string d = ::testing::TempDir() + name;
    fs::remove_all(d);
    return d;
}

// small but real scenario: 24 nodes, 10-step episodes
RunConfig tiny_config(const std::string& outdir, int episodes) {
    return RunConfig::from_string(
        "env.steps_per_episode = 10\n"
        "train.episodes = " + std::to_string(episodes) + "\n"
        "train.checkpoint_interval = 2\n"
        "train.learning_rate = 1e-3\n"
        "run.output_dir = " + outdir + "\n"
        "run.seed = 5\n");
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
    RunConfig d = RunConfig::from_string("");
    EXPECT_EQ(d.scenario.num_planes, 3);
    EXPECT_EQ(d.scenario.sats_per_plane, 8);
    EXPECT_EQ(d.env.steps_per_episode, 200);
    EXPECT_DOUBLE_EQ(d.env.step_duration_s, 40.0);
    EXPECT_DOUBLE_EQ(d.env.rate_max_bps, 500.0);
    EXPECT_DOUBLE_EQ(d.env.penalty_a, 25.0);
    EXPECT_DOUBLE_EQ(d.env.penalty_b, 0.3);
    EXPECT_EQ(d.env.buffer_capacity_bits, 80000);
    EXPECT_DOUBLE_EQ(d.train.gamma, 0.99);
    EXPECT_EQ(d.train.n_steps, 5);
    EXPECT_EQ(d.train.episodes, 1000);
    EXPECT_EQ(d.checkpoint_interval, 5);
    EXPECT_EQ(d.evaluation_episodes, 100);
    EXPECT_DOUBLE_EQ(d.horizon_s(), 8000.0);

    RunConfig o = RunConfig::from_string("env.rate_max_bps = 256\ntraffic.ttl_s = 100 # comment\n");
    EXPECT_DOUBLE_EQ(o.env.rate_max_bps, 256.0);
    EXPECT_DOUBLE_EQ(o.traffic.ttl_s, 100.0);
}

TEST(Config, RejectsUnknownAndMalformed) {
    EXPECT_THROW(RunConfig::from_string("no.such.key = 1\n"), std::runtime_error);
    EXPECT_THROW(RunConfig::from_string("env.rate_max_bps = abc\n"), std::runtime_error);
    EXPECT_THROW(RunConfig::from_string("just a line without equals\n"), std::runtime_error);
    EXPECT_THROW(RunConfig::from_string("train.n_steps = 2.5\n"), std::runtime_error);
}

TEST(Config, EchoRoundTrips) {
    RunConfig a = RunConfig::from_string("run.seed = 99\nenv.penalty_b = 0.25\n");
    std::ostringstream os;
    a.echo(os);
    RunConfig b = RunConfig::from_string(os.str());
    EXPECT_EQ(b.seed, 99u);
    EXPECT_DOUBLE_EQ(b.env.penalty_b, 0.25);
    std::ostringstream os2;
    b.echo(os2);
    EXPECT_EQ(os.str(), os2.str());
}

TEST(Policy, ParseSpecifiers) {
    EXPECT_EQ(PolicySpec::parse("standard").kind, PolicySpec::Kind::standard);
    EXPECT_EQ(PolicySpec::parse("random").kind, PolicySpec::Kind::random);
    auto ck = PolicySpec::parse("checkpoint:/tmp/x.bin");
    EXPECT_EQ(ck.kind, PolicySpec::Kind::checkpoint);
    EXPECT_EQ(ck.path, "/tmp/x.bin");
    EXPECT_EQ(ck.short_name(), "a2c");
    EXPECT_THROW(PolicySpec::parse("greedy"), std::runtime_error);
    EXPECT_THROW(PolicySpec::parse("checkpoint:"), std::runtime_error);
}

TEST(Train, CheckpointCadenceAndCsvShape) {
    std::string dir = tmp_dir("train_cadence");
    RunConfig cfg = tiny_config(dir, 10);
    cfg.checkpoint_interval = 5;
    TrainResult res = train(cfg);

    // episodes=10, interval=5: exactly two periodic checkpoints plus the final
    ASSERT_EQ(res.checkpoints.size(), 2u);
    EXPECT_EQ(res.checkpoints[0].first, 5);
    EXPECT_EQ(res.checkpoints[1].first, 10);
    EXPECT_TRUE(fs::exists(dir + "/checkpoint_ep00005.bin"));
    EXPECT_TRUE(fs::exists(dir + "/checkpoint_ep00010.bin"));
    EXPECT_TRUE(fs::exists(dir + "/checkpoint_final.bin"));
    EXPECT_TRUE(fs::exists(dir + "/checkpoint_best.bin"));
    EXPECT_TRUE(fs::exists(dir + "/config.effective.conf"));

    std::string csv = slurp(dir + "/training.csv");
    int rows = 0;
    for (char c : csv) rows += c == '\n';
    EXPECT_EQ(rows, 11);  // header + one row per episode
    EXPECT_EQ(res.episodes.size(), 10u);
}

TEST(Train, ReproducibleByteIdenticalCsv) {
    std::string d1 = tmp_dir("train_det1"), d2 = tmp_dir("train_det2");
    train(tiny_config(d1, 6));
    train(tiny_config(d2, 6));
    EXPECT_EQ(slurp(d1 + "/training.csv"), slurp(d2 + "/training.csv"));
    EXPECT_EQ(slurp(d1 + "/checkpoint_final.bin"), slurp(d2 + "/checkpoint_final.bin"));
}

TEST(Train, WorkersChangeBatchingNotDeterminism) {
    std::string d1 = tmp_dir("train_w1"), d2 = tmp_dir("train_w2");
    RunConfig c1 = tiny_config(d1, 4);
    c1.workers = 2;
    RunConfig c2 = tiny_config(d2, 4);
    c2.workers = 2;
    train(c1);
    train(c2);
    EXPECT_EQ(slurp(d1 + "/training.csv"), slurp(d2 + "/training.csv"));
}

TEST(Evaluate, StandardPolicyHistogramIsAllNoOp) {
    std::string dir = tmp_dir("eval_standard");
    RunConfig cfg = tiny_config(dir, 2);
    EvalResult res = evaluate(cfg, PolicySpec{PolicySpec::Kind::standard, ""}, 5);
    for (const auto& m : res.episodes) {
        for (int i = 0; i < 5; ++i) EXPECT_EQ(m.action_hist[i], 0);
        EXPECT_EQ(m.action_hist[5], 10);  // ten steps of action #6
    }
    EXPECT_TRUE(fs::exists(res.csv_path));
}

TEST(Evaluate, ZeroEpisodesRejected) {
    RunConfig cfg = tiny_config(tmp_dir("eval_zero"), 2);
    EXPECT_THROW(evaluate(cfg, PolicySpec{PolicySpec::Kind::random, ""}, 0), std::runtime_error);
}

TEST(Evaluate, RandomActionSharesWithinThreeSigma) {
    RunConfig cfg = tiny_config(tmp_dir("eval_random"), 2);
    cfg.env.steps_per_episode = 20;
    EvalResult res = evaluate(cfg, PolicySpec{PolicySpec::Kind::random, ""}, 60);
    std::array<std::int64_t, 6> hist{};
    std::int64_t total = 0;
    for (const auto& m : res.episodes)
        for (int i = 0; i < 6; ++i) {
            hist[i] += m.action_hist[i];
            total += m.action_hist[i];
        }
    double p = 1.0 / 6.0;
    double sigma = std::sqrt(p * (1 - p) * static_cast<double>(total));
    for (int i = 0; i < 6; ++i)
        EXPECT_NEAR(static_cast<double>(hist[i]), p * static_cast<double>(total), 3.0 * sigma);
}

TEST(Evaluate, CheckpointReplayIsExact) {
    std::string dir = tmp_dir("eval_replay");
    RunConfig cfg = tiny_config(dir, 4);
    TrainResult tr = train(cfg);

    PolicySpec pol{PolicySpec::Kind::checkpoint, tr.best_checkpoint};
    EvalResult a = evaluate(cfg, pol, 4);
    std::string first = slurp(a.csv_path);
    EvalResult b = evaluate(cfg, pol, 4);
    EXPECT_EQ(first, slurp(b.csv_path));
    for (std::size_t i = 0; i < a.episodes.size(); ++i) {
        EXPECT_EQ(a.episodes[i].seed, b.episodes[i].seed);
        EXPECT_DOUBLE_EQ(a.episodes[i].cum_reward, b.episodes[i].cum_reward);
    }
}

TEST(Evaluate, CorruptCheckpointNamesField) {
    std::string dir = tmp_dir("eval_corrupt");
    fs::create_directories(dir);
    std::string bad = dir + "/bad.bin";
    std::ofstream(bad, std::ios::binary) << "XXXXXXXXcorrupt";
    RunConfig cfg = tiny_config(dir, 2);
    try {
        evaluate(cfg, PolicySpec{PolicySpec::Kind::checkpoint, bad}, 1);
        FAIL() << "expected checkpoint load error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("magic"), std::string::npos);
    }
}

TEST(Compare, SingleCsvNoOrderings) {
    std::string dir = tmp_dir("cmp_single");
    RunConfig cfg = tiny_config(dir, 2);
    EvalResult res = evaluate(cfg, PolicySpec{PolicySpec::Kind::standard, ""}, 3);
    CompareReport rep = compare({res.csv_path});
    ASSERT_EQ(rep.policies.size(), 1u);
    EXPECT_EQ(rep.policies[0].episodes, 3);
    EXPECT_TRUE(rep.orderings.empty());
}

TEST(Compare, IdenticalMetricsReportTies) {
    std::string dir = tmp_dir("cmp_ties");
    fs::create_directories(dir);
    auto write_csv = [&](const std::string& path, const std::string& policy) {
        std::ofstream f(path);
        f << kMetricsCsvHeader << '\n';
        EpisodeMetrics m;
        m.episode = 0;
        m.cum_reward = 10.0;
        m.delivery_rate_count = 0.9;
        m.cost_bits = 1000;
        m.maxu_mean = 0.1;
        write_metrics_row(f, m, policy);
    };
    write_csv(dir + "/a.csv", "checkpoint:x.bin");
    write_csv(dir + "/b.csv", "standard");
    write_csv(dir + "/c.csv", "random");
    CompareReport rep = compare({dir + "/a.csv", dir + "/b.csv", dir + "/c.csv"});
    ASSERT_EQ(rep.orderings.size(), 6u);
    for (const auto& c : rep.orderings) {
        if (c.description.rfind("delivery", 0) == 0)
            EXPECT_EQ(c.outcome, OrderingCheck::Outcome::pass);  // >= holds on a tie
        else
            EXPECT_EQ(c.outcome, OrderingCheck::Outcome::tie);
    }

    std::ostringstream os;
    print_compare(rep, os);
    EXPECT_NE(os.str().find("TIE"), std::string::npos);
}

TEST(Compare, MissingColumnFails) {
    std::string dir = tmp_dir("cmp_badfile");
    fs::create_directories(dir);
    std::ofstream(dir + "/bad.csv") << "episode,foo\n1,2\n";
    EXPECT_THROW(compare({dir + "/bad.csv"}), std::runtime_error);
}

TEST(ContactPlanFile, RoundTripThroughConfig) {
    std::string dir = tmp_dir("planfile");
    fs::create_directories(dir);
    RunConfig cfg = tiny_config(dir, 2);
    ContactPlan generated = build_contact_plan(cfg);
    std::string plan_path = dir + "/plan.txt";
    save_contact_plan(generated, plan_path);

    RunConfig cfg2 = tiny_config(dir, 2);
    cfg2.contact_plan_file = plan_path;
    ContactPlan loaded = build_contact_plan(cfg2);
    EXPECT_EQ(loaded.contacts.size(), generated.contacts.size());
    EXPECT_EQ(loaded.num_nodes, generated.num_nodes);
}
