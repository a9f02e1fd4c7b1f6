#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "leodtn/engine.hpp"
#include "leodtn/rng.hpp"

namespace leodtn {

/// The six global control actions.
enum class Action : int {
    double_rate = 1,      // every rate := min(2 R, rate_max)
    halve_rate = 2,       // every rate := max(R / 2, rate_min)
    drop_low = 3,
    drop_low_medium = 4,
    drop_all = 5,
    no_op = 6,
};

constexpr int kNumActions = 6;

inline Action action_from_index(int idx) {  // 0-based index -> action id
    if (idx < 0 || idx >= kNumActions) throw std::invalid_argument("action index out of range");
    return static_cast<Action>(idx + 1);
}

/// Network state as seen by the controller, flattened to
/// [O_C, R_1..R_N, D_A, U_1..U_N] (length 2N + 2; 50 for the 24-node scenario).
struct Observation {
    double link_occupancy = 0.0;        // O_C
    std::vector<double> rates;          // R_i, bits/s
    double mean_delay = 0.0;            // D_A, seconds
    std::vector<double> utilizations;   // U_i

    std::vector<double> flatten() const {
        std::vector<double> v;
        v.reserve(2 + rates.size() + utilizations.size());
        v.push_back(link_occupancy);
        v.insert(v.end(), rates.begin(), rates.end());
        v.push_back(mean_delay);
        v.insert(v.end(), utilizations.begin(), utilizations.end());
        return v;
    }
    std::size_t size() const { return 2 + rates.size() + utilizations.size(); }
};

struct EnvConfig {
    int steps_per_episode = 200;
    double step_duration_s = 40.0;
    double rate_max_bps = 500.0;
    double rate_min_bps = 500.0 / 64.0;  // bottom of the dyadic ladder {max / 2^k, k=0..6}
    double penalty_a = 25.0;
    double penalty_b = 0.3;
    std::int64_t buffer_capacity_bits = 80000;
    bool force_max_rates_on_reset = false;  // used by the standard baseline

    // rungs of {rate_max / 2^k} that stay at or above rate_min
    int ladder_rungs() const {
        int k = 0;
        while (rate_max_bps / std::pow(2.0, k + 1) >= rate_min_bps - 1e-12) ++k;
        return k + 1;
    }
};

inline double penalty_factor(double max_utilization, double a, double b) {
    return 1.0 / (1.0 + std::exp(-a * (b - max_utilization)));
}

struct StepResult {
    Observation obs;
    double reward = 0.0;
    bool done = false;
    StepMetrics info;
};

/// RL environment wrapping the DTN engine: observation assembly, the
/// six-action control surface, reward, and the 200-step episode lifecycle.
class DtnEnv {
public:
    DtnEnv(ContactPlan plan, int num_nodes, EnvConfig cfg, TrafficConfig traffic)
        : cfg_(cfg),
          engine_(std::move(plan),
                  EngineConfig{num_nodes, cfg.buffer_capacity_bits, cfg.rate_min_bps,
                               cfg.rate_max_bps, std::move(traffic), true}) {
        if (cfg_.steps_per_episode <= 0 || cfg_.step_duration_s <= 0.0)
            throw std::invalid_argument("env: episode shape must be positive");
        if (cfg_.penalty_b <= 0.0 || cfg_.penalty_b >= 1.0)
            throw std::invalid_argument("env: penalty_b must lie in (0,1)");
    }

    /// Clears the network, randomizes every node's rate over the dyadic
    /// ladder, redraws traffic phases, and returns the initial observation.
    Observation reset(std::uint64_t seed) {
        seed_ = seed;
        steps_taken_ = 0;
        done_ = false;

        const int n = engine_.num_nodes();
        std::vector<double> rates(n, cfg_.rate_max_bps);
        if (!cfg_.force_max_rates_on_reset) {
            const int rungs = cfg_.ladder_rungs();
            for (int i = 0; i < n; ++i) {
                int k = RngStream::derive(seed, {0x7a7eu, static_cast<std::uint64_t>(i)})
                            .uniform_int(0, rungs - 1);
                rates[i] = cfg_.rate_max_bps / std::pow(2.0, k);
            }
        }
        engine_.reset(seed, 0, rates);

        Observation obs;
        obs.link_occupancy = 0.0;
        obs.mean_delay = 0.0;
        obs.rates = std::vector<double>(engine_.rates().begin(), engine_.rates().end());
        obs.utilizations.assign(n, 0.0);
        return obs;
    }

    void apply_action(Action a) {
        const int n = engine_.num_nodes();
        switch (a) {
            case Action::double_rate:
                for (int i = 0; i < n; ++i)
                    engine_.set_rate(i, std::min(2.0 * engine_.rates()[i], cfg_.rate_max_bps));
                break;
            case Action::halve_rate:
                for (int i = 0; i < n; ++i)
                    engine_.set_rate(i, std::max(engine_.rates()[i] / 2.0, cfg_.rate_min_bps));
                break;
            case Action::drop_low:
                for (int i = 0; i < n; ++i) engine_.drop_by_priority(i, 0b001);
                break;
            case Action::drop_low_medium:
                for (int i = 0; i < n; ++i) engine_.drop_by_priority(i, 0b011);
                break;
            case Action::drop_all:
                for (int i = 0; i < n; ++i) engine_.drop_by_priority(i, 0b111);
                break;
            case Action::no_op:
                break;
            default:
                throw std::invalid_argument("apply_action: invalid action id");
        }
    }

    Observation observe(const StepMetrics& m) const {
        Observation obs;
        if (m.total_link_capacity > 0.0) {
            double oc = static_cast<double>(m.cost_bits) / m.total_link_capacity;
            obs.link_occupancy = std::clamp(oc, 0.0, 1.0);
        }
        obs.rates = std::vector<double>(engine_.rates().begin(), engine_.rates().end());
        obs.mean_delay = m.mean_delivery_delay;
        obs.utilizations = m.node_utilization;
        return obs;
    }

    /// R = f(max U) * delivered / cost, zero when nothing was transmitted.
    double compute_reward(const StepMetrics& m) const {
        if (m.cost_bits <= 0) return 0.0;
        double f = penalty_factor(m.max_utilization(), cfg_.penalty_a, cfg_.penalty_b);
        return f * static_cast<double>(m.delivered_bits) / static_cast<double>(m.cost_bits);
    }

    StepResult step(Action a) {
        if (done_) throw std::logic_error("step: episode is over, call reset");
        apply_action(a);  // drops take effect before the step advances
        StepResult r;
        r.info = engine_.step_simulation(cfg_.step_duration_s);
        r.obs = observe(r.info);
        r.reward = compute_reward(r.info);
        ++steps_taken_;
        done_ = steps_taken_ >= cfg_.steps_per_episode;
        r.done = done_;
        return r;
    }

    int observation_size() const { return 2 * engine_.num_nodes() + 2; }
    static constexpr int action_space_size() { return kNumActions; }
    int steps_taken() const { return steps_taken_; }
    bool done() const { return done_; }
    const EnvConfig& config() const { return cfg_; }
    SimulationEngine& engine() { return engine_; }
    const SimulationEngine& engine() const { return engine_; }

private:
    EnvConfig cfg_;
    SimulationEngine engine_;
    std::uint64_t seed_ = 0;
    int steps_taken_ = 0;
    bool done_ = false;
};

}  // namespace leodtn
