#pragma once

#include <bit>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "leodtn/env.hpp"
#include "leodtn/net.hpp"

namespace leodtn {

struct TrainConfig {
    double gamma = 0.99;
    double learning_rate = 1e-7;
    int n_steps = 5;
    double entropy_coef = 0.01;
    double value_coef = 0.5;
    double grad_clip_norm = 0.5;
    double rmsprop_decay = 0.99;
    double rmsprop_epsilon = 1e-5;
    int episodes = 1000;

    void validate() const {
        if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("train: gamma must be in (0,1]");
        if (n_steps < 1) throw std::invalid_argument("train: n_steps must be >= 1");
        if (learning_rate < 0 || entropy_coef < 0 || value_coef < 0 || grad_clip_norm < 0)
            throw std::invalid_argument("train: coefficients must be >= 0");
    }
};

struct Transition {
    std::vector<double> obs;  // normalized
    int action_index = 0;     // 0-based
    double reward = 0.0;
    bool done = false;
    double value = 0.0;       // critic estimate at collection time
};

struct Rollout {
    std::vector<Transition> transitions;
    double bootstrap_value = 0.0;  // V of the observation after the last transition; 0 at terminal
};

struct ReturnsAndAdvantages {
    std::vector<double> returns;
    std::vector<double> advantages;
};

/// Backward n-step recursion R_t = r_t + gamma * R_{t+1}, seeded with the
/// bootstrap value; advantage is R_t - V(s_t).
inline ReturnsAndAdvantages compute_returns(const Rollout& rollout, double gamma) {
    if (rollout.transitions.empty()) throw std::invalid_argument("compute_returns: empty rollout");
    const auto n = rollout.transitions.size();
    ReturnsAndAdvantages out;
    out.returns.resize(n);
    out.advantages.resize(n);
    double running = rollout.transitions.back().done ? 0.0 : rollout.bootstrap_value;
    for (std::size_t i = n; i-- > 0;) {
        running = rollout.transitions[i].reward + gamma * running;
        out.returns[i] = running;
        out.advantages[i] = running - rollout.transitions[i].value;
    }
    return out;
}

enum class SelectMode { sample, greedy };

/// Greedy picks the argmax with lowest-index tie-break; sample inverts the CDF.
inline int select_action_index(std::span<const double> probs, SelectMode mode, RngStream& rng) {
    if (mode == SelectMode::greedy) {
        int best = 0;
        for (int i = 1; i < static_cast<int>(probs.size()); ++i)
            if (probs[i] > probs[best]) best = i;
        return best;
    }
    double u = rng.uniform();
    double acc = 0.0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return static_cast<int>(probs.size()) - 1;
}

/// The env reports physical units; the network sees rates over rate_max and
/// delay over the bundle TTL so every input lands in roughly [0, 1].
inline std::vector<double> normalize_observation(const Observation& obs, double rate_max,
                                                 double ttl_s) {
    std::vector<double> v = obs.flatten();
    const std::size_t n = obs.rates.size();
    for (std::size_t i = 0; i < n; ++i) v[1 + i] /= rate_max;
    v[1 + n] /= ttl_s;
    return v;
}

/// Synchronous advantage actor-critic: policy/value net, RMSProp-style
/// optimizer, global-norm gradient clipping.
class A2CLearner {
public:
    A2CLearner(NetDims dims, TrainConfig cfg, std::uint64_t seed)
        : cfg_(cfg), net_(dims), opt_state_(dims.param_count(), 0.0), seed_(seed) {
        cfg_.validate();
        net_.init_weights(seed);
    }

    PolicyValueNet& net() { return net_; }
    const PolicyValueNet& net() const { return net_; }
    const TrainConfig& config() const { return cfg_; }
    std::uint64_t seed() const { return seed_; }
    std::vector<double>& optimizer_state() { return opt_state_; }

    PolicyValueNet::Output forward(std::span<const double> obs) const { return net_.forward(obs); }

    PolicyValueNet::LossInfo update(const Rollout& rollout) {
        auto ra = compute_returns(rollout, cfg_.gamma);
        std::vector<PolicyValueNet::Sample> batch(rollout.transitions.size());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            batch[i].obs = rollout.transitions[i].obs;
            batch[i].action = rollout.transitions[i].action_index;
            batch[i].ret = ra.returns[i];
            batch[i].advantage = ra.advantages[i];
        }
        return update_batch(batch);
    }

    PolicyValueNet::LossInfo update_batch(std::span<const PolicyValueNet::Sample> batch) {
        std::vector<double> grad;
        auto info = net_.loss_and_gradient(batch, cfg_.value_coef, cfg_.entropy_coef, grad);
        if (!std::isfinite(info.total))
            throw std::runtime_error("update: non-finite loss (policy=" +
                                     std::to_string(info.policy_loss) +
                                     " value=" + std::to_string(info.value_loss) + ")");
        clip_global_norm(grad, cfg_.grad_clip_norm);
        apply_rmsprop(grad);
        return info;
    }

    static void clip_global_norm(std::vector<double>& grad, double max_norm) {
        if (max_norm <= 0.0) return;
        double sq = 0.0;
        for (double g : grad) sq += g * g;
        double norm = std::sqrt(sq);
        if (norm > max_norm) {
            double scale = max_norm / norm;
            for (double& g : grad) g *= scale;
        }
    }

private:
    void apply_rmsprop(const std::vector<double>& grad) {
        auto& w = net_.parameters();
        for (std::size_t i = 0; i < w.size(); ++i) {
            opt_state_[i] = cfg_.rmsprop_decay * opt_state_[i] +
                            (1.0 - cfg_.rmsprop_decay) * grad[i] * grad[i];
            w[i] -= cfg_.learning_rate * grad[i] / (std::sqrt(opt_state_[i]) + cfg_.rmsprop_epsilon);
        }
    }

    TrainConfig cfg_;
    PolicyValueNet net_;
    std::vector<double> opt_state_;
    std::uint64_t seed_;
};

// ---- non-RL baseline policies --------------------------------------------

/// Max-rate, never-drop baseline; rates are forced to the maximum at reset.
inline Action standard_policy() { return Action::no_op; }

inline Action random_policy(RngStream& rng) { return static_cast<Action>(rng.uniform_int(1, 6)); }

// ---- checkpoint file ------------------------------------------------------
//
// Little-endian binary: magic "LDTNCKPT", u32 version, u32 input, u32 h1,
// u32 h2, u32 actions, u64 seed, u64 episode, u32 has_optimizer, then all
// weights as f64 in declared layer order, then optimizer accumulators.

struct CheckpointData {
    NetDims dims;
    std::uint64_t seed = 0;
    std::uint64_t episode = 0;
    std::vector<double> params;
    std::vector<double> opt_state;
};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}
inline void put_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}
inline void put_f64(std::ostream& os, double d) { put_u64(os, std::bit_cast<std::uint64_t>(d)); }

inline std::uint32_t get_u32(std::istream& is, const char* field) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw std::runtime_error(std::string("checkpoint load: truncated field '") + field + "'");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}
inline std::uint64_t get_u64(std::istream& is, const char* field) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8))
        throw std::runtime_error(std::string("checkpoint load: truncated field '") + field + "'");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}
inline double get_f64(std::istream& is, const char* field) {
    return std::bit_cast<double>(get_u64(is, field));
}

}  // namespace detail

inline void save_checkpoint(const std::string& path, const CheckpointData& ck) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint save: cannot open " + path);
    os.write("LDTNCKPT", 8);
    detail::put_u32(os, 1);  // format version
    detail::put_u32(os, static_cast<std::uint32_t>(ck.dims.input));
    detail::put_u32(os, static_cast<std::uint32_t>(ck.dims.hidden1));
    detail::put_u32(os, static_cast<std::uint32_t>(ck.dims.hidden2));
    detail::put_u32(os, static_cast<std::uint32_t>(ck.dims.actions));
    detail::put_u64(os, ck.seed);
    detail::put_u64(os, ck.episode);
    detail::put_u32(os, ck.opt_state.empty() ? 0u : 1u);
    for (double d : ck.params) detail::put_f64(os, d);
    for (double d : ck.opt_state) detail::put_f64(os, d);
    if (!os) throw std::runtime_error("checkpoint save: write failed for " + path);
}

inline CheckpointData load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint load: cannot open " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, "LDTNCKPT", 8) != 0)
        throw std::runtime_error("checkpoint load: bad field 'magic' in " + path);
    std::uint32_t version = detail::get_u32(is, "version");
    if (version != 1)
        throw std::runtime_error("checkpoint load: bad field 'version' (" + std::to_string(version) + ")");
    CheckpointData ck;
    ck.dims.input = static_cast<int>(detail::get_u32(is, "input_dim"));
    ck.dims.hidden1 = static_cast<int>(detail::get_u32(is, "hidden1"));
    ck.dims.hidden2 = static_cast<int>(detail::get_u32(is, "hidden2"));
    ck.dims.actions = static_cast<int>(detail::get_u32(is, "actions"));
    if (ck.dims.input <= 0 || ck.dims.hidden1 <= 0 || ck.dims.hidden2 <= 0 || ck.dims.actions <= 0)
        throw std::runtime_error("checkpoint load: bad field 'layer_dimensions'");
    ck.seed = detail::get_u64(is, "seed");
    ck.episode = detail::get_u64(is, "episode");
    std::uint32_t has_opt = detail::get_u32(is, "has_optimizer");
    const int n = ck.dims.param_count();
    ck.params.resize(n);
    for (int i = 0; i < n; ++i) ck.params[i] = detail::get_f64(is, "weights");
    if (has_opt) {
        ck.opt_state.resize(n);
        for (int i = 0; i < n; ++i) ck.opt_state[i] = detail::get_f64(is, "optimizer_state");
    }
    return ck;
}

}  // namespace leodtn
