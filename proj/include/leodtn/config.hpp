#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leodtn/agent.hpp"
#include "leodtn/contacts.hpp"
#include "leodtn/env.hpp"
#include "leodtn/orbits.hpp"
#include "leodtn/traffic.hpp"

namespace leodtn {

/// Flat `key = value` document with dotted section names; '#' starts a
/// comment. Unknown keys are rejected so typos fail loudly.
class Config {
public:
    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("config: cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return from_string(ss.str());
    }

    static Config from_string(const std::string& text) {
        Config cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config: missing '=' on line " + std::to_string(lineno));
            std::string key = trim(t.substr(0, eq));
            std::string value = trim(t.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error("config: empty key on line " + std::to_string(lineno));
            cfg.values_[key] = value;
        }
        return cfg;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

private:
    std::map<std::string, std::string> values_;
};

/// Everything a run needs, with every default overridable from the config
/// file. The effective (merged) document is kept for provenance echoing.
struct RunConfig {
    ConstellationSpec scenario;
    VisibilityParams vis;
    std::string contact_plan_file;  // load instead of generating when set

    TrafficConfig traffic;
    EnvConfig env;
    TrainConfig train;
    int checkpoint_interval = 5;
    int selection_window = 20;  // trailing episodes scored when picking the best checkpoint
    int workers = 1;

    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int evaluation_episodes = 100;

    double horizon_s() const { return env.steps_per_episode * env.step_duration_s; }

    static const std::vector<std::pair<std::string, std::string>>& defaults() {
        static const std::vector<std::pair<std::string, std::string>> d = {
            {"scenario.planes", "3"},
            {"scenario.sats_per_plane", "8"},
            {"scenario.altitude_km", "710"},
            {"scenario.inclination_deg", "98.5"},
            {"scenario.phasing_factor", "1"},
            {"scenario.max_range_km", "6000"},
            {"scenario.grazing_altitude_km", "100"},
            {"scenario.sample_dt_s", "10"},
            {"scenario.contact_plan_file", ""},
            {"traffic.inter_arrival_s", "9"},
            {"traffic.ttl_s", "3600"},
            {"traffic.bundle_size_bits", "500"},
            {"traffic.p_low", "0.333333333333333"},
            {"traffic.p_medium", "0.333333333333333"},
            {"traffic.p_high", "0.333333333333334"},
            {"env.steps_per_episode", "200"},
            {"env.step_duration_s", "40"},
            {"env.rate_max_bps", "500"},
            {"env.rate_min_bps", "7.8125"},
            {"env.penalty_a", "25"},
            {"env.penalty_b", "0.3"},
            {"env.buffer_capacity_bits", "80000"},
            {"train.gamma", "0.99"},
            // 1e-4 learns at desk scale; the classic 1e-7 is available but
            // moves weights too little to change behavior in short runs
            {"train.learning_rate", "1e-4"},
            {"train.n_steps", "5"},
            {"train.entropy_coef", "0.01"},
            {"train.value_coef", "0.5"},
            {"train.grad_clip_norm", "0.5"},
            {"train.rmsprop_decay", "0.99"},
            {"train.rmsprop_epsilon", "1e-5"},
            {"train.episodes", "1000"},
            {"train.checkpoint_interval", "5"},
            {"train.selection_window", "20"},
            {"train.workers", "1"},
            {"run.seed", "1"},
            {"run.output_dir", "out"},
            {"run.evaluation_episodes", "100"},
        };
        return d;
    }

    static RunConfig from_file(const std::string& path) { return from_config(Config::from_file(path)); }
    static RunConfig from_string(const std::string& text) {
        return from_config(Config::from_string(text));
    }

    static RunConfig from_config(const Config& cfg) {
        std::map<std::string, std::string> eff;
        for (const auto& [k, v] : defaults()) eff[k] = v;
        for (const auto& [k, v] : cfg.values()) {
            if (!eff.count(k)) throw std::runtime_error("config: unknown key '" + k + "'");
            eff[k] = v;
        }

        RunConfig rc;
        rc.effective_ = eff;
        rc.scenario.num_planes = rc.geti("scenario.planes");
        rc.scenario.sats_per_plane = rc.geti("scenario.sats_per_plane");
        rc.scenario.altitude_km = rc.getd("scenario.altitude_km");
        rc.scenario.inclination_deg = rc.getd("scenario.inclination_deg");
        rc.scenario.phasing_factor = rc.geti("scenario.phasing_factor");
        rc.vis.max_range_km = rc.getd("scenario.max_range_km");
        rc.vis.grazing_altitude_km = rc.getd("scenario.grazing_altitude_km");
        rc.vis.sample_dt_s = rc.getd("scenario.sample_dt_s");
        rc.contact_plan_file = eff.at("scenario.contact_plan_file");

        rc.traffic.inter_arrival_s = rc.getd("traffic.inter_arrival_s");
        rc.traffic.ttl_s = rc.getd("traffic.ttl_s");
        rc.traffic.bundle_size_bits = rc.geti64("traffic.bundle_size_bits");
        rc.traffic.priority_dist = {rc.getd("traffic.p_low"), rc.getd("traffic.p_medium"),
                                    rc.getd("traffic.p_high")};

        rc.env.steps_per_episode = rc.geti("env.steps_per_episode");
        rc.env.step_duration_s = rc.getd("env.step_duration_s");
        rc.env.rate_max_bps = rc.getd("env.rate_max_bps");
        rc.env.rate_min_bps = rc.getd("env.rate_min_bps");
        rc.env.penalty_a = rc.getd("env.penalty_a");
        rc.env.penalty_b = rc.getd("env.penalty_b");
        rc.env.buffer_capacity_bits = rc.geti64("env.buffer_capacity_bits");

        rc.train.gamma = rc.getd("train.gamma");
        rc.train.learning_rate = rc.getd("train.learning_rate");
        rc.train.n_steps = rc.geti("train.n_steps");
        rc.train.entropy_coef = rc.getd("train.entropy_coef");
        rc.train.value_coef = rc.getd("train.value_coef");
        rc.train.grad_clip_norm = rc.getd("train.grad_clip_norm");
        rc.train.rmsprop_decay = rc.getd("train.rmsprop_decay");
        rc.train.rmsprop_epsilon = rc.getd("train.rmsprop_epsilon");
        rc.train.episodes = rc.geti("train.episodes");
        rc.checkpoint_interval = rc.geti("train.checkpoint_interval");
        rc.selection_window = rc.geti("train.selection_window");
        rc.workers = rc.geti("train.workers");

        rc.seed = static_cast<std::uint64_t>(rc.geti64("run.seed"));
        rc.output_dir = eff.at("run.output_dir");
        rc.evaluation_episodes = rc.geti("run.evaluation_episodes");

        if (rc.checkpoint_interval < 1) throw std::runtime_error("config: checkpoint interval must be >= 1");
        if (rc.evaluation_episodes < 1) throw std::runtime_error("config: evaluation episodes must be >= 1");
        if (rc.workers < 1) throw std::runtime_error("config: workers must be >= 1");
        rc.traffic.validate();
        rc.train.validate();
        return rc;
    }

    void set(const std::string& key, const std::string& value) {
        if (!effective_.count(key)) throw std::runtime_error("config: unknown key '" + key + "'");
        effective_[key] = value;
    }

    /// Write the merged key/value document, in defaults order.
    void echo(std::ostream& os) const {
        for (const auto& [k, unused] : defaults()) os << k << " = " << effective_.at(k) << "\n";
    }

private:
    double getd(const std::string& key) const {
        const std::string& s = effective_.at(key);
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw std::runtime_error("config: bad number for '" + key + "': " + s);
        return v;
    }
    int geti(const std::string& key) const {
        double d = getd(key);
        auto v = static_cast<int>(d);
        if (static_cast<double>(v) != d)
            throw std::runtime_error("config: '" + key + "' must be an integer");
        return v;
    }
    std::int64_t geti64(const std::string& key) const {
        double d = getd(key);
        auto v = static_cast<std::int64_t>(d);
        if (static_cast<double>(v) != d)
            throw std::runtime_error("config: '" + key + "' must be an integer");
        return v;
    }

    std::map<std::string, std::string> effective_;
};

}  // namespace leodtn
