#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "leodtn/bundle.hpp"
#include "leodtn/rng.hpp"

namespace leodtn {

struct TrafficConfig {
    double inter_arrival_s = 9.0;
    std::array<double, kNumPriorities> priority_dist = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    double ttl_s = 3600.0;
    std::int64_t bundle_size_bits = 500;

    void validate() const {
        if (inter_arrival_s <= 0.0) throw std::invalid_argument("traffic: inter_arrival must be > 0");
        double sum = priority_dist[0] + priority_dist[1] + priority_dist[2];
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("traffic: priority distribution must sum to 1");
        if (ttl_s <= 0.0 || bundle_size_bits <= 0)
            throw std::invalid_argument("traffic: ttl and bundle size must be positive");
    }
};

/// Seeded per-episode stream for traffic draws. Every quantity is a pure
/// function of (seed, episode, node, emission index), so generation is
/// identical no matter how the horizon is split into windows.
class TrafficRng {
public:
    TrafficRng(std::uint64_t seed, std::uint64_t episode) : seed_(seed), episode_(episode) {}

    double phase(int node, double inter_arrival) const {
        return RngStream::derive(seed_, {0x9a5eu, episode_, static_cast<std::uint64_t>(node)})
                   .uniform() * inter_arrival;
    }

    Priority priority(int node, std::uint64_t k, const std::array<double, 3>& dist) const {
        double u = RngStream::derive(seed_, {0x9121u, episode_, static_cast<std::uint64_t>(node), k})
                       .uniform();
        if (u < dist[0]) return Priority::low;
        if (u < dist[0] + dist[1]) return Priority::medium;
        return Priority::high;
    }

    int destination(int node, std::uint64_t k, int num_nodes) const {
        int d = RngStream::derive(seed_, {0xde57u, episode_, static_cast<std::uint64_t>(node), k})
                    .uniform_int(0, num_nodes - 2);
        return d >= node ? d + 1 : d;  // never the source itself
    }

private:
    std::uint64_t seed_;
    std::uint64_t episode_;
};

/// One bundle at every t = phase + k * inter_arrival inside [t_a, t_b).
inline std::vector<Bundle> generate_for_window(int node, double t_a, double t_b,
                                               const TrafficConfig& cfg, const TrafficRng& rng,
                                               int num_nodes) {
    if (t_a >= t_b) throw std::invalid_argument("generate_for_window: empty window");

    const double phase = rng.phase(node, cfg.inter_arrival_s);
    std::vector<Bundle> out;

    auto k0 = static_cast<std::int64_t>(std::ceil((t_a - phase) / cfg.inter_arrival_s));
    if (k0 < 0) k0 = 0;
    for (std::int64_t k = k0;; ++k) {
        double t = phase + static_cast<double>(k) * cfg.inter_arrival_s;
        if (t < t_a) continue;  // guard against ceil landing one step early
        if (t >= t_b) break;
        Bundle b;
        b.id = (static_cast<std::uint64_t>(node) << 32) | static_cast<std::uint64_t>(k);
        b.source = node;
        b.destination = rng.destination(node, static_cast<std::uint64_t>(k), num_nodes);
        b.size_bits = cfg.bundle_size_bits;
        b.priority = rng.priority(node, static_cast<std::uint64_t>(k), cfg.priority_dist);
        b.creation_time = t;
        b.ttl = cfg.ttl_s;
        b.visited.push_back(node);
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace leodtn
