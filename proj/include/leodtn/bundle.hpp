#pragma once

#include <cstdint>
#include <vector>

namespace leodtn {

enum class Priority : int { low = 0, medium = 1, high = 2 };

constexpr int kNumPriorities = 3;

/// The DTN protocol data unit. `visited` is the hop trace (source first);
/// routing uses it to exclude nodes the bundle has already held.
struct Bundle {
    std::uint64_t id = 0;
    int source = -1;
    int destination = -1;
    std::int64_t size_bits = 0;
    Priority priority = Priority::low;
    double creation_time = 0.0;
    double ttl = 0.0;
    int hop_count = 0;
    double delivered_time = -1.0;  // < 0 while undelivered
    std::vector<int> visited;

    double expiry_time() const { return creation_time + ttl; }
    bool expired(double now) const { return now >= expiry_time(); }
};

}  // namespace leodtn
