#pragma once

#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "leodtn/bundle.hpp"
#include "leodtn/contacts.hpp"

namespace leodtn {

struct Route {
    std::vector<int> hops;           // contact indices into the plan, in order
    double best_delivery_time = 0.0; // arrival at the destination
};

/// Single-source earliest-arrival search over the contact graph.
/// Traversing a contact departs at max(arrival, contact start), needs the full
/// transmission (size / sender rate) to fit inside the window, and lands
/// owlt later. Rates are the senders' current radio rates; queueing at relays
/// is ignored, as in stock CGR.
struct ArrivalLabels {
    std::vector<double> arrival;      // per node; +inf if unreachable
    std::vector<int> parent_contact;  // contact used to reach the node, -1 at source
};

inline ArrivalLabels earliest_arrival(const ContactPlan& plan, int at_node, double now,
                                      std::int64_t size_bits, std::span<const double> rates,
                                      const std::vector<bool>& excluded) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const int n = plan.num_nodes;
    ArrivalLabels out;
    out.arrival.assign(n, inf);
    out.parent_contact.assign(n, -1);
    out.arrival[at_node] = now;

    using Entry = std::pair<double, int>;  // (arrival, node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    pq.push({now, at_node});
    std::vector<bool> settled(n, false);

    while (!pq.empty()) {
        auto [t_u, u] = pq.top();
        pq.pop();
        if (settled[u]) continue;
        settled[u] = true;

        for (int ci : plan.by_from[u]) {
            const Contact& c = plan.contacts[ci];
            if (excluded[c.to] || settled[c.to]) continue;
            double depart = std::max(t_u, c.start_s);
            double tx = static_cast<double>(size_bits) / rates[c.from];
            double finish = depart + tx;
            if (finish > c.end_s) continue;  // transmission does not fit
            double arr = finish + c.owlt();
            if (arr < out.arrival[c.to]) {
                out.arrival[c.to] = arr;
                out.parent_contact[c.to] = ci;
                pq.push({arr, c.to});
            }
        }
    }
    return out;
}

/// Best route by earliest delivery time, or nullopt when no contact path
/// reaches the destination before min(creation + ttl, plan horizon).
inline std::optional<Route> cgr_route(const Bundle& bundle, const ContactPlan& plan, int at_node,
                                      double now, const std::vector<int>& excluded_nodes,
                                      std::span<const double> rates) {
    if (plan.num_nodes == 0 || bundle.destination >= plan.num_nodes || at_node >= plan.num_nodes)
        return std::nullopt;

    std::vector<bool> excluded(plan.num_nodes, false);
    for (int e : excluded_nodes)
        if (e >= 0 && e < plan.num_nodes && e != at_node && e != bundle.destination)
            excluded[e] = true;

    ArrivalLabels labels = earliest_arrival(plan, at_node, now, bundle.size_bits, rates, excluded);

    double deadline = std::min(bundle.expiry_time(), plan.horizon_end);
    double arr = labels.arrival[bundle.destination];
    if (!(arr <= deadline)) return std::nullopt;

    Route route;
    route.best_delivery_time = arr;
    for (int v = bundle.destination; v != at_node;) {
        int ci = labels.parent_contact[v];
        route.hops.push_back(ci);
        v = plan.contacts[ci].from;
    }
    std::reverse(route.hops.begin(), route.hops.end());
    return route;
}

}  // namespace leodtn
