#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <list>
#include <queue>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "leodtn/bundle.hpp"
#include "leodtn/contacts.hpp"
#include "leodtn/routing.hpp"
#include "leodtn/traffic.hpp"

namespace leodtn {

struct Tally {
    std::int64_t count = 0;
    std::int64_t bits = 0;
    void add(std::int64_t b) {
        ++count;
        bits += b;
    }
    Tally& operator+=(const Tally& o) {
        count += o.count;
        bits += o.bits;
        return *this;
    }
};

enum class DropCause : int { overflow = 0, ttl = 1, action = 2 };

struct NodeCounters {
    std::array<Tally, kNumPriorities> generated{};
    std::array<Tally, kNumPriorities> delivered{};  // with this node as destination
    std::array<std::array<Tally, kNumPriorities>, 3> dropped{};  // [cause][priority]

    Tally generated_total() const { return sum(generated); }
    Tally delivered_total() const { return sum(delivered); }
    Tally dropped_total(DropCause c) const { return sum(dropped[static_cast<int>(c)]); }

private:
    static Tally sum(const std::array<Tally, kNumPriorities>& a) {
        Tally t;
        for (const Tally& x : a) t += x;
        return t;
    }
};

/// A buffered bundle plus its routing state and any partially transmitted
/// progress carried over from a closed contact window.
struct QueuedBundle {
    Bundle bundle;

    bool has_route = false;
    int next_hop = -1;
    int contact_idx = -1;
    std::uint64_t routed_version = std::numeric_limits<std::uint64_t>::max();
    double last_route_attempt = -1.0;

    int partial_neighbor = -1;
    double partial_bits_remaining = 0.0;
};

struct NodeState {
    int id = -1;
    double radio_rate_bps = 500.0;
    std::int64_t buffer_capacity_bits = 80000;
    std::list<QueuedBundle> buffer;  // FCFS; only the front bundle transmits
    std::int64_t buffered_bits = 0;
    NodeCounters counters;

    struct Transmitter {
        bool active = false;
        std::uint64_t epoch = 0;
        std::uint64_t bundle_id = 0;
        int contact_idx = -1;
        double segment_start = 0.0;
        double rate = 0.0;
        double bits_remaining = 0.0;
    } tx;

    double utilization() const {
        return buffer_capacity_bits > 0
                   ? static_cast<double>(buffered_bits) / static_cast<double>(buffer_capacity_bits)
                   : 0.0;
    }
};

struct StepMetrics {
    std::int64_t delivered_bits = 0;
    std::int64_t cost_bits = 0;
    std::int64_t delivered_bundle_count = 0;
    std::int64_t generated_bundle_count = 0;
    double mean_delivery_delay = 0.0;
    Tally drop_overflow, drop_ttl, drop_action;
    std::vector<double> node_utilization;  // U_i snapshot at step end
    double total_link_capacity = 0.0;

    double max_utilization() const {
        double m = 0.0;
        for (double u : node_utilization) m = std::max(m, u);
        return m;
    }
};

struct EngineConfig {
    int num_nodes = 24;
    std::int64_t buffer_capacity_bits = 80000;
    double rate_min_bps = 500.0 / 64.0;
    double rate_max_bps = 500.0;
    TrafficConfig traffic;
    bool traffic_enabled = true;
};

/// Event-driven DTN simulation over a fixed contact plan. Single-threaded;
/// rates and drop actions may only change between step_simulation calls.
class SimulationEngine {
public:
    enum class EnqueueResult { accepted, dropped_overflow, rejected_expired };

    SimulationEngine(ContactPlan plan, EngineConfig cfg)
        : plan_(std::move(plan)), cfg_(std::move(cfg)) {
        if (plan_.num_nodes < cfg_.num_nodes) {
            plan_.num_nodes = cfg_.num_nodes;
            plan_.rebuild_index();
        }
        cfg_.traffic.validate();
        reset(0, 0, {});
    }

    void reset(std::uint64_t seed, std::uint64_t episode, std::span<const double> initial_rates) {
        now_ = 0.0;
        seq_ = 0;
        rates_version_ = 1;
        events_ = {};
        staged_.clear();
        loc_.clear();
        in_flight_.clear();
        departures_.clear();
        contact_active_.assign(plan_.contacts.size(), false);
        ep_generated_ = Tally{};
        ep_delivered_ = Tally{};
        ep_dropped_ = {};
        ep_cost_bits_ = 0;
        traffic_rng_ = TrafficRng(seed, episode);

        nodes_.assign(cfg_.num_nodes, NodeState{});
        rates_.assign(cfg_.num_nodes, cfg_.rate_max_bps);
        for (int i = 0; i < cfg_.num_nodes; ++i) {
            nodes_[i].id = i;
            nodes_[i].buffer_capacity_bits = cfg_.buffer_capacity_bits;
            if (!initial_rates.empty()) rates_[i] = initial_rates[i];
            nodes_[i].radio_rate_bps = rates_[i];
        }

        for (int ci = 0; ci < static_cast<int>(plan_.contacts.size()); ++ci) {
            schedule(plan_.contacts[ci].start_s, EventType::contact_start, ci, 0);
            schedule(plan_.contacts[ci].end_s, EventType::contact_end, ci, 0);
        }
    }

    double now() const { return now_; }
    int num_nodes() const { return cfg_.num_nodes; }
    const ContactPlan& plan() const { return plan_; }
    const NodeState& node(int i) const { return nodes_.at(i); }
    std::span<const double> rates() const { return rates_; }
    const std::vector<std::pair<int, std::uint64_t>>& departure_log() const { return departures_; }

    /// Change a node's radio rate. Takes effect immediately for pending
    /// transmissions at the next step start. Only valid between steps.
    void set_rate(int i, double r) {
        nodes_.at(i).radio_rate_bps = r;
        rates_.at(i) = r;
        ++rates_version_;
    }

    /// Remove every buffered bundle with a priority in `mask` (bit i set for
    /// priority i). Survivors keep FCFS order. Returns bits removed.
    std::int64_t drop_by_priority(int node_id, unsigned mask) {
        NodeState& n = nodes_.at(node_id);
        std::int64_t removed = 0;
        for (auto it = n.buffer.begin(); it != n.buffer.end();) {
            if (mask & (1u << static_cast<int>(it->bundle.priority))) {
                if (n.tx.active && it->bundle.id == n.tx.bundle_id) cancel_tx(n);
                removed += it->bundle.size_bits;
                n.buffered_bits -= it->bundle.size_bits;
                account_drop(n, it->bundle, DropCause::action);
                it = n.buffer.erase(it);
            } else {
                ++it;
            }
        }
        kick(node_id);
        return removed;
    }

    /// Tail-append if the bundle fits; the incoming bundle is dropped on
    /// overflow, queued bundles are never evicted.
    EnqueueResult enqueue(int node_id, Bundle b) {
        NodeState& n = nodes_.at(node_id);
        if (b.expired(now_)) {
            account_drop(n, b, DropCause::ttl);
            return EnqueueResult::rejected_expired;
        }
        if (n.buffered_bits + b.size_bits > n.buffer_capacity_bits) {
            account_drop(n, b, DropCause::overflow);
            return EnqueueResult::dropped_overflow;
        }
        n.buffered_bits += b.size_bits;
        loc_[b.id] = {LocState::queued, node_id};
        n.buffer.push_back(QueuedBundle{std::move(b)});
        kick(node_id);
        return EnqueueResult::accepted;
    }

    /// Enqueue a bundle at its source, counting it as generated traffic, and
    /// schedule its TTL expiry. Used by the traffic feed and by tests that
    /// check conservation.
    EnqueueResult inject(Bundle b) {
        NodeState& n = nodes_.at(b.source);
        n.counters.generated[static_cast<int>(b.priority)].add(b.size_bits);
        ep_generated_.add(b.size_bits);
        ++step_generated_;
        schedule(b.expiry_time(), EventType::expiry, 0, b.id);
        return enqueue(b.source, std::move(b));
    }

    StepMetrics step_simulation(double duration) {
        if (duration <= 0.0) throw std::invalid_argument("step_simulation: duration must be > 0");
        const double step_begin = now_;
        const double target = now_ + duration;

        step_generated_ = 0;
        step_delivered_count_ = 0;
        step_delivered_bits_ = 0;
        step_cost_bits_ = 0;
        step_delay_sum_ = 0.0;
        step_drops_ = {};

        ++rates_version_;  // rates may have changed between steps
        resegment_transmissions();

        if (cfg_.traffic_enabled) stage_traffic(step_begin, target);
        for (int i = 0; i < cfg_.num_nodes; ++i) kick(i);

        while (!events_.empty() && events_.top().t <= target) {
            Event ev = events_.top();
            events_.pop();
            now_ = ev.t;
            dispatch(ev);
        }
        now_ = target;

        StepMetrics m;
        m.generated_bundle_count = step_generated_;
        m.delivered_bundle_count = step_delivered_count_;
        m.delivered_bits = step_delivered_bits_;
        m.cost_bits = step_cost_bits_;
        m.mean_delivery_delay =
            step_delivered_count_ > 0 ? step_delay_sum_ / static_cast<double>(step_delivered_count_)
                                      : 0.0;
        m.drop_overflow = step_drops_[static_cast<int>(DropCause::overflow)];
        m.drop_ttl = step_drops_[static_cast<int>(DropCause::ttl)];
        m.drop_action = step_drops_[static_cast<int>(DropCause::action)];
        m.node_utilization.resize(cfg_.num_nodes);
        for (int i = 0; i < cfg_.num_nodes; ++i) m.node_utilization[i] = nodes_[i].utilization();
        for (const Contact& c : plan_.contacts) {
            double overlap = std::min(c.end_s, target) - std::max(c.start_s, step_begin);
            if (overlap > 0.0) m.total_link_capacity += rates_[c.from] * overlap;
        }
        return m;
    }

    // ---- episode-cumulative accounting, for conservation checks ----

    struct Audit {
        Tally generated, delivered;
        std::array<Tally, 3> dropped;  // by cause
        Tally buffered, in_flight;
        std::int64_t cost_bits = 0;

        bool conserved() const {
            Tally rhs = delivered;
            rhs += dropped[0];
            rhs += dropped[1];
            rhs += dropped[2];
            rhs += buffered;
            rhs += in_flight;
            return generated.count == rhs.count && generated.bits == rhs.bits;
        }
    };

    Audit audit() const {
        Audit a;
        a.generated = ep_generated_;
        a.delivered = ep_delivered_;
        a.dropped = ep_dropped_;
        a.cost_bits = ep_cost_bits_;
        for (const NodeState& n : nodes_) {
            for (const QueuedBundle& qb : n.buffer) a.buffered.add(qb.bundle.size_bits);
        }
        for (const auto& [id, fl] : in_flight_) a.in_flight.add(fl.bundle.size_bits);
        return a;
    }

private:
    enum class EventType : int { contact_start, contact_end, bundle_gen, tx_complete, arrival, expiry };

    struct Event {
        double t = 0.0;
        std::uint64_t seq = 0;
        EventType type = EventType::contact_start;
        int idx = 0;          // contact index / staged index / node id
        std::uint64_t id = 0; // bundle id or tx epoch

        bool operator>(const Event& o) const {
            if (t != o.t) return t > o.t;
            return seq > o.seq;
        }
    };

    enum class LocState : int { queued, in_flight, delivered, dropped };
    struct Location {
        LocState state;
        int node;
    };
    struct InFlight {
        Bundle bundle;
        int to;
    };

    void schedule(double t, EventType type, int idx, std::uint64_t id) {
        events_.push(Event{t, seq_++, type, idx, id});
    }

    void dispatch(const Event& ev) {
        switch (ev.type) {
            case EventType::contact_start:
                contact_active_[ev.idx] = true;
                kick(plan_.contacts[ev.idx].from);
                break;
            case EventType::contact_end:
                on_contact_end(ev.idx);
                break;
            case EventType::bundle_gen:
                inject(staged_[ev.idx]);
                break;
            case EventType::tx_complete: {
                NodeState& n = nodes_[ev.idx];
                if (n.tx.active && n.tx.epoch == ev.id) complete_transmission(n);
                break;
            }
            case EventType::arrival:
                on_arrival(ev.id);
                break;
            case EventType::expiry:
                on_expiry(ev.id);
                break;
        }
    }

    void stage_traffic(double t_a, double t_b) {
        for (int i = 0; i < cfg_.num_nodes; ++i) {
            auto bundles = generate_for_window(i, t_a, t_b, cfg_.traffic, traffic_rng_, cfg_.num_nodes);
            for (Bundle& b : bundles) {
                staged_.push_back(std::move(b));
                schedule(staged_.back().creation_time, EventType::bundle_gen,
                         static_cast<int>(staged_.size()) - 1, 0);
            }
        }
    }

    // Serve the head of the FCFS queue: purge it if expired, refresh its route
    // when stale, and start transmitting when its first-hop contact is active.
    void kick(int node_id) {
        NodeState& n = nodes_[node_id];
        while (!n.tx.active && !n.buffer.empty()) {
            QueuedBundle& qb = n.buffer.front();
            if (qb.bundle.expired(now_)) {
                n.buffered_bits -= qb.bundle.size_bits;
                account_drop(n, qb.bundle, DropCause::ttl);
                n.buffer.pop_front();
                continue;
            }

            bool stale = qb.routed_version != rates_version_ ||
                         (qb.has_route && plan_.contacts[qb.contact_idx].end_s <= now_) ||
                         (!qb.has_route && qb.last_route_attempt < now_);
            if (stale) {
                auto route = cgr_route(qb.bundle, plan_, node_id, now_, qb.bundle.visited, rates_);
                qb.routed_version = rates_version_;
                qb.last_route_attempt = now_;
                if (route) {
                    qb.has_route = true;
                    qb.contact_idx = route->hops.front();
                    qb.next_hop = plan_.contacts[qb.contact_idx].to;
                } else {
                    qb.has_route = false;
                    qb.contact_idx = -1;
                    qb.next_hop = -1;
                }
            }
            if (!qb.has_route) return;  // head blocks until rates or contacts change

            const Contact& c = plan_.contacts[qb.contact_idx];
            if (now_ < c.start_s || !contact_active_[qb.contact_idx]) return;  // wait for window

            double bits = (qb.partial_neighbor == qb.next_hop && qb.partial_bits_remaining > 0.0)
                              ? qb.partial_bits_remaining
                              : static_cast<double>(qb.bundle.size_bits);
            qb.partial_neighbor = -1;
            qb.partial_bits_remaining = 0.0;

            n.tx.active = true;
            ++n.tx.epoch;
            n.tx.bundle_id = qb.bundle.id;
            n.tx.contact_idx = qb.contact_idx;
            n.tx.segment_start = now_;
            n.tx.rate = n.radio_rate_bps;
            n.tx.bits_remaining = bits;
            schedule(now_ + bits / n.radio_rate_bps, EventType::tx_complete, node_id, n.tx.epoch);
            return;
        }
    }

    void cancel_tx(NodeState& n) {
        n.tx.active = false;
        ++n.tx.epoch;  // strands the pending completion event
    }

    void on_contact_end(int ci) {
        contact_active_[ci] = false;
        int u = plan_.contacts[ci].from;
        NodeState& n = nodes_[u];
        if (n.tx.active && n.tx.contact_idx == ci) {
            double sent = (now_ - n.tx.segment_start) * n.tx.rate;
            double rem = n.tx.bits_remaining - sent;
            if (rem <= 1e-9) {
                complete_transmission(n);  // finished exactly at window close
            } else {
                QueuedBundle& qb = n.buffer.front();
                qb.partial_neighbor = plan_.contacts[ci].to;
                qb.partial_bits_remaining = rem;
                qb.routed_version = 0;  // force re-route at next kick
                cancel_tx(n);
                kick(u);
            }
        }
    }

    void complete_transmission(NodeState& n) {
        QueuedBundle qb = std::move(n.buffer.front());
        n.buffer.pop_front();
        n.buffered_bits -= qb.bundle.size_bits;
        const Contact& c = plan_.contacts[n.tx.contact_idx];
        cancel_tx(n);
        departures_.emplace_back(n.id, qb.bundle.id);

        std::uint64_t id = qb.bundle.id;
        loc_[id] = {LocState::in_flight, c.to};
        in_flight_[id] = InFlight{std::move(qb.bundle), c.to};
        schedule(now_ + c.owlt(), EventType::arrival, 0, id);
        kick(n.id);
    }

    void on_arrival(std::uint64_t id) {
        auto it = in_flight_.find(id);
        InFlight fl = std::move(it->second);
        in_flight_.erase(it);
        Bundle& b = fl.bundle;
        ++b.hop_count;
        b.visited.push_back(fl.to);
        NodeState& n = nodes_[fl.to];

        // Cost charged once per completed hop, booked when the hop lands so a
        // delivery and its own hop cost always fall in the same step (owlt can
        // straddle a step boundary). Partial segments stay free until the hop
        // completes.
        step_cost_bits_ += b.size_bits;
        ep_cost_bits_ += b.size_bits;

        if (fl.to == b.destination) {
            b.delivered_time = now_;
            loc_[id] = {LocState::delivered, fl.to};
            n.counters.delivered[static_cast<int>(b.priority)].add(b.size_bits);
            ep_delivered_.add(b.size_bits);
            ++step_delivered_count_;
            step_delivered_bits_ += b.size_bits;
            step_delay_sum_ += now_ - b.creation_time;
            return;
        }
        enqueue(fl.to, std::move(b));
    }

    void on_expiry(std::uint64_t id) {
        auto it = loc_.find(id);
        if (it == loc_.end() || it->second.state != LocState::queued) return;
        NodeState& n = nodes_[it->second.node];
        if (n.tx.active && n.tx.bundle_id == id) return;  // let the hop finish
        for (auto qit = n.buffer.begin(); qit != n.buffer.end(); ++qit) {
            if (qit->bundle.id == id) {
                n.buffered_bits -= qit->bundle.size_bits;
                account_drop(n, qit->bundle, DropCause::ttl);
                n.buffer.erase(qit);
                kick(n.id);
                return;
            }
        }
    }

    void account_drop(NodeState& n, const Bundle& b, DropCause cause) {
        n.counters.dropped[static_cast<int>(cause)][static_cast<int>(b.priority)].add(b.size_bits);
        step_drops_[static_cast<int>(cause)].add(b.size_bits);
        ep_dropped_[static_cast<int>(cause)].add(b.size_bits);
        loc_[b.id] = {LocState::dropped, n.id};
    }

    void resegment_transmissions() {
        for (NodeState& n : nodes_) {
            if (!n.tx.active || n.tx.rate == n.radio_rate_bps) continue;
            double sent = (now_ - n.tx.segment_start) * n.tx.rate;
            double rem = std::max(n.tx.bits_remaining - sent, 1e-9);
            ++n.tx.epoch;
            n.tx.segment_start = now_;
            n.tx.rate = n.radio_rate_bps;
            n.tx.bits_remaining = rem;
            schedule(now_ + rem / n.tx.rate, EventType::tx_complete, n.id, n.tx.epoch);
        }
    }

    ContactPlan plan_;
    EngineConfig cfg_;
    std::vector<NodeState> nodes_;
    std::vector<double> rates_;
    std::vector<bool> contact_active_;

    double now_ = 0.0;
    std::uint64_t seq_ = 0;
    std::uint64_t rates_version_ = 1;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::vector<Bundle> staged_;
    std::unordered_map<std::uint64_t, Location> loc_;
    std::unordered_map<std::uint64_t, InFlight> in_flight_;
    std::vector<std::pair<int, std::uint64_t>> departures_;
    TrafficRng traffic_rng_{0, 0};

    // per-step accumulators
    std::int64_t step_generated_ = 0;
    std::int64_t step_delivered_count_ = 0;
    std::int64_t step_delivered_bits_ = 0;
    std::int64_t step_cost_bits_ = 0;
    double step_delay_sum_ = 0.0;
    std::array<Tally, 3> step_drops_{};

    // per-episode accumulators
    Tally ep_generated_, ep_delivered_;
    std::array<Tally, 3> ep_dropped_{};
    std::int64_t ep_cost_bits_ = 0;
};

}  // namespace leodtn
