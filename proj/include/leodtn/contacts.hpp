#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leodtn/orbits.hpp"

namespace leodtn {

/// A directed transmission opportunity. The rate recorded here is the nominal
/// radio rate at generation time; the simulator always reads the sender's
/// live rate instead, since agent actions change rates mid-plan.
struct Contact {
    int from = -1;
    int to = -1;
    double start_s = 0.0;
    double end_s = 0.0;
    double range_km = 0.0;
    double rate_bps = 0.0;

    double owlt() const { return range_km / kSpeedOfLightKmS; }
    double duration() const { return end_s - start_s; }
};

struct ContactPlan {
    std::vector<Contact> contacts;
    double horizon_start = 0.0;
    double horizon_end = 0.0;
    int num_nodes = 0;

    // contact indices grouped by sending node; rebuilt after any edit
    std::vector<std::vector<int>> by_from;

    void rebuild_index() {
        int n = num_nodes;
        for (const Contact& c : contacts) n = std::max({n, c.from + 1, c.to + 1});
        num_nodes = n;
        by_from.assign(n, {});
        for (int i = 0; i < static_cast<int>(contacts.size()); ++i)
            by_from[contacts[i].from].push_back(i);
    }
};

struct VisibilityParams {
    double max_range_km = 6000.0;
    double grazing_altitude_km = 100.0;
    double sample_dt_s = 10.0;
    double nominal_rate_bps = 500.0;
};

/// Sample the orbits over [t0, t1] at dt and turn maximal visible runs into
/// contact windows. Window = [first visible sample, last visible sample + dt],
/// clipped to the horizon; directed both ways with identical windows.
inline ContactPlan generate_contact_plan(const std::vector<OrbitalElements>& elements, double t0,
                                         double t1, const VisibilityParams& vis) {
    if (t0 >= t1) throw std::invalid_argument("generate_contact_plan: t0 must be < t1");
    if (vis.sample_dt_s <= 0.0) throw std::invalid_argument("generate_contact_plan: dt must be > 0");

    const int n = static_cast<int>(elements.size());
    const double dt = vis.sample_dt_s;

    const int num_samples = static_cast<int>(std::floor((t1 - t0) / dt)) + 1;
    std::vector<std::vector<Vec3>> pos(n, std::vector<Vec3>(num_samples));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < num_samples; ++k)
            pos[i][k] = propagate(elements[i], t0 + k * dt);

    ContactPlan plan;
    plan.horizon_start = t0;
    plan.horizon_end = t1;
    plan.num_nodes = n;

    struct Run {
        int first = -1, last = -1;
        double range_sum = 0.0;
    };

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Run run;
            auto flush = [&](const Run& r) {
                if (r.first < 0) return;
                double start = t0 + r.first * dt;
                double end = std::min(t0 + r.last * dt + dt, t1);
                if (start >= end) return;
                double mean_range = r.range_sum / (r.last - r.first + 1);
                plan.contacts.push_back({i, j, start, end, mean_range, vis.nominal_rate_bps});
                plan.contacts.push_back({j, i, start, end, mean_range, vis.nominal_rate_bps});
            };
            for (int k = 0; k < num_samples; ++k) {
                double range = (pos[i][k] - pos[j][k]).norm();
                bool visible = range <= vis.max_range_km &&
                               line_of_sight(pos[i][k], pos[j][k], vis.grazing_altitude_km);
                if (visible) {
                    if (run.first < 0) run.first = k;
                    run.last = k;
                    run.range_sum += range;
                } else if (run.first >= 0) {
                    flush(run);
                    run = Run{};
                }
            }
            flush(run);
        }
    }

    std::sort(plan.contacts.begin(), plan.contacts.end(), [](const Contact& a, const Contact& b) {
        if (a.start_s != b.start_s) return a.start_s < b.start_s;
        if (a.from != b.from) return a.from < b.from;
        return a.to < b.to;
    });
    plan.rebuild_index();
    return plan;
}

inline ContactPlan generate_contact_plan(const ConstellationSpec& spec, double t0, double t1,
                                         const VisibilityParams& vis) {
    return generate_contact_plan(build_walker_delta(spec), t0, t1, vis);
}

// ---- contact plan text format -------------------------------------------
//
//   # contactplan v1
//   from_id to_id start_s end_s range_km
//
// Space separated, times with up to 3 decimals.

inline void save_contact_plan(const ContactPlan& plan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_contact_plan: cannot open " + path);
    out << "# contactplan v1\n";
    char line[160];
    for (const Contact& c : plan.contacts) {
        std::snprintf(line, sizeof(line), "%d %d %.3f %.3f %.3f\n", c.from, c.to, c.start_s,
                      c.end_s, c.range_km);
        out << line;
    }
}

inline ContactPlan load_contact_plan(const std::string& path, double horizon_start,
                                     double horizon_end, double nominal_rate_bps = 500.0) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_contact_plan: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header.rfind("# contactplan v1", 0) != 0)
        throw std::runtime_error("load_contact_plan: missing '# contactplan v1' header in " + path);

    ContactPlan plan;
    plan.horizon_start = horizon_start;
    plan.horizon_end = horizon_end;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        Contact c;
        if (!(ss >> c.from >> c.to >> c.start_s >> c.end_s >> c.range_km))
            throw std::runtime_error("load_contact_plan: malformed line: " + line);
        c.rate_bps = nominal_rate_bps;
        plan.contacts.push_back(c);
    }
    plan.rebuild_index();
    return plan;
}

}  // namespace leodtn
