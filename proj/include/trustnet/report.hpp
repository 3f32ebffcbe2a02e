#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "trustnet/error.hpp"
#include "trustnet/scenario.hpp"
#include "trustnet/sim.hpp"

namespace trustnet {

inline std::string format_fixed(double v, int precision = 6) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

// round,node_id,cluster_id,rolling_average,count,is_coordinator
inline std::string trust_timeseries_csv(const SimulationReport& report) {
    std::string out = "round,node_id,cluster_id,rolling_average,count,is_coordinator\n";
    for (const auto& row : report.trust_table) {
        out += std::to_string(row.round) + ',' + row.node + ',' + row.cluster + ',';
        out += row.rolling_average ? format_fixed(*row.rolling_average) : "nan";
        out += ',' + std::to_string(row.count) + ',' + (row.is_coordinator ? "1" : "0") + '\n';
    }
    return out;
}

// round,task_id,status,workers  (workers joined with ';')
inline std::string task_log_csv(const SimulationReport& report) {
    std::string out = "round,task_id,status,workers\n";
    for (const auto& task : report.task_log) {
        out += std::to_string(task.round) + ',' + task.task_id + ',';
        out += std::string(to_string(task.status)) + ',';
        for (std::size_t i = 0; i < task.workers.size(); ++i) {
            if (i) out += ';';
            out += task.workers[i];
        }
        out += '\n';
    }
    return out;
}

// Coordinator changes only; the full per-round view lives in the timeseries.
inline std::map<ClusterId, std::vector<CoordinatorSample>> coordinator_transitions(
    const SimulationReport& report) {
    std::map<ClusterId, std::vector<CoordinatorSample>> out;
    for (const auto& sample : report.coordinator_timeline) {
        auto& history = out[sample.cluster];
        if (history.empty() || history.back().node != sample.node ||
            history.back().bootstrap != sample.bootstrap)
            history.push_back(sample);
    }
    return out;
}

inline json summary_json(const SimulationReport& report) {
    json summary;
    summary["seed"] = report.seed;
    summary["rounds"] = report.config.sim.rounds;

    json final = json::object();
    for (const auto& [node, count] : report.final_count) {
        json entry;
        entry["count"] = count;
        auto it = report.final_rolling.find(node);
        entry["rolling_average"] =
            it != report.final_rolling.end() ? json(it->second) : json(nullptr);
        final[node] = std::move(entry);
    }
    summary["final"] = std::move(final);

    json coordinators = json::object();
    json final_coordinators = json::object();
    for (const auto& [cluster, history] : coordinator_transitions(report)) {
        json events = json::array();
        for (const auto& sample : history)
            events.push_back(json{{"round", sample.round},
                                  {"node", sample.node},
                                  {"bootstrap", sample.bootstrap}});
        coordinators[cluster] = std::move(events);
        if (!history.empty())
            final_coordinators[cluster] = json{{"node", history.back().node},
                                               {"bootstrap", history.back().bootstrap}};
    }
    summary["coordinators"] = std::move(coordinators);
    summary["final_coordinators"] = std::move(final_coordinators);

    summary["rank_correlation"] =
        std::isnan(report.rank_correlation) ? json(nullptr) : json(report.rank_correlation);
    summary["replica_divergence_total"] = report.total_divergence();
    summary["evaluations"] = report.evaluations.size();
    summary["fallback_entries"] = report.fallback_entries;

    std::size_t assigned = 0, refused = 0, routing = 0;
    for (const auto& task : report.task_log) {
        switch (task.status) {
            case TaskStatus::Assigned: ++assigned; break;
            case TaskStatus::Refused: ++refused; break;
            case TaskStatus::RoutingError: ++routing; break;
        }
    }
    summary["tasks"] =
        json{{"assigned", assigned}, {"refused", refused}, {"routing_error", routing}};

    summary["config"] = report.config;
    return summary;
}

struct ReportBundle {
    std::filesystem::path trust_timeseries;
    std::filesystem::path task_log;
    std::filesystem::path summary;
};

inline ReportBundle write_report_bundle(const SimulationReport& report,
                                        const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto write = [](const std::filesystem::path& path, const std::string& content) {
        std::ofstream stream(path, std::ios::binary);
        if (!stream) throw error("cannot write '" + path.string() + "'");
        stream << content;
    };
    ReportBundle bundle{out_dir / "trust_timeseries.csv", out_dir / "task_log.csv",
                        out_dir / "summary.json"};
    write(bundle.trust_timeseries, trust_timeseries_csv(report));
    write(bundle.task_log, task_log_csv(report));
    write(bundle.summary, summary_json(report).dump(2) + "\n");
    return bundle;
}

inline void print_summary(const SimulationReport& report, std::ostream& out) {
    out << "seed: " << report.seed << "\n";
    out << "rounds: " << report.config.sim.rounds << "\n";
    out << "evaluations: " << report.evaluations.size() << "\n";
    out << "replica divergence: " << report.total_divergence() << "\n";
    out << "rank correlation (reliability vs trust): "
        << (std::isnan(report.rank_correlation) ? "n/a" : format_fixed(report.rank_correlation))
        << "\n";
    out << "final coordinators:\n";
    for (const auto& [cluster, history] : coordinator_transitions(report))
        if (!history.empty())
            out << "  " << cluster << ": " << history.back().node
                << (history.back().bootstrap ? " (bootstrap)" : "") << "\n";
    std::size_t assigned = 0, refused = 0, routing = 0;
    for (const auto& task : report.task_log) {
        switch (task.status) {
            case TaskStatus::Assigned: ++assigned; break;
            case TaskStatus::Refused: ++refused; break;
            case TaskStatus::RoutingError: ++routing; break;
        }
    }
    out << "tasks: " << assigned << " assigned, " << refused << " refused, " << routing
        << " routing errors\n";
}

} // namespace trustnet
