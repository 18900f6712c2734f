#ifndef GRAPHON_IO_HPP
#define GRAPHON_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "graphon/exploitability.hpp"
#include "graphon/metrics.hpp"
#include "graphon/sim.hpp"
#include "graphon/trainer.hpp"

namespace graphon {

// Every CSV starts with "# schema: <id>" so downstream tooling can check
// what it is reading.

void write_trajectory_csv(const std::string& path, const TimeGrid& grid, const Trajectory& traj);
void write_train_report_csv(const std::string& path, const TrainReport& report);
void write_utilities_csv(const std::string& path, const Eigen::VectorXd& labels,
                         const Eigen::VectorXd& y0, const Eigen::VectorXd& utility,
                         const std::vector<bool>& degenerate);
void write_metrics_csv(const std::string& path, const TimeGrid& grid,
                       const std::vector<GroupCurve>& curves);
void write_exploitability_csv(const std::string& path, const ExploitabilityReport& report);
void write_independence_csv(const std::string& path, const TimeGrid& grid,
                            const IndependenceReport& report);

/// One parsed CSV: schema id, column names, numeric rows.
struct CsvTable {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<std::string>> raw;  // same shape as rows

    int column_index(const std::string& name) const;  // -1 when absent
};

/// Throws IoError naming the offending line on malformed input.
CsvTable read_csv(const std::string& path);

/// FNV-1a 64-bit content hash, hex-encoded.
std::string file_hash(const std::string& path);

}  // namespace graphon

#endif
