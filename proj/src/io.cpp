#include "graphon/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& schema, const std::string& header)
        : out_(path) {
        if (!out_) throw IoError("cannot open for writing: " + path);
        out_ << "# schema: " << schema << "\n" << header << "\n";
    }

    // Shortest round-trippable decimal representation keeps files
    // byte-deterministic across runs.
    void field(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (!first_) out_ << ',';
        out_ << buf;
        first_ = false;
    }

    void field(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
    }

    void field(long v) {
        if (!first_) out_ << ',';
        out_ << v;
        first_ = false;
    }

    void endrow() {
        out_ << '\n';
        first_ = true;
    }

private:
    std::ofstream out_;
    bool first_ = true;
};

}  // namespace

void write_trajectory_csv(const std::string& path, const TimeGrid& grid, const Trajectory& traj) {
    CsvWriter w(path, "trajectory-v1", "particle,label,t,X,Y,Z,pi,mean_field");
    const int m = static_cast<int>(traj.labels.size());
    const int steps = static_cast<int>(traj.z.cols());
    for (int i = 0; i < m; ++i) {
        for (int n = 0; n <= steps; ++n) {
            w.field(static_cast<long>(i));
            w.field(traj.labels(i));
            w.field(grid.nodes[n]);
            w.field(traj.x(i, n));
            w.field(traj.y(i, n));
            // Z, pi and the interaction term live on step intervals.
            w.field(n < steps ? traj.z(i, n) : 0.0);
            w.field(n < steps ? traj.pi(i, n) : 0.0);
            w.field(n < steps ? traj.mf(i, n) : 0.0);
            w.endrow();
        }
    }
}

void write_train_report_csv(const std::string& path, const TrainReport& report) {
    CsvWriter w(path, "train-report-v1", "iteration,train_loss,val_loss,val_rel_error");
    for (const auto& pt : report.history) {
        w.field(static_cast<long>(pt.iteration));
        w.field(pt.train_loss);
        w.field(pt.val_loss);
        w.field(pt.val_rel_error_pct);
        w.endrow();
    }
}

void write_utilities_csv(const std::string& path, const Eigen::VectorXd& labels,
                         const Eigen::VectorXd& y0, const Eigen::VectorXd& utility,
                         const std::vector<bool>& degenerate) {
    CsvWriter w(path, "utilities-v1", "label,Y0,utility,degenerate");
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        w.field(labels(i));
        w.field(y0(i));
        w.field(degenerate[i] ? 0.0 : utility(i));
        w.field(static_cast<long>(degenerate[i] ? 1 : 0));
        w.endrow();
    }
}

void write_metrics_csv(const std::string& path, const TimeGrid& grid,
                       const std::vector<GroupCurve>& curves) {
    CsvWriter w(path, "metrics-v1",
                "group,t,mean_X,se_X,mean_benchmarked_X,se_benchmarked_X,mean_Z,se_Z");
    const int steps = static_cast<int>(grid.steps());
    for (const auto& c : curves) {
        if (!c.present) continue;  // empty groups are absent, not zero
        for (int n = 0; n <= steps; ++n) {
            w.field(c.group);
            w.field(grid.nodes[n]);
            w.field(c.mean_x(n));
            w.field(c.se_x(n));
            w.field(c.mean_bench(n));
            w.field(c.se_bench(n));
            w.field(n < steps ? c.mean_z(n) : 0.0);
            w.field(n < steps ? c.se_z(n) : 0.0);
            w.endrow();
        }
    }
}

void write_exploitability_csv(const std::string& path, const ExploitabilityReport& report) {
    CsvWriter w(path, "exploitability-v1", "label,V_eq,V_br,gap");
    for (Eigen::Index i = 0; i < report.labels.size(); ++i) {
        w.field(report.labels(i));
        w.field(report.v_eq(i));
        w.field(report.v_br(i));
        w.field(report.gap(i));
        w.endrow();
    }
    w.field(std::string("average"));
    w.field(0.0);
    w.field(0.0);
    w.field(report.average);
    w.endrow();
}

void write_independence_csv(const std::string& path, const TimeGrid& grid,
                            const IndependenceReport& report) {
    CsvWriter w(path, "independence-v1", "node,t,quantity,diff,combined_se");
    for (const auto& f : report.flags) {
        w.field(static_cast<long>(f.node));
        w.field(grid.nodes[f.node]);
        w.field(f.quantity);
        w.field(f.diff);
        w.field(f.combined_se);
        w.endrow();
    }
}

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    CsvTable table;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string prefix = "# schema: ";
            if (line.rfind(prefix, 0) == 0) table.schema = line.substr(prefix.size());
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header_seen) {
            while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
            if (table.columns.empty())
                throw IoError(path + ":" + std::to_string(lineno) + ": empty header");
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        std::vector<std::string> raw;
        while (std::getline(ss, cell, ',')) {
            raw.push_back(cell);
            // Non-numeric cells (group names) parse as 0; callers needing the
            // text read `raw` instead.
            try {
                std::size_t pos = 0;
                const double v = cell.empty() ? 0.0 : std::stod(cell, &pos);
                row.push_back(cell.empty() || pos != cell.size() ? 0.0 : v);
            } catch (const std::exception&) {
                row.push_back(0.0);
            }
        }
        if (row.size() != table.columns.size())
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(table.columns.size()) + " fields, got " +
                          std::to_string(row.size()));
        table.rows.push_back(std::move(row));
        table.raw.push_back(std::move(raw));
    }
    return table;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot hash missing file: " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016" PRIx64, h);
    return hex;
}

}  // namespace graphon
