#pragma once

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "floq/circuit.hpp"
#include "floq/lattice.hpp"
#include "floq/mps.hpp"
#include "floq/statevector.hpp"

namespace floq {

// Stroboscopic per-site expectation values over cycles n = 0..n_max.
// y and stderr columns are optional: engines fill x and y; measurement
// emulation fills x and stderr.
struct TrajectoryRecord {
    int num_sites = 0;
    std::vector<std::vector<double>> x;       // [step][site]
    std::vector<std::vector<double>> y;       // empty when absent
    std::vector<std::vector<double>> stddev;  // per-entry standard errors, empty when absent

    int num_steps() const { return static_cast<int>(x.size()); }
    bool has_y() const { return !y.empty(); }
    bool has_stderr() const { return !stddev.empty(); }

    void require_rectangular() const {
        for (const auto& row : x) {
            if (static_cast<int>(row.size()) != num_sites) {
                throw std::runtime_error("trajectory record is not rectangular");
            }
        }
        if (has_y() && y.size() != x.size()) {
            throw std::runtime_error("trajectory record y series length mismatch");
        }
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// CSV with header "n,j,x,y"; the y column is left empty when absent.
inline void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec) {
    out << "n,j,x,y\n";
    for (int n = 0; n < rec.num_steps(); ++n) {
        for (int j = 0; j < rec.num_sites; ++j) {
            out << n << ',' << j << ',' << detail::format_double(rec.x[n][j]) << ',';
            if (rec.has_y()) out << detail::format_double(rec.y[n][j]);
            out << '\n';
        }
    }
}

inline TrajectoryRecord read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trajectory CSV");
    std::map<std::pair<int, int>, std::pair<double, double>> cells;
    bool any_y = false;
    int max_n = -1, max_j = -1;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() < 3) {
            throw std::runtime_error("trajectory CSV line " + std::to_string(lineno) +
                                     ": expected n,j,x[,y]");
        }
        const int n = std::stoi(fields[0]);
        const int j = std::stoi(fields[1]);
        const double xv = std::stod(fields[2]);
        double yv = 0.0;
        bool has_yv = fields.size() > 3 && !fields[3].empty();
        if (has_yv) {
            yv = std::stod(fields[3]);
            any_y = true;
        }
        cells[{n, j}] = {xv, yv};
        max_n = std::max(max_n, n);
        max_j = std::max(max_j, j);
    }
    if (max_n < 0) throw std::runtime_error("trajectory CSV has no data rows");
    TrajectoryRecord rec;
    rec.num_sites = max_j + 1;
    rec.x.assign(max_n + 1, std::vector<double>(max_j + 1, 0.0));
    if (any_y) rec.y.assign(max_n + 1, std::vector<double>(max_j + 1, 0.0));
    std::size_t filled = 0;
    for (const auto& [key, val] : cells) {
        rec.x[key.first][key.second] = val.first;
        if (any_y) rec.y[key.first][key.second] = val.second;
        ++filled;
    }
    if (filled != static_cast<std::size_t>((max_n + 1)) * (max_j + 1)) {
        throw std::runtime_error("trajectory CSV is missing (n, j) entries");
    }
    return rec;
}

// Entropy side channel: CSV with header "n,svn".
inline void write_entropy_csv(std::ostream& out, const std::vector<double>& svn) {
    out << "n,svn\n";
    for (std::size_t n = 0; n < svn.size(); ++n) {
        out << n << ',' << detail::format_double(svn[n]) << '\n';
    }
}

struct TrajectoryResult {
    TrajectoryRecord record;
    std::vector<double> entropy;  // per step, only if a subsystem was requested
};

// Exact statevector trajectory: records <X_j>, <Y_j> at every stroboscopic
// step n = 0..n_cycles, plus S_vN of `entropy_subsystem` when given.
inline TrajectoryResult run_trajectory(const LatticeGraph& graph, const FloquetParams& params,
                                       const InitialStateSpec& init,
                                       const std::vector<int>* entropy_subsystem = nullptr,
                                       int capacity_limit = StateVector::kDefaultLimit) {
    const auto phases = sample_phases(init, graph.num_sites);
    StateVector psi = init_product(phases, capacity_limit);
    const FloquetProgram prog = build_program(params, graph);

    TrajectoryResult result;
    auto& rec = result.record;
    rec.num_sites = graph.num_sites;
    for (int n = 0; n <= params.n_cycles; ++n) {
        if (n > 0) apply_program(psi, prog);
        std::vector<double> xs(graph.num_sites), ys(graph.num_sites);
        for (int j = 0; j < graph.num_sites; ++j) {
            xs[j] = psi.expect_pauli(Pauli::X, j);
            ys[j] = psi.expect_pauli(Pauli::Y, j);
        }
        rec.x.push_back(std::move(xs));
        rec.y.push_back(std::move(ys));
        if (entropy_subsystem != nullptr) {
            result.entropy.push_back(entropy_bits(reduce(psi, *entropy_subsystem)));
        }
    }
    return result;
}

// Per-cycle truncation diagnostics of an MPS run.
struct MpsDiagnostics {
    std::vector<int> max_bond_dim;             // after cycle n
    std::vector<double> cycle_truncation;      // discarded relative weight in cycle n
};

struct MpsTrajectoryResult {
    TrajectoryRecord record;
    MpsDiagnostics diagnostics;
    std::vector<int> ordering;
};

inline void write_diagnostics_csv(std::ostream& out, const MpsDiagnostics& diag) {
    out << "n,max_bond_dim,cycle_truncation_weight\n";
    for (std::size_t n = 0; n < diag.max_bond_dim.size(); ++n) {
        out << n << ',' << diag.max_bond_dim[n] << ','
            << detail::format_double(diag.cycle_truncation[n]) << '\n';
    }
}

// MPS trajectory for large lattices; same record layout as the statevector
// engine plus bond/truncation diagnostics.
inline MpsTrajectoryResult run_trajectory_mps(const LatticeGraph& graph, const FloquetParams& params,
                                              const InitialStateSpec& init, int chi,
                                              double cutoff = 1e-10) {
    const auto phases = sample_phases(init, graph.num_sites);
    MpsOptions options{chi, cutoff};
    MpsState state(phases, choose_ordering(graph), options);
    const FloquetProgram prog = build_program(params, graph);

    MpsTrajectoryResult result;
    result.ordering = state.ordering();
    auto& rec = result.record;
    rec.num_sites = graph.num_sites;
    double truncation_before = 0.0;
    for (int n = 0; n <= params.n_cycles; ++n) {
        if (n > 0) apply_program_mps(state, prog);
        std::vector<double> xs, ys;
        state.expect_xy_all(xs, ys);
        rec.x.push_back(std::move(xs));
        rec.y.push_back(std::move(ys));
        result.diagnostics.max_bond_dim.push_back(state.max_bond_dim());
        result.diagnostics.cycle_truncation.push_back(state.cumulative_truncation() - truncation_before);
        truncation_before = state.cumulative_truncation();
    }
    return result;
}

}  // namespace floq
