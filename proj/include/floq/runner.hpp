#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "floq/analysis.hpp"
#include "floq/config.hpp"
#include "floq/noise.hpp"
#include "floq/svg.hpp"
#include "floq/trajectory.hpp"
#include "floq/version.hpp"

namespace floq {

// Write-to-temp-then-rename so partially written files never appear under
// their final name.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

struct RunOutputs {
    std::filesystem::path dir;
    std::vector<std::string> files;
};

// Run one experiment end to end and write every artifact into the output
// directory: trajectory CSV (plus entropy CSV when requested), sync-report
// CSV, local-map CSV, MPS diagnostics, the noise/mitigation pipeline when
// enabled, snapshot SVGs, and a manifest echoing the resolved configuration
// so the run can be reproduced byte for byte.
inline RunOutputs run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    const LatticeGraph graph = build_lattice(cfg.lattice);
    const FloquetParams params{cfg.theta_xx(), cfg.theta_zz(), cfg.theta_z(), cfg.n_cycles};
    const InitialStateSpec init{cfg.phi_max(), cfg.seed};

    RunOutputs outputs;
    outputs.dir = cfg.output_dir;
    std::filesystem::create_directories(outputs.dir);
    auto emit = [&](const std::string& name, const std::string& content) {
        write_file_atomic(outputs.dir / name, content);
        outputs.files.push_back(name);
        log << "wrote " << (outputs.dir / name).string() << "\n";
    };

    TrajectoryRecord record;
    std::vector<double> entropy;
    MpsDiagnostics diagnostics;
    if (cfg.backend == "statevector") {
        const int limit = cfg.allow_large_statevector ? StateVector::kHardLimit
                                                      : StateVector::kDefaultLimit;
        const std::vector<int>* subsystem =
            cfg.entropy_subsystem.empty() ? nullptr : &cfg.entropy_subsystem;
        auto result = run_trajectory(graph, params, init, subsystem, limit);
        record = std::move(result.record);
        entropy = std::move(result.entropy);
    } else {
        if (!cfg.entropy_subsystem.empty()) {
            throw ConfigError("entropy_subsystem is only supported by the statevector backend");
        }
        auto result = run_trajectory_mps(graph, params, init, cfg.chi, cfg.cutoff);
        record = std::move(result.record);
        diagnostics = std::move(result.diagnostics);
    }

    {
        std::ostringstream out;
        write_trajectory_csv(out, record);
        emit("trajectory.csv", out.str());
    }
    if (!entropy.empty()) {
        std::ostringstream out;
        write_entropy_csv(out, entropy);
        emit("entropy.csv", out.str());
    }
    if (cfg.backend == "mps") {
        std::ostringstream out;
        write_diagnostics_csv(out, diagnostics);
        emit("diagnostics.csv", out.str());
    }

    const std::vector<int> subset = resolve_subset(cfg.subset, graph.num_sites);
    {
        std::ostringstream out;
        write_sync_report_csv(out, build_sync_report(record, subset));
        emit("sync_report.csv", out.str());
    }
    if (cfg.window_last <= cfg.n_cycles) {
        const StepWindow window{cfg.window_first, cfg.window_last};
        if (cfg.variant == "exact" || cfg.variant == "both") {
            std::ostringstream out;
            write_local_map_csv(out, graph,
                                local_kappa_map(record, graph, cfg.neighborhood_k, window,
                                                PhaseVariant::Exact));
            emit("local_map_exact.csv", out.str());
        }
        if ((cfg.variant == "proxy" || cfg.variant == "both") && record.num_steps() >= 8) {
            std::ostringstream out;
            write_local_map_csv(out, graph,
                                local_kappa_map(record, graph, cfg.neighborhood_k, window,
                                                PhaseVariant::Proxy));
            emit("local_map_proxy.csv", out.str());
        }
    }

    if (cfg.noise_q) {
        const NoisyRecord noisy = emulate_measurement(record, *cfg.noise_q, cfg.noise_shots,
                                                      cfg.noise_seed);
        const TrajectoryRecord ref_ideal = unit_reference_record(record.num_steps(), record.num_sites);
        const NoisyRecord ref_noisy = emulate_measurement(ref_ideal, *cfg.noise_q, cfg.noise_shots,
                                                          cfg.noise_seed + 1);
        const MitigationFactors factors = reference_factor(ref_noisy, subset);
        const MitigatedRecord mitigated = mitigate(noisy, factors);
        {
            std::ostringstream out;
            write_noisy_csv(out, noisy.record);
            emit("noisy.csv", out.str());
        }
        {
            std::ostringstream out;
            write_factors_csv(out, factors);
            emit("factors.csv", out.str());
        }
        {
            std::ostringstream out;
            write_noisy_csv(out, mitigated.record, &mitigated.flags);
            emit("mitigated.csv", out.str());
        }
        if (mitigated.record.num_steps() >= 8) {
            std::ostringstream out;
            write_sync_report_csv(out, build_sync_report(mitigated.record, subset));
            emit("sync_report_mitigated.csv", out.str());
        }
    }

    for (int step : cfg.snapshot_steps) {
        std::ostringstream name;
        name << "snapshot_" << step << ".svg";
        emit(name.str(), snapshot_svg(record, graph, step));
    }

    {
        nlohmann::json manifest;
        manifest["version"] = kVersion;
        manifest["config"] = config_to_json(cfg);
        manifest["num_sites"] = graph.num_sites;
        manifest["num_edges"] = graph.num_edges();
        manifest["outputs"] = outputs.files;
        write_file_atomic(outputs.dir / "manifest.json", manifest.dump(2) + "\n");
        log << "wrote " << (outputs.dir / "manifest.json").string() << "\n";
    }
    return outputs;
}

// One row per phi_max grid point: the final-step global order parameter.
// The same phase-sampling seed is used at every grid point, so phases scale
// with phi_max and the comparison isolates the randomness amplitude.
struct SweepRow {
    double phi_max_over_pi = 0.0;
    double kappa_final = 0.0;
};

inline std::vector<SweepRow> sweep_phimax(const ExperimentConfig& base,
                                          const std::vector<double>& grid_over_pi,
                                          std::ostream& log) {
    if (grid_over_pi.empty()) throw ConfigError("sweep grid must be nonempty");
    const LatticeGraph graph = build_lattice(base.lattice);
    const std::vector<int> subset = resolve_subset(base.subset, graph.num_sites);
    std::vector<SweepRow> rows;
    for (double phi_over_pi : grid_over_pi) {
        ExperimentConfig cfg = base;
        cfg.phi_max_over_pi = phi_over_pi;
        const FloquetParams params{cfg.theta_xx(), cfg.theta_zz(), cfg.theta_z(), cfg.n_cycles};
        const InitialStateSpec init{cfg.phi_max(), cfg.seed};
        TrajectoryRecord record;
        if (cfg.backend == "statevector") {
            const int limit = cfg.allow_large_statevector ? StateVector::kHardLimit
                                                          : StateVector::kDefaultLimit;
            record = run_trajectory(graph, params, init, nullptr, limit).record;
        } else {
            record = run_trajectory_mps(graph, params, init, cfg.chi, cfg.cutoff).record;
        }
        const auto kappa = exact_kappa(record, subset).kappa;
        rows.push_back({phi_over_pi, kappa.back()});
        log << "phi_max/pi = " << phi_over_pi << " -> kappa(final) = " << kappa.back() << "\n";
    }
    return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "phi_max_over_pi,kappa\n";
    for (const auto& row : rows) {
        out << detail::format_double(row.phi_max_over_pi) << ','
            << detail::format_double(row.kappa_final) << '\n';
    }
}

}  // namespace floq
