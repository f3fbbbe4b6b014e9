#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "floq/floq.hpp"

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

floq::LatticeGraph load_graph_json(const std::string& path) {
    return floq::from_json(nlohmann::json::parse(read_text_file(path)));
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (!token.empty()) grid.push_back(std::stod(token));
    }
    return grid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"floq: Floquet spin dynamics and synchronization analysis on heavy-hex lattices"};
    app.require_subcommand(1);

    // --- lattice ---
    auto* lattice_cmd = app.add_subcommand("lattice", "generate or convert a lattice graph");
    std::string lattice_spec = "L19";
    std::string lattice_json_out, lattice_edges_out;
    lattice_cmd->add_option("--spec", lattice_spec,
                            "L19 | L28 | L156 | rows:R,cols:C[,offset:O] | prefix:SIZE:N | file:PATH");
    lattice_cmd->add_option("--json-out", lattice_json_out, "write graph JSON here");
    lattice_cmd->add_option("--edges-out", lattice_edges_out, "write edge-list text here");

    // --- run ---
    auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
    std::string run_config, run_manifest;
    run_cmd->add_option("--config", run_config, "key = value config file");
    run_cmd->add_option("--manifest", run_manifest, "rerun from a manifest.json instead");

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "kappa vs phi_max over a grid");
    std::string sweep_config, sweep_grid, sweep_out = "sweep.csv";
    sweep_cmd->add_option("--config", sweep_config, "base config file")->required();
    sweep_cmd->add_option("--grid", sweep_grid, "comma list of phi_max/pi values")->required();
    sweep_cmd->add_option("--out", sweep_out, "output CSV path");

    // --- analyze ---
    auto* analyze_cmd = app.add_subcommand("analyze", "recompute reports from a trajectory CSV");
    std::string an_traj, an_graph, an_out_dir = ".", an_subset = "all", an_window = "20:25";
    int an_k = 4;
    std::string an_variant = "both";
    analyze_cmd->add_option("--trajectory", an_traj, "trajectory CSV")->required();
    analyze_cmd->add_option("--graph", an_graph, "graph JSON (enables the local map)");
    analyze_cmd->add_option("--out-dir", an_out_dir, "output directory");
    analyze_cmd->add_option("--subset", an_subset, "site subset, e.g. all or 0-15");
    analyze_cmd->add_option("--k", an_k, "neighborhood radius for the local map");
    analyze_cmd->add_option("--window", an_window, "averaging window first:last");
    analyze_cmd->add_option("--variant", an_variant, "exact | proxy | both");

    // --- snapshot ---
    auto* snap_cmd = app.add_subcommand("snapshot", "render a vector-field SVG at one step");
    std::string sn_traj, sn_graph, sn_out = "snapshot.svg";
    int sn_step = 0;
    snap_cmd->add_option("--trajectory", sn_traj, "trajectory CSV (must carry Y data)")->required();
    snap_cmd->add_option("--graph", sn_graph, "graph JSON")->required();
    snap_cmd->add_option("--step", sn_step, "stroboscopic step")->required();
    snap_cmd->add_option("--out", sn_out, "output SVG path");

    // --- emulate ---
    auto* emu_cmd = app.add_subcommand("emulate", "apply shot noise + mitigation to an ideal trajectory");
    std::string em_traj, em_out_dir = ".", em_subset = "all";
    double em_q = 0.95;
    long em_shots = 8192;
    std::uint64_t em_seed = 0;
    emu_cmd->add_option("--trajectory", em_traj, "ideal trajectory CSV")->required();
    emu_cmd->add_option("--q", em_q, "per-cycle depolarizing attenuation in (0, 1]");
    emu_cmd->add_option("--shots", em_shots, "projective measurements per circuit");
    emu_cmd->add_option("--seed", em_seed, "measurement sampling seed");
    emu_cmd->add_option("--out-dir", em_out_dir, "output directory");
    emu_cmd->add_option("--subset", em_subset, "reference-factor subset M");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*lattice_cmd) {
            const floq::LatticeGraph graph = floq::build_lattice(lattice_spec);
            std::cout << "lattice '" << lattice_spec << "': " << graph.num_sites << " sites, "
                      << graph.num_edges() << " edges, " << graph.num_layers << " layers\n";
            if (!lattice_json_out.empty()) {
                floq::write_file_atomic(lattice_json_out, floq::to_json(graph).dump(2) + "\n");
                std::cout << "wrote " << lattice_json_out << "\n";
            }
            if (!lattice_edges_out.empty()) {
                floq::write_file_atomic(lattice_edges_out, floq::to_edge_list(graph));
                std::cout << "wrote " << lattice_edges_out << "\n";
            }
        } else if (*run_cmd) {
            floq::ExperimentConfig cfg;
            if (!run_config.empty()) {
                cfg = floq::load_config(run_config);
            } else if (!run_manifest.empty()) {
                cfg = floq::config_from_json(
                    nlohmann::json::parse(read_text_file(run_manifest)).at("config"));
            } else {
                std::cerr << "run needs --config or --manifest\n";
                return 1;
            }
            floq::run_experiment(cfg, std::cout);
        } else if (*sweep_cmd) {
            const floq::ExperimentConfig cfg = floq::load_config(sweep_config);
            const auto rows = floq::sweep_phimax(cfg, parse_grid(sweep_grid), std::cout);
            std::ostringstream out;
            floq::write_sweep_csv(out, rows);
            floq::write_file_atomic(sweep_out, out.str());
            std::cout << "wrote " << sweep_out << "\n";
        } else if (*analyze_cmd) {
            std::ifstream in(an_traj);
            if (!in) throw std::runtime_error("cannot open '" + an_traj + "'");
            const floq::TrajectoryRecord record = floq::read_trajectory_csv(in);
            std::filesystem::create_directories(an_out_dir);
            const auto subset = floq::resolve_subset(an_subset, record.num_sites);
            {
                std::ostringstream out;
                floq::write_sync_report_csv(out, floq::build_sync_report(record, subset));
                floq::write_file_atomic(std::filesystem::path(an_out_dir) / "sync_report.csv",
                                        out.str());
                std::cout << "wrote " << an_out_dir << "/sync_report.csv\n";
            }
            if (!an_graph.empty()) {
                const floq::LatticeGraph graph = load_graph_json(an_graph);
                const auto colon = an_window.find(':');
                const floq::StepWindow window{std::stoi(an_window.substr(0, colon)),
                                              std::stoi(an_window.substr(colon + 1))};
                auto emit_map = [&](floq::PhaseVariant variant, const std::string& name) {
                    std::ostringstream out;
                    floq::write_local_map_csv(
                        out, graph, floq::local_kappa_map(record, graph, an_k, window, variant));
                    floq::write_file_atomic(std::filesystem::path(an_out_dir) / name, out.str());
                    std::cout << "wrote " << an_out_dir << "/" << name << "\n";
                };
                if ((an_variant == "exact" || an_variant == "both") && record.has_y()) {
                    emit_map(floq::PhaseVariant::Exact, "local_map_exact.csv");
                }
                if (an_variant == "proxy" || an_variant == "both") {
                    emit_map(floq::PhaseVariant::Proxy, "local_map_proxy.csv");
                }
            }
        } else if (*snap_cmd) {
            std::ifstream in(sn_traj);
            if (!in) throw std::runtime_error("cannot open '" + sn_traj + "'");
            const floq::TrajectoryRecord record = floq::read_trajectory_csv(in);
            const floq::LatticeGraph graph = load_graph_json(sn_graph);
            floq::write_file_atomic(sn_out, floq::snapshot_svg(record, graph, sn_step));
            std::cout << "wrote " << sn_out << "\n";
        } else if (*emu_cmd) {
            std::ifstream in(em_traj);
            if (!in) throw std::runtime_error("cannot open '" + em_traj + "'");
            const floq::TrajectoryRecord ideal = floq::read_trajectory_csv(in);
            std::filesystem::create_directories(em_out_dir);
            const auto subset = floq::resolve_subset(em_subset, ideal.num_sites);
            const floq::NoisyRecord noisy = floq::emulate_measurement(ideal, em_q, em_shots, em_seed);
            const floq::NoisyRecord ref = floq::emulate_measurement(
                floq::unit_reference_record(ideal.num_steps(), ideal.num_sites), em_q, em_shots,
                em_seed + 1);
            const floq::MitigationFactors factors = floq::reference_factor(ref, subset);
            const floq::MitigatedRecord mitigated = floq::mitigate(noisy, factors);
            auto emit = [&](const std::string& name, const std::string& content) {
                floq::write_file_atomic(std::filesystem::path(em_out_dir) / name, content);
                std::cout << "wrote " << em_out_dir << "/" << name << "\n";
            };
            std::ostringstream raw_out, fac_out, mit_out;
            floq::write_noisy_csv(raw_out, noisy.record);
            floq::write_factors_csv(fac_out, factors);
            floq::write_noisy_csv(mit_out, mitigated.record, &mitigated.flags);
            emit("noisy.csv", raw_out.str());
            emit("factors.csv", fac_out.str());
            emit("mitigated.csv", mit_out.str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
