#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "floq/gates.hpp"
#include "floq/lattice.hpp"
#include "floq/rng.hpp"

namespace floq {

// One-cycle drive parameters. theta_xx = theta_yy = -Jx T, theta_zz = -Jz T,
// theta_z = hz T; the couplings and period never enter separately.
struct FloquetParams {
    double theta_xx = 0.0;
    double theta_zz = 0.0;
    double theta_z = 0.0;
    int n_cycles = 0;

    bool isotropic() const { return theta_xx == theta_zz; }
};

// Product initial state |psi_j(0)> = R_Z(phi_j) H |0_j> with phi_j drawn
// independently and uniformly from [0, phi_max].
struct InitialStateSpec {
    double phi_max = 0.0;
    std::uint64_t seed = 0;
};

// phi_j = phi_max * u_j with u_j a counter-based uniform draw addressed by
// the site index, so a site's phase depends only on (seed, j) and scales
// linearly with phi_max across sweep grid points.
inline std::vector<double> sample_phases(const InitialStateSpec& spec, int num_sites) {
    if (spec.phi_max < 0) throw std::invalid_argument("phi_max must be >= 0");
    std::vector<double> phases(num_sites);
    for (int j = 0; j < num_sites; ++j) {
        phases[j] = spec.phi_max *
                    unit_uniform(spec.seed, RngStream::kInitialPhases, static_cast<std::uint32_t>(j), 0);
    }
    return phases;
}

struct BlochVector {
    double x = 0, y = 0, z = 0;
};

inline BlochVector initial_bloch(double phi) {
    return {std::cos(phi), std::sin(phi), 0.0};
}

struct GateOp {
    enum class Kind { SingleZ, Interaction };
    Kind kind = Kind::SingleZ;
    int a = 0;
    int b = -1;  // second site for interaction gates
};

// One Floquet cycle: the R_Z layer on every site, then the interaction
// layers in coloring order (edges within a layer have disjoint supports).
// The engines apply ops front to back, so R_Z acts on the state first.
struct FloquetProgram {
    int num_sites = 0;
    double theta_xx = 0.0;
    double theta_zz = 0.0;
    double theta_z = 0.0;
    std::vector<GateOp> ops;

    Eigen::Matrix2cd rz() const { return rz_matrix(theta_z); }
    Eigen::Matrix4cd rxxz() const { return rxxz_matrix(theta_xx, theta_zz); }
};

inline FloquetProgram build_program(const FloquetParams& params, const LatticeGraph& graph) {
    FloquetProgram prog;
    prog.num_sites = graph.num_sites;
    prog.theta_xx = params.theta_xx;
    prog.theta_zz = params.theta_zz;
    prog.theta_z = params.theta_z;
    prog.ops.reserve(graph.num_sites + graph.num_edges());
    for (int j = 0; j < graph.num_sites; ++j) {
        prog.ops.push_back({GateOp::Kind::SingleZ, j, -1});
    }
    for (int layer = 0; layer < graph.num_layers; ++layer) {
        for (int e = 0; e < graph.num_edges(); ++e) {
            if (graph.layer_of_edge[e] == layer) {
                prog.ops.push_back({GateOp::Kind::Interaction, graph.edges[e].first,
                                    graph.edges[e].second});
            }
        }
    }
    return prog;
}

}  // namespace floq
