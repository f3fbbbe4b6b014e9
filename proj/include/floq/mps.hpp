#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "floq/circuit.hpp"
#include "floq/gates.hpp"
#include "floq/lattice.hpp"
#include "floq/linalg.hpp"

namespace floq {

struct MpsOptions {
    int chi_max = 256;
    double cutoff = 1e-10;  // relative singular-value threshold, see MpsState
};

// Matrix-product state over a fixed chain ordering of the lattice sites.
//
// Site tensor p is stored as a (chiL x 2*chiR) matrix with column index
// s*chiR + r (physical index slow). Tensors left of the orthogonality
// center are left-canonical isometries, tensors right of it right-canonical,
// so two-site singular values are Schmidt coefficients and truncation is
// optimal at the cut.
//
// Truncation keeps at most chi_max singular values and drops those below
// cutoff * sigma_max; the state is renormalized afterwards and the discarded
// relative weight (sum of squared singular values over the total) is
// accumulated in cumulative_truncation(). Non-adjacent gates are routed with
// swap gates to adjacency and swapped back, so the site -> chain map stays
// fixed for the whole run; the swaps are truncated under the same policy.
class MpsState {
public:
    MpsState(const std::vector<double>& phases, std::vector<int> ordering, MpsOptions options)
        : options_(options) {
        const int n = static_cast<int>(phases.size());
        if (n < 2) throw std::invalid_argument("MPS needs at least two sites");
        if (options.chi_max < 1) throw std::invalid_argument("chi_max must be >= 1");
        if (ordering.empty()) {
            ordering.resize(n);
            std::iota(ordering.begin(), ordering.end(), 0);
        }
        if (static_cast<int>(ordering.size()) != n) {
            throw std::invalid_argument("ordering length does not match site count");
        }
        std::vector<char> seen(n, 0);
        for (int s : ordering) {
            if (s < 0 || s >= n || seen[s]) {
                throw std::invalid_argument("ordering is not a permutation of 0..L-1");
            }
            seen[s] = 1;
        }
        ordering_ = std::move(ordering);
        position_.assign(n, -1);
        for (int p = 0; p < n; ++p) position_[ordering_[p]] = p;
        tensors_.reserve(n);
        const double s = 1.0 / std::sqrt(2.0);
        for (int p = 0; p < n; ++p) {
            Eigen::MatrixXcd t(1, 2);
            t(0, 0) = complexd(s, 0);
            t(0, 1) = std::polar(s, phases[ordering_[p]]);
            tensors_.push_back(std::move(t));
        }
        center_ = 0;
    }

    int num_sites() const { return static_cast<int>(tensors_.size()); }
    const std::vector<int>& ordering() const { return ordering_; }
    int chain_position(int site) const { return position_.at(site); }
    double cumulative_truncation() const { return cumulative_truncation_; }
    int center() const { return center_; }

    int bond_dim(int p) const {  // bond between chain positions p and p+1
        return static_cast<int>(tensors_[p].cols() / 2);
    }

    int max_bond_dim() const {
        int chi = 1;
        for (int p = 0; p + 1 < num_sites(); ++p) chi = std::max(chi, bond_dim(p));
        return chi;
    }

    double norm() const { return tensors_[center_].norm(); }

    // Apply a two-qubit gate (matrix indexed by 2*s_a + s_b) to lattice
    // sites a and b, routing through swaps when they are not chain-adjacent.
    void apply_gate(const Eigen::Matrix4cd& gate, int site_a, int site_b) {
        if (site_a == site_b) throw std::invalid_argument("two-qubit gate needs distinct sites");
        int pa = position_.at(site_a);
        int pb = position_.at(site_b);
        Eigen::Matrix4cd g = gate;
        if (pa > pb) {
            std::swap(pa, pb);
            g = exchange_qubits(g);
        }
        const Eigen::Matrix4cd swap = swap_gate_matrix();
        // Bring the left operand next to the right one, apply, undo.
        for (int p = pa; p < pb - 1; ++p) apply_adjacent(swap, p);
        apply_adjacent(g, pb - 1);
        for (int p = pb - 2; p >= pa; --p) apply_adjacent(swap, p);
    }

    void apply_single(const Eigen::Matrix2cd& u, int site) {
        const int p = position_.at(site);
        // No canonical-form requirement: single-site unitaries commute with
        // the gauge. tensor'(l, s', r) = sum_s u(s', s) tensor(l, s, r).
        Eigen::MatrixXcd& t = tensors_[p];
        const auto chi_r = t.cols() / 2;
        Eigen::MatrixXcd b0 = t.leftCols(chi_r);
        Eigen::MatrixXcd b1 = t.rightCols(chi_r);
        t.leftCols(chi_r) = u(0, 0) * b0 + u(0, 1) * b1;
        t.rightCols(chi_r) = u(1, 0) * b0 + u(1, 1) * b1;
    }

    double expect_pauli(Pauli axis, int site) {
        const Eigen::Matrix2cd o = pauli_matrix(axis);
        move_center(position_.at(site));
        return expect_at_center(o);
    }

    // One orthogonality-center sweep that evaluates <X_j> and <Y_j> for all
    // sites in a single pass.
    void expect_xy_all(std::vector<double>& xs, std::vector<double>& ys) {
        const int n = num_sites();
        xs.assign(n, 0.0);
        ys.assign(n, 0.0);
        const Eigen::Matrix2cd px = pauli_matrix(Pauli::X);
        const Eigen::Matrix2cd py = pauli_matrix(Pauli::Y);
        move_center(0);
        for (int p = 0; p < n; ++p) {
            move_center(p);
            xs[ordering_[p]] = expect_at_center(px);
            ys[ordering_[p]] = expect_at_center(py);
        }
    }

    // Full re-canonicalization sweep (numerical hygiene; observables are
    // unchanged up to roundoff).
    void recanonicalize() {
        move_center(num_sites() - 1);
        move_center(0);
    }

    void move_center(int p) {
        while (center_ < p) shift_right();
        while (center_ > p) shift_left();
    }

private:
    // (chiL x 2*chiR) -> (2*chiL x chiR) with row index s*chiL + l.
    static Eigen::MatrixXcd fuse_left(const Eigen::MatrixXcd& t) {
        const auto chi_l = t.rows();
        const auto chi_r = t.cols() / 2;
        Eigen::MatrixXcd k(2 * chi_l, chi_r);
        k.topRows(chi_l) = t.leftCols(chi_r);
        k.bottomRows(chi_l) = t.rightCols(chi_r);
        return k;
    }

    static Eigen::MatrixXcd split_left(const Eigen::MatrixXcd& k) {
        const auto chi_l = k.rows() / 2;
        const auto chi_r = k.cols();
        Eigen::MatrixXcd t(chi_l, 2 * chi_r);
        t.leftCols(chi_r) = k.topRows(chi_l);
        t.rightCols(chi_r) = k.bottomRows(chi_l);
        return t;
    }

    void shift_right() {
        const int p = center_;
        Eigen::MatrixXcd k = fuse_left(tensors_[p]);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(k);
        const auto rank = std::min(k.rows(), k.cols());
        Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(k.rows(), rank);
        Eigen::MatrixXcd r =
            qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
        tensors_[p] = split_left(q);
        tensors_[p + 1] = r * tensors_[p + 1];
        center_ = p + 1;
    }

    void shift_left() {
        const int p = center_;
        // tensor (chiL x 2*chiR) = L * Q with row-orthonormal Q: QR the adjoint.
        Eigen::MatrixXcd k = tensors_[p].adjoint();  // (2*chiR x chiL)
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(k);
        const auto rank = std::min(k.rows(), k.cols());
        Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(k.rows(), rank);
        Eigen::MatrixXcd r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
        tensors_[p] = q.adjoint();
        // Right-multiply the left neighbor by L = r^dagger, per physical block.
        Eigen::MatrixXcd& prev = tensors_[p - 1];
        const auto chi = prev.cols() / 2;
        Eigen::MatrixXcd merged(prev.rows(), 2 * rank);
        merged.leftCols(rank) = prev.leftCols(chi) * r.adjoint();
        merged.rightCols(rank) = prev.rightCols(chi) * r.adjoint();
        prev = std::move(merged);
        center_ = p - 1;
    }

    double expect_at_center(const Eigen::Matrix2cd& o) const {
        const Eigen::MatrixXcd& t = tensors_[center_];
        const auto chi_r = t.cols() / 2;
        const Eigen::MatrixXcd b[2] = {t.leftCols(chi_r), t.rightCols(chi_r)};
        complexd acc(0, 0);
        for (int sp = 0; sp < 2; ++sp) {
            for (int s = 0; s < 2; ++s) {
                if (o(sp, s) != complexd(0, 0)) {
                    acc += o(sp, s) * (b[sp].conjugate().cwiseProduct(b[s])).sum();
                }
            }
        }
        return acc.real();
    }

    // Two-site gate on chain positions (p, p+1); gate indexed by the
    // physical indices in chain order.
    void apply_adjacent(const Eigen::Matrix4cd& gate, int p) {
        if (center_ < p) move_center(p);
        if (center_ > p + 1) move_center(p + 1);
        const Eigen::MatrixXcd& a = tensors_[p];
        const Eigen::MatrixXcd& b = tensors_[p + 1];
        const auto chi_l = a.rows();
        const auto chi_m = a.cols() / 2;
        const auto chi_r = b.cols() / 2;
        // theta blocks T[s][t] = A_s * B_t, each (chiL x chiR).
        Eigen::MatrixXcd tb[2][2];
        for (int s = 0; s < 2; ++s) {
            const Eigen::MatrixXcd a_s = a.middleCols(s * chi_m, chi_m);
            for (int t = 0; t < 2; ++t) {
                tb[s][t] = a_s * b.middleCols(t * chi_r, chi_r);
            }
        }
        Eigen::MatrixXcd theta(2 * chi_l, 2 * chi_r);
        for (int sp = 0; sp < 2; ++sp) {
            for (int tp = 0; tp < 2; ++tp) {
                Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(chi_l, chi_r);
                for (int s = 0; s < 2; ++s) {
                    for (int t = 0; t < 2; ++t) {
                        const complexd g = gate(2 * sp + tp, 2 * s + t);
                        if (g != complexd(0, 0)) blk.noalias() += g * tb[s][t];
                    }
                }
                theta.block(sp * chi_l, tp * chi_r, chi_l, chi_r) = blk;
            }
        }
        SvdResult svd = svd_econ(theta);
        const int full = static_cast<int>(svd.sigma.size());
        const double smax = svd.sigma[0];
        int keep = std::min(full, options_.chi_max);
        while (keep > 1 && svd.sigma[keep - 1] < options_.cutoff * smax) --keep;
        double total = 0.0, kept = 0.0;
        for (int i = 0; i < full; ++i) total += svd.sigma[i] * svd.sigma[i];
        for (int i = 0; i < keep; ++i) kept += svd.sigma[i] * svd.sigma[i];
        if (total > 0.0) cumulative_truncation_ += (total - kept) / total;
        const double rescale = kept > 0.0 ? 1.0 / std::sqrt(kept) : 1.0;

        // A' = U (left-canonical), B' = diag(sigma) V^dagger (center).
        Eigen::MatrixXcd a_new(chi_l, 2 * keep);
        a_new.leftCols(keep) = svd.u.topRows(chi_l).leftCols(keep);
        a_new.rightCols(keep) = svd.u.bottomRows(chi_l).leftCols(keep);
        Eigen::MatrixXcd b_new = svd.vh.topRows(keep);
        for (int i = 0; i < keep; ++i) b_new.row(i) *= svd.sigma[i] * rescale;
        tensors_[p] = std::move(a_new);
        tensors_[p + 1] = std::move(b_new);
        center_ = p + 1;
    }

    MpsOptions options_;
    std::vector<Eigen::MatrixXcd> tensors_;
    std::vector<int> ordering_;  // chain position -> lattice site
    std::vector<int> position_;  // lattice site -> chain position
    int center_ = 0;
    double cumulative_truncation_ = 0.0;
};

// Deterministic chain ordering that keeps lattice edges short in chain
// distance: reverse Cuthill-McKee (BFS from a low-degree peripheral site,
// neighbors visited in degree order, result reversed).
inline std::vector<int> choose_ordering(const LatticeGraph& graph) {
    const int n = graph.num_sites;
    if (!graph.connected()) throw LatticeError("chain ordering requires a connected graph");
    // Pseudo-peripheral start: from the lowest-index minimum-degree site,
    // walk to a farthest site twice.
    int start = 0;
    for (int s = 1; s < n; ++s) {
        if (graph.degree(s) < graph.degree(start)) start = s;
    }
    for (int iter = 0; iter < 2; ++iter) {
        const auto dist = bfs_distances(graph, start);
        int far = start;
        for (int s = 0; s < n; ++s) {
            const bool better = dist[s] > dist[far] ||
                                (dist[s] == dist[far] && graph.degree(s) < graph.degree(far));
            if (better) far = s;
        }
        start = far;
    }
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    std::vector<int> frontier{start};
    seen[start] = 1;
    std::size_t head = 0;
    while (head < frontier.size()) {
        const int v = frontier[head++];
        order.push_back(v);
        std::vector<int> next(graph.adjacency[v]);
        std::sort(next.begin(), next.end(), [&](int a, int b) {
            return graph.degree(a) != graph.degree(b) ? graph.degree(a) < graph.degree(b) : a < b;
        });
        for (int w : next) {
            if (!seen[w]) {
                seen[w] = 1;
                frontier.push_back(w);
            }
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

inline int max_chain_distance(const LatticeGraph& graph, const std::vector<int>& ordering) {
    std::vector<int> pos(graph.num_sites);
    for (int p = 0; p < graph.num_sites; ++p) pos[ordering[p]] = p;
    int d = 0;
    for (const auto& [a, b] : graph.edges) d = std::max(d, std::abs(pos[a] - pos[b]));
    return d;
}

inline MpsState init_product_mps(const std::vector<double>& phases, std::vector<int> ordering,
                                 MpsOptions options) {
    return MpsState(phases, std::move(ordering), options);
}

inline void apply_program_mps(MpsState& state, const FloquetProgram& prog) {
    const Eigen::Matrix2cd rz = prog.rz();
    const Eigen::Matrix4cd rxxz = prog.rxxz();
    for (const auto& op : prog.ops) {
        if (op.kind == GateOp::Kind::SingleZ) {
            state.apply_single(rz, op.a);
        } else {
            state.apply_gate(rxxz, op.a, op.b);
        }
    }
}

}  // namespace floq
