#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "floq/circuit.hpp"
#include "floq/gates.hpp"

namespace floq {

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact 2^L statevector with site 0 as the least significant bit.
// Gates are applied in place as amplitude-pair (or quadruple) updates;
// expectation values reduce over fixed-size chunks so the result does not
// depend on the number of worker threads.
class StateVector {
public:
    static constexpr int kDefaultLimit = 26;
    static constexpr int kHardLimit = 28;

    explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 1 || num_qubits > kHardLimit) {
            throw CapacityError("statevector supports 1.." + std::to_string(kHardLimit) +
                                " qubits, got " + std::to_string(num_qubits));
        }
        amps_.assign(std::size_t{1} << num_qubits, complexd(0, 0));
        amps_[0] = complexd(1, 0);
    }

    int num_qubits() const { return num_qubits_; }
    const std::vector<complexd>& amplitudes() const { return amps_; }
    std::vector<complexd>& amplitudes() { return amps_; }

    void apply_single(const Eigen::Matrix2cd& u, int site) {
        check_site(site);
        const std::uint64_t mask = std::uint64_t{1} << site;
        const std::uint64_t lo = mask - 1;
        const std::uint64_t hi = ~lo;
        const std::uint64_t half = amps_.size() >> 1;
        const complexd u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
        complexd* a = amps_.data();
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(half); ++i) {
            const std::uint64_t i0 = ((static_cast<std::uint64_t>(i) & hi) << 1) |
                                     (static_cast<std::uint64_t>(i) & lo);
            const std::uint64_t i1 = i0 | mask;
            const complexd a0 = a[i0];
            const complexd a1 = a[i1];
            a[i0] = u00 * a0 + u01 * a1;
            a[i1] = u10 * a0 + u11 * a1;
        }
    }

    // Gate matrix indexed by 2*s_a + s_b.
    void apply_two(const Eigen::Matrix4cd& u, int site_a, int site_b) {
        check_site(site_a);
        check_site(site_b);
        if (site_a == site_b) throw std::invalid_argument("two-qubit gate needs distinct sites");
        const std::uint64_t ma = std::uint64_t{1} << site_a;
        const std::uint64_t mb = std::uint64_t{1} << site_b;
        const std::uint64_t m_low = std::min(ma, mb);
        const std::uint64_t m_high = std::max(ma, mb);
        const std::uint64_t lo = m_low - 1;
        const std::uint64_t mid = (m_high - 1) & ~(m_low * 2 - 1);
        const std::uint64_t hi = ~(m_high * 2 - 1);
        const std::uint64_t quarter = amps_.size() >> 2;
        complexd m[4][4];
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) m[r][c] = u(r, c);
        complexd* a = amps_.data();
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(quarter); ++i) {
            const std::uint64_t v = static_cast<std::uint64_t>(i);
            const std::uint64_t base = ((v & hi) << 2) | ((v & mid) << 1) | (v & lo);
            const std::uint64_t idx[4] = {base, base | mb, base | ma, base | ma | mb};
            const complexd in[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
            for (int r = 0; r < 4; ++r) {
                a[idx[r]] = m[r][0] * in[0] + m[r][1] * in[1] + m[r][2] * in[2] + m[r][3] * in[3];
            }
        }
    }

    double expect_pauli(Pauli axis, int site) const {
        check_site(site);
        const std::uint64_t mask = std::uint64_t{1} << site;
        const std::uint64_t lo = mask - 1;
        const std::uint64_t hi = ~lo;
        const std::uint64_t half = amps_.size() >> 1;
        const complexd* a = amps_.data();
        // Fixed chunking keeps the floating-point reduction order independent
        // of the thread count.
        const int nchunks = 256;
        const std::uint64_t chunk = (half + nchunks - 1) / nchunks;
        std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
        for (int c = 0; c < nchunks; ++c) {
            const std::uint64_t begin = c * chunk;
            const std::uint64_t end = std::min(half, begin + chunk);
            double acc = 0.0;
            for (std::uint64_t i = begin; i < end; ++i) {
                const std::uint64_t i0 = ((i & hi) << 1) | (i & lo);
                const std::uint64_t i1 = i0 | mask;
                switch (axis) {
                    case Pauli::X:
                        acc += 2.0 * (std::conj(a[i0]) * a[i1]).real();
                        break;
                    case Pauli::Y:
                        acc += 2.0 * (std::conj(a[i0]) * a[i1]).imag();
                        break;
                    case Pauli::Z:
                        acc += std::norm(a[i0]) - std::norm(a[i1]);
                        break;
                }
            }
            partial[c] = acc;
        }
        double total = 0.0;
        for (double p : partial) total += p;
        return total;
    }

    double norm() const {
        const int nchunks = 256;
        const std::uint64_t n = amps_.size();
        const std::uint64_t chunk = (n + nchunks - 1) / nchunks;
        std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
        for (int c = 0; c < nchunks; ++c) {
            const std::uint64_t begin = c * chunk;
            const std::uint64_t end = std::min(n, begin + chunk);
            double acc = 0.0;
            for (std::uint64_t i = begin; i < end; ++i) acc += std::norm(amps_[i]);
            partial[c] = acc;
        }
        double total = 0.0;
        for (double p : partial) total += p;
        return std::sqrt(total);
    }

private:
    void check_site(int site) const {
        if (site < 0 || site >= num_qubits_) {
            throw std::invalid_argument("site index " + std::to_string(site) + " out of range");
        }
    }

    int num_qubits_;
    std::vector<complexd> amps_;
};

// Tensor product of R_Z(phi_j) H |0> factors.
inline StateVector init_product(const std::vector<double>& phases, int limit = StateVector::kDefaultLimit) {
    const int n = static_cast<int>(phases.size());
    if (n > limit) {
        throw CapacityError("requested " + std::to_string(n) + " qubits exceeds the configured limit of " +
                            std::to_string(limit) + " (raise the limit explicitly for large runs)");
    }
    StateVector psi(n);
    auto& a = psi.amplitudes();
    const double scale = std::pow(2.0, -0.5 * n);
    const std::uint64_t dim = a.size();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(dim); ++i) {
        double phase = 0.0;
        for (int j = 0; j < n; ++j) {
            if ((static_cast<std::uint64_t>(i) >> j) & 1u) phase += phases[j];
        }
        a[i] = std::polar(scale, phase);
    }
    return psi;
}

// One Floquet cycle.
inline void apply_program(StateVector& psi, const FloquetProgram& prog) {
    if (prog.num_sites > psi.num_qubits()) {
        throw std::invalid_argument("program addresses more sites than the state has");
    }
    const Eigen::Matrix2cd rz = prog.rz();
    const Eigen::Matrix4cd rxxz = prog.rxxz();
    for (const auto& op : prog.ops) {
        if (op.kind == GateOp::Kind::SingleZ) {
            psi.apply_single(rz, op.a);
        } else {
            psi.apply_two(rxxz, op.a, op.b);
        }
    }
}

// Reduced density matrix of `subsystem` (dense; feasible up to ~14 sites).
struct DensityMatrix {
    std::vector<int> sites;
    Eigen::MatrixXcd rho;
};

inline DensityMatrix reduce(const StateVector& psi, const std::vector<int>& subsystem) {
    const int L = psi.num_qubits();
    const int na = static_cast<int>(subsystem.size());
    if (na == 0) throw std::invalid_argument("subsystem must be nonempty");
    if (na > 14) throw CapacityError("dense reduced density matrix limited to 14 sites");
    std::vector<char> in_a(L, 0);
    for (int s : subsystem) {
        if (s < 0 || s >= L) throw std::invalid_argument("subsystem site out of range");
        if (in_a[s]) throw std::invalid_argument("subsystem site listed twice");
        in_a[s] = 1;
    }
    std::vector<int> a_sites(subsystem);
    std::vector<int> b_sites;
    for (int s = 0; s < L; ++s) {
        if (!in_a[s]) b_sites.push_back(s);
    }
    const std::uint64_t dim_a = std::uint64_t{1} << na;
    const std::uint64_t dim_b = std::uint64_t{1} << b_sites.size();
    // Gather psi into an (A x B) matrix, then rho_A = M M^dagger.
    Eigen::MatrixXcd m(dim_a, dim_b);
    const auto& amps = psi.amplitudes();
#pragma omp parallel for schedule(static)
    for (std::int64_t ib = 0; ib < static_cast<std::int64_t>(dim_b); ++ib) {
        std::uint64_t base = 0;
        for (std::size_t k = 0; k < b_sites.size(); ++k) {
            if ((static_cast<std::uint64_t>(ib) >> k) & 1u) base |= std::uint64_t{1} << b_sites[k];
        }
        for (std::uint64_t ia = 0; ia < dim_a; ++ia) {
            std::uint64_t idx = base;
            for (int k = 0; k < na; ++k) {
                if ((ia >> k) & 1u) idx |= std::uint64_t{1} << a_sites[k];
            }
            m(ia, ib) = amps[idx];
        }
    }
    DensityMatrix out;
    out.sites = subsystem;
    out.rho = m * m.adjoint();
    return out;
}

// von Neumann entropy -Tr[rho log2 rho] in bits; eigenvalues below the
// cutoff are dropped to avoid log(0).
inline double entropy_bits(const DensityMatrix& dm, double cutoff = 1e-12) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dm.rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lam = solver.eigenvalues()[i];
        if (lam > cutoff) s -= lam * std::log2(lam);
    }
    return s;
}

}  // namespace floq
