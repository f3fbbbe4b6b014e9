#pragma once

// Test-only oracles, independent of the library implementation paths they
// check: dense matrix exponentials via Hermitian eigendecomposition and
// dense brute-force state evolution for tiny systems.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "floq/gates.hpp"

namespace oracles {

using floq::complexd;

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// exp(-i H) for Hermitian H.
inline Eigen::MatrixXcd expm_minus_i(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    Eigen::VectorXcd phases(solver.eigenvalues().size());
    for (int i = 0; i < phases.size(); ++i) {
        phases[i] = std::exp(complexd(0, -solver.eigenvalues()[i]));
    }
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

// exp[-(i/2)(theta_xx (XX + YY) + theta_zz ZZ)] built from the definition.
inline Eigen::MatrixXcd rxxz_expm(double theta_xx, double theta_zz) {
    const Eigen::MatrixXcd x = floq::pauli_matrix(floq::Pauli::X);
    const Eigen::MatrixXcd y = floq::pauli_matrix(floq::Pauli::Y);
    const Eigen::MatrixXcd z = floq::pauli_matrix(floq::Pauli::Z);
    const Eigen::MatrixXcd h =
        0.5 * (theta_xx * (kron(x, x) + kron(y, y)) + theta_zz * kron(z, z));
    return expm_minus_i(h);
}

// Embed a k-qubit operator acting on the given sites (matrix index uses the
// first site as the most significant local bit) into the full 2^L space
// with site 0 as the least significant global bit.
inline Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, const std::vector<int>& sites, int num_qubits) {
    const int dim = 1 << num_qubits;
    const int k = static_cast<int>(sites.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        int loc = 0;
        for (int b = 0; b < k; ++b) {
            loc = (loc << 1) | ((col >> sites[b]) & 1);
        }
        for (int locp = 0; locp < (1 << k); ++locp) {
            int row = col;
            for (int b = 0; b < k; ++b) {
                const int bit = (locp >> (k - 1 - b)) & 1;
                row = (row & ~(1 << sites[b])) | (bit << sites[b]);
            }
            out(row, col) += op(locp, loc);
        }
    }
    return out;
}

}  // namespace oracles
