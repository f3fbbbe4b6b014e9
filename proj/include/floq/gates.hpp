#pragma once

#include <complex>

#include <Eigen/Dense>

namespace floq {

using complexd = std::complex<double>;

enum class Pauli { X, Y, Z };

inline Eigen::Matrix2cd pauli_matrix(Pauli p) {
    Eigen::Matrix2cd m;
    switch (p) {
        case Pauli::X:
            m << 0, 1, 1, 0;
            break;
        case Pauli::Y:
            m << 0, complexd(0, -1), complexd(0, 1), 0;
            break;
        case Pauli::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

inline Eigen::Matrix2cd hadamard_matrix() {
    Eigen::Matrix2cd m;
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

// R_Z(theta) = exp(-i theta Z / 2).
inline Eigen::Matrix2cd rz_matrix(double theta) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::exp(complexd(0, -0.5 * theta));
    m(1, 1) = std::exp(complexd(0, 0.5 * theta));
    return m;
}

// Two-qubit interaction gate
//   exp[-(i/2) (theta_xx (X.X + Y.Y) + theta_zz Z.Z)]
// in the basis |s_a s_b> with row index 2*s_a + s_b.
//
// Closed form: |00>, |11> pick up exp(-i theta_zz / 2); on span{|01>, |10>}
// the block is exp(+i theta_zz / 2) (cos(theta_xx) I - i sin(theta_xx) SWAP).
inline Eigen::Matrix4cd rxxz_matrix(double theta_xx, double theta_zz) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    const complexd zz_phase = std::exp(complexd(0, -0.5 * theta_zz));
    const complexd block_phase = std::exp(complexd(0, 0.5 * theta_zz));
    m(0, 0) = zz_phase;
    m(3, 3) = zz_phase;
    m(1, 1) = block_phase * std::cos(theta_xx);
    m(2, 2) = block_phase * std::cos(theta_xx);
    m(1, 2) = block_phase * complexd(0, -std::sin(theta_xx));
    m(2, 1) = block_phase * complexd(0, -std::sin(theta_xx));
    return m;
}

inline Eigen::Matrix4cd swap_gate_matrix() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    m(3, 3) = 1;
    return m;
}

// Reindex a two-qubit gate for exchanged qubit roles: G'[(t',s'),(t,s)] = G[(s',t'),(s,t)].
inline Eigen::Matrix4cd exchange_qubits(const Eigen::Matrix4cd& g) {
    const Eigen::Matrix4cd p = swap_gate_matrix();
    return p * g * p;
}

}  // namespace floq
