#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include <Eigen/Dense>

namespace floq {

struct SvdResult {
    Eigen::MatrixXcd u;    // m x k
    Eigen::VectorXd sigma;  // k, descending
    Eigen::MatrixXcd vh;   // k x n
};

// Thin SVD via LAPACK's divide-and-conquer zgesdd, retrying with the slower
// zgesvd on the rare nonconvergence. Eigen's default storage is col-major,
// matching LAPACK directly.
inline SvdResult svd_econ(const Eigen::MatrixXcd& mat) {
    const lapack_int m = static_cast<lapack_int>(mat.rows());
    const lapack_int n = static_cast<lapack_int>(mat.cols());
    const lapack_int k = std::min(m, n);
    SvdResult out;
    out.u.resize(m, k);
    out.sigma.resize(k);
    out.vh.resize(k, n);

    Eigen::MatrixXcd work = mat;
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m,
                                     out.sigma.data(), out.u.data(), m, out.vh.data(), k);
    if (info != 0) {
        work = mat;
        std::vector<double> superb(std::max<lapack_int>(1, k - 1));
        info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, work.data(), m,
                              out.sigma.data(), out.u.data(), m, out.vh.data(), k,
                              superb.data());
    }
    if (info != 0) {
        throw std::runtime_error("SVD failed to converge (info=" + std::to_string(info) + ")");
    }
    return out;
}

}  // namespace floq
