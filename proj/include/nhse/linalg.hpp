#pragma once
// Thin LAPACK wrappers for dense complex eigenproblems.

#include <cstdint>
#include <cstring>
#include <sstream>
#include <vector>

#include <lapacke.h>

#include "nhse/common.hpp"

namespace nhse::linalg {

struct Eigensystem {
    CVector values;
    CMatrix vectors; ///< right eigenvectors as columns
};

/// FNV-1a hash of the raw matrix entries plus its shape, for error reports.
inline std::string fingerprint(const CMatrix& A) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t bytes) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < bytes; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    const long rows = A.rows(), cols = A.cols();
    mix(&rows, sizeof rows);
    mix(&cols, sizeof cols);
    mix(A.data(), sizeof(cplx) * static_cast<std::size_t>(A.size()));
    std::ostringstream os;
    os << rows << "x" << cols << ":" << std::hex << h;
    return os.str();
}

inline bool is_hermitian(const CMatrix& A, double tol = 0.0) {
    if (A.rows() != A.cols())
        return false;
    for (long j = 0; j < A.cols(); ++j)
        for (long i = 0; i <= j; ++i)
            if (std::abs(A(i, j) - std::conj(A(j, i))) > tol)
                return false;
    return true;
}

/// General complex eigendecomposition (zgeev, which balances the matrix first).
inline Eigensystem eig_general(const CMatrix& A) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    CMatrix work = A;
    Eigensystem out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n,
                                          reinterpret_cast<lapack_complex_double*>(work.data()), n,
                                          reinterpret_cast<lapack_complex_double*>(out.values.data()), nullptr, n,
                                          reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n);
    if (info != 0)
        throw Error("eigensolver failed (zgeev info=" + std::to_string(info) + ") for matrix " + fingerprint(A));
    return out;
}

/// Eigenvalues only (zgeev without vectors).
inline CVector eigenvalues_general(const CMatrix& A) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    CMatrix work = A;
    CVector values(n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n,
                                          reinterpret_cast<lapack_complex_double*>(work.data()), n,
                                          reinterpret_cast<lapack_complex_double*>(values.data()), nullptr, n,
                                          nullptr, n);
    if (info != 0)
        throw Error("eigensolver failed (zgeev info=" + std::to_string(info) + ") for matrix " + fingerprint(A));
    return values;
}

/// Hermitian eigendecomposition (zheevd); eigenvectors are orthonormal.
inline Eigensystem eig_hermitian(const CMatrix& A) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    CMatrix work = A;
    Eigen::VectorXd w(n);
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                                           reinterpret_cast<lapack_complex_double*>(work.data()), n, w.data());
    if (info != 0)
        throw Error("eigensolver failed (zheevd info=" + std::to_string(info) + ") for matrix " + fingerprint(A));
    return {w.cast<cplx>(), std::move(work)};
}

/// max(||A||_1, ||A||_inf), an upper bound on the spectral norm.
inline double norm_bound(const CMatrix& A) {
    const double one = A.cwiseAbs().colwise().sum().maxCoeff();
    const double inf = A.cwiseAbs().rowwise().sum().maxCoeff();
    return std::max(one, inf);
}

} // namespace nhse::linalg
