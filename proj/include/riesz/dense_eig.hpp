#pragma once

#include "riesz/numerics.hpp"

#include <vector>

namespace riesz {

/// Row-major dense complex matrix.
struct CMatrix {
    int n = 0;
    std::vector<cx> a;

    CMatrix() = default;
    explicit CMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, cx{0, 0}) {}
    cx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    const cx& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

struct QrError : std::runtime_error {
    int index;
    QrError(const std::string& msg, int idx) : std::runtime_error(msg), index(idx) {}
};

struct EigenSystem {
    std::vector<cx> values;             // sorted by (Re, Im)
    std::vector<std::vector<cx>> right; // unit-norm right eigenvectors
    std::vector<std::vector<cx>> left;  // unit-norm left eigenvectors
};

/// Full eigensystem of a dense complex matrix: balancing, Householder
/// Hessenberg reduction, explicit single-shift QR with deflation, eigenvectors
/// by triangular back-substitution on the Schur factor. Throws QrError after
/// 30*n iterations without convergence.
EigenSystem dense_eigensystem(const CMatrix& A, bool balance = true);

/// Squared condition number of the spectral pairing,
/// ||right||^2 ||left||^2 / |<left, right>|^2: exactly 1 for orthonormal
/// pairs, 1/(1-t^2) for the 2x2 rotation blocks, scale-free in both vectors.
/// Throws std::domain_error when the pairing is numerically degenerate.
double projection_norm(const std::vector<cx>& right, const std::vector<cx>& left,
                       double tol = 1e-12);

} // namespace riesz
