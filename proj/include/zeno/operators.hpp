// operators.hpp: spin-j matrices and Kronecker embeddings

#pragma once

#include "zeno/spin_core.hpp"

#include <cmath>

namespace zeno {

// Spin-j operators in the |j, m⟩ basis with m descending from j.
struct SpinMatrices {
    Matrix z, plus, minus;

    Matrix x() const { return 0.5 * (plus + minus); }
    Matrix y() const { return Complex(0.0, -0.5) * (plus - minus); }
};

inline SpinMatrices spin_matrices(int twice_j) {
    if (twice_j < 0) throw InvalidArgument("spin_matrices: negative spin");
    const Index d = twice_j + 1;
    SpinMatrices s{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
    const double j = 0.5 * twice_j;
    for (Index k = 0; k < d; ++k) {
        const double m = j - static_cast<double>(k);
        s.z(k, k) = m;
        if (k > 0) {
            // ⟨m+1| J+ |m⟩ = sqrt((j - m)(j + m + 1))
            s.plus(k - 1, k) = std::sqrt((j - m) * (j + m + 1.0));
        }
    }
    s.minus = s.plus.adjoint();
    return s;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Single-site operator acting on site `site` of `n_sites` spin-1/2s; site 0 is the most significant.
inline Matrix embed(const Matrix& op, int site, int n_sites) {
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < n_sites; ++k) out = kron(out, k == site ? op : Matrix::Identity(2, 2));
    return out;
}

}  // namespace zeno
