// Vect operator, Kronecker product/sum, and the identities behind the
// correlation-equation stability analysis.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <vector>

namespace mf {
namespace kron {

// Column-stacking: Vect(X) = [X_11, ..., X_M1, X_12, ..., X_MM]^T.
inline Eigen::VectorXd vect(const Eigen::MatrixXd& X) {
    return Eigen::Map<const Eigen::VectorXd>(X.data(), X.size());
}

inline Eigen::MatrixXd unvect(const Eigen::VectorXd& v, int rows, int cols) {
    return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

inline Eigen::MatrixXd product(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

// A (+) B = A x I + I x B, for square A and B of equal size.
inline Eigen::MatrixXd sum(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const Eigen::Index M = A.rows();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(M, M);
    return product(A, I) + product(I, B);
}

// Matrix-free application of (A (+) A) to Vect(X): Vect(A X + X A^T).
inline Eigen::VectorXd sum_apply(const Eigen::MatrixXd& A, const Eigen::VectorXd& vx) {
    const int M = static_cast<int>(A.rows());
    const Eigen::MatrixXd X = unvect(vx, M, M);
    return vect(A * X + X * A.transpose());
}

// Vect(A X B) = (B^T x A) Vect(X).
inline Eigen::VectorXd vect_conjugation(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X,
                                        const Eigen::MatrixXd& B) {
    return product(B.transpose(), A) * vect(X);
}

// Greedy nearest-neighbor multiset match of two complex spectra; returns the
// largest pairing distance (eigenvalue order from solvers is arbitrary).
inline double spectrum_match_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<std::complex<double>> rest(b.data(), b.data() + b.size());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < rest.size(); ++k) {
            const double d = std::abs(a[i] - rest[k]);
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        worst = std::max(worst, bd);
        rest.erase(rest.begin() + best);
    }
    return worst;
}

}  // namespace kron
}  // namespace mf
