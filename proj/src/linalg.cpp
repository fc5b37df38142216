#include "rlrs/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <vector>

namespace rlrs {

SymmetricMatrix::SymmetricMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
        throw std::invalid_argument("SymmetricMatrix: need square matrix with dim >= 1");
    }
    m_ = m_.triangularView<Eigen::Upper>();
    m_.triangularView<Eigen::StrictlyLower>() = m_.transpose();
}

SymmetricMatrix sample_goe(int d, Rng& rng) {
    Matrix a(d, d);
    const double off_sd = std::sqrt(0.5);
    for (int i = 0; i < d; ++i) {
        a(i, i) = rng.normal();
        for (int j = i + 1; j < d; ++j) {
            a(i, j) = off_sd * rng.normal();
        }
    }
    return SymmetricMatrix(std::move(a));
}

SymmetricMatrix sample_goe(int d, std::uint64_t seed) {
    Rng rng(seed);
    return sample_goe(d, rng);
}

GroundTruth make_ground_truth(int d, int r, std::uint64_t seed, bool normalize) {
    if (r < 1 || r > d) {
        throw std::invalid_argument("make_ground_truth: need 1 <= r <= d");
    }
    for (int attempt = 0;; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        Matrix factor(d, r);
        for (int j = 0; j < r; ++j) {
            for (int i = 0; i < d; ++i) {
                factor(i, j) = rng.normal();
            }
        }
        Matrix x = factor * factor.transpose();
        if (normalize) {
            const double fn = x.norm();
            x /= fn;
            factor /= std::sqrt(fn);
        }
        SymmetricMatrix x_nat{std::move(x)};
        EigenPairs ep = eigendecompose_sym(x_nat);
        const double sigma1 = ep.values(0);
        const double sigmar = ep.values(r - 1);
        if (sigmar < 1e-12 * sigma1) {
            continue;  // rank-deficient draw, try next seed
        }
        return GroundTruth{std::move(x_nat), std::move(factor), r,
                           sigma1,           sigmar,            sigma1 / sigmar,
                           attempt + 1};
    }
}

EigenPairs eigendecompose_sym(const SymmetricMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecompose_sym: solver did not converge");
    }
    const int d = m.dim();
    EigenPairs out;
    out.values = Vector(d);
    out.vectors = Matrix(d, d);
    // Eigen returns ascending; reverse to descending.
    for (int i = 0; i < d; ++i) {
        out.values(i) = solver.eigenvalues()(d - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    }
    return out;
}

double operator_norm(const SymmetricMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("operator_norm: eigensolver did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double frobenius_norm(const SymmetricMatrix& m) { return m.mat().norm(); }

double frobenius_norm(const Matrix& m) { return m.norm(); }

double inner_product(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("inner_product: dimension mismatch");
    }
    return (a.mat().array() * b.mat().array()).sum();
}

}  // namespace rlrs
