#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "rlrs/rng.hpp"

namespace rlrs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense d x d real symmetric matrix. Symmetry is exact by construction:
// the upper triangle is mirrored onto the lower one.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(Matrix m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& mat() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    Matrix m_;
};

struct EigenPairs {
    Vector values;   // descending
    Matrix vectors;  // columns, orthonormal, matching order
};

// Rank-r PSD ground truth X = factor * factor^T with its spectral summary.
struct GroundTruth {
    SymmetricMatrix x_nat;
    Matrix factor;  // d x r
    int rank;
    double sigma1;
    double sigmar;
    double kappa;
    int generation_attempts;  // > 1 when rank-deficient draws were discarded
};

// GOE sample: diagonal N(0,1), strict upper triangle N(0,1/2), mirrored.
// With this scaling <A, X> ~ N(0, ||X||_F^2) for any fixed symmetric X.
SymmetricMatrix sample_goe(int d, std::uint64_t seed);
SymmetricMatrix sample_goe(int d, Rng& rng);

GroundTruth make_ground_truth(int d, int r, std::uint64_t seed, bool normalize);

// Eigenvalues sorted descending; throws std::runtime_error on solver failure.
EigenPairs eigendecompose_sym(const SymmetricMatrix& m);

double operator_norm(const SymmetricMatrix& m);  // max |eigenvalue|
double operator_norm(const Matrix& m);           // largest singular value
double frobenius_norm(const SymmetricMatrix& m);
double frobenius_norm(const Matrix& m);
double inner_product(const SymmetricMatrix& a, const SymmetricMatrix& b);

}  // namespace rlrs
