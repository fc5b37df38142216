#include <doctest.h>

#include <cmath>

#include "rlrs/linalg.hpp"

using namespace rlrs;

TEST_CASE("SymmetricMatrix mirrors the upper triangle") {
    Matrix m(2, 2);
    m << 1.0, 5.0, -3.0, 2.0;
    SymmetricMatrix s(m);
    CHECK(s(1, 0) == 5.0);
    CHECK(s(0, 1) == 5.0);
    CHECK_THROWS_AS(SymmetricMatrix(Matrix(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(SymmetricMatrix(Matrix(0, 0)), std::invalid_argument);
}

TEST_CASE("GOE sampling is deterministic for a fixed seed") {
    const SymmetricMatrix a = sample_goe(3, 42);
    const SymmetricMatrix b = sample_goe(3, 42);
    CHECK((a.mat().array() == b.mat().array()).all());
    const SymmetricMatrix c = sample_goe(3, 43);
    CHECK(!(a.mat().array() == c.mat().array()).all());
}

TEST_CASE("GOE 1x1 entry has unit variance") {
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < n; ++s) {
        const double v = sample_goe(1, s)(0, 0);
        sum += v;
        sumsq += v * v;
    }
    const double var = sumsq / n - (sum / n) * (sum / n);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("GOE projections onto a unit-Frobenius matrix are standard normal") {
    const int d = 5;
    Rng xr(7);
    Matrix raw(d, d);
    for (int i = 0; i < d * d; ++i) raw(i) = xr.normal();
    SymmetricMatrix x{Matrix(raw + raw.transpose())};
    x = SymmetricMatrix(x.mat() / frobenius_norm(x));

    const int n = 100000;
    Rng rng(11);
    double abs_sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const SymmetricMatrix a = sample_goe(d, rng);
        const double ip = inner_product(a, x);
        abs_sum += std::abs(ip);
        sumsq += ip * ip;
    }
    CHECK(abs_sum / n == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.01));
    CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("make_ground_truth normalizes and has the right rank") {
    const GroundTruth g = make_ground_truth(5, 5, 1, true);
    CHECK(frobenius_norm(g.x_nat) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.kappa == g.sigma1 / g.sigmar);
    CHECK((g.x_nat.mat() - g.factor * g.factor.transpose()).norm() < 1e-10);

    const GroundTruth g2 = make_ground_truth(50, 3, 2, true);
    const EigenPairs ep = eigendecompose_sym(g2.x_nat);
    int above = 0;
    for (int i = 0; i < 50; ++i) {
        if (ep.values(i) > 1e-10 * g2.sigma1) ++above;
    }
    CHECK(above == 3);
    // PSD up to roundoff
    CHECK(ep.values(49) > -1e-10);

    CHECK_THROWS_AS(make_ground_truth(3, 4, 1, true), std::invalid_argument);
}

TEST_CASE("rank-1 factor [1,0] gives the unit corner matrix") {
    Matrix f(2, 1);
    f << 1.0, 0.0;
    const Matrix x = f * f.transpose();
    CHECK(x(0, 0) == 1.0);
    CHECK(x(0, 1) == 0.0);
    CHECK(x(1, 0) == 0.0);
    CHECK(x(1, 1) == 0.0);
}

TEST_CASE("eigendecompose_sym sorts descending") {
    SUBCASE("identity") {
        const EigenPairs ep = eigendecompose_sym(SymmetricMatrix{Matrix::Identity(3, 3)});
        CHECK(ep.values(0) == doctest::Approx(1.0));
        CHECK(ep.values(2) == doctest::Approx(1.0));
    }
    SUBCASE("diagonal") {
        const EigenPairs ep =
            eigendecompose_sym(SymmetricMatrix{Vector(Eigen::Vector3d(3, 1, 2)).asDiagonal()});
        CHECK(ep.values(0) == doctest::Approx(3.0));
        CHECK(ep.values(1) == doctest::Approx(2.0));
        CHECK(ep.values(2) == doctest::Approx(1.0));
        CHECK(std::abs(ep.vectors(0, 0)) == doctest::Approx(1.0));
        CHECK(std::abs(ep.vectors(2, 1)) == doctest::Approx(1.0));
        CHECK(std::abs(ep.vectors(1, 2)) == doctest::Approx(1.0));
    }
}

TEST_CASE("2x2 eigenvalues match the closed form") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = rng.normal(), b = rng.normal(), c = rng.normal();
        Matrix m(2, 2);
        m << a, b, b, c;
        const EigenPairs ep = eigendecompose_sym(SymmetricMatrix{m});
        const double disc = std::sqrt((a - c) * (a - c) + 4 * b * b);
        CHECK(ep.values(0) == doctest::Approx(0.5 * (a + c + disc)).epsilon(1e-10));
        CHECK(ep.values(1) == doctest::Approx(0.5 * (a + c - disc)).epsilon(1e-10));
    }
}

TEST_CASE("eigendecomposition reconstructs and is orthonormal on random inputs") {
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_u64() % 50);
        Matrix raw(d, d);
        for (int i = 0; i < d * d; ++i) raw(i) = rng.normal();
        const SymmetricMatrix m{Matrix(raw + raw.transpose())};
        const EigenPairs ep = eigendecompose_sym(m);
        const Matrix recon = ep.vectors * ep.values.asDiagonal() * ep.vectors.transpose();
        CHECK((m.mat() - recon).norm() <= 1e-8 * std::max(m.mat().norm(), 1e-30));
        CHECK((ep.vectors.transpose() * ep.vectors - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <
              1e-10);
        for (int i = 1; i < d; ++i) CHECK(ep.values(i - 1) >= ep.values(i));
    }
}

TEST_CASE("norms and inner products") {
    CHECK(operator_norm(SymmetricMatrix{Vector(Eigen::Vector2d(-4, 2)).asDiagonal()}) ==
          doctest::Approx(4.0));
    CHECK(frobenius_norm(SymmetricMatrix{Vector(Eigen::Vector2d(3, 4)).asDiagonal()}) ==
          doctest::Approx(5.0));
    CHECK(inner_product(SymmetricMatrix{Matrix::Identity(3, 3)},
                        SymmetricMatrix{Matrix::Identity(3, 3)}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(inner_product(SymmetricMatrix{Matrix::Identity(2, 2)},
                                  SymmetricMatrix{Matrix::Identity(3, 3)}),
                    std::invalid_argument);
}
