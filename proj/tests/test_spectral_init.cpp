#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rlrs/quantiles.hpp"
#include "rlrs/spectral_init.hpp"

using namespace rlrs;

namespace {

ProblemInstance make_instance(int d, int r, int m, double p, std::uint64_t seed,
                              CorruptionModel model = CorruptionModel::AC) {
    CorruptionSpec spec;
    spec.model = model;
    spec.p = p;
    return generate_instance(d, r, m, spec, seed);
}

}  // namespace

TEST_CASE("all-zero observations give a degenerate zero initialization") {
    ProblemInstance inst = make_instance(6, 2, 30, 0.0, 1);
    inst.y.setZero();
    const InitReport rep = spectral_init(inst, 2);
    CHECK(rep.degenerate);
    CHECK(rep.gamma == 0.0);
    CHECK(rep.f0.norm() == 0.0);
}

TEST_CASE("spectral_init validates the factor width") {
    ProblemInstance inst = make_instance(6, 2, 30, 0.0, 2);
    CHECK_THROWS_AS(spectral_init(inst, 0), std::invalid_argument);
    CHECK_THROWS_AS(spectral_init(inst, 7), std::invalid_argument);
}

TEST_CASE("B B^T is PSD by eigenvalue clamping") {
    ProblemInstance inst = make_instance(10, 2, 60, 0.3, 3);
    const InitReport rep = spectral_init(inst, 10);  // full width picks up negative eigenvalues
    const EigenPairs ep = eigendecompose_sym(SymmetricMatrix{rep.f0 * rep.f0.transpose()});
    CHECK(ep.values(9) >= -1e-10);
}

TEST_CASE("gamma only depends on the multiset of observations") {
    ProblemInstance inst = make_instance(8, 2, 41, 0.2, 4);
    const double gamma = spectral_init(inst, 2).gamma;
    ProblemInstance permuted = inst;
    permuted.y.head(20).swap(permuted.y.tail(20));
    std::reverse(permuted.sensing.matrices.begin(), permuted.sensing.matrices.end());
    CHECK(spectral_init(permuted, 2).gamma == gamma);
}

TEST_CASE("clean spectral initialization lands near a scaling of the truth") {
    // The directional error behaves like c / sqrt(m); the 0.1 * sigma_r bound
    // needs concentration-scale sampling, so use a well-conditioned truth
    // (kappa = 1) and m far above d*r.
    const int d = 20, r = 3;
    const int m = 16000;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(900 + seed);
        Matrix raw(d, r);
        for (int i = 0; i < raw.size(); ++i) raw(i) = rng.normal();
        const Matrix q =
            Eigen::HouseholderQR<Matrix>(raw).householderQ() * Matrix::Identity(d, r);
        const double sig = 1.0 / std::sqrt(static_cast<double>(r));
        GroundTruth truth{SymmetricMatrix{q * q.transpose() * sig},
                          q * std::sqrt(sig), r, sig, sig, 1.0, 1};
        SensingSet set = sample_sensing_set(d, m, 100 + seed);
        const Vector y = apply_operator(set, truth.x_nat);
        ProblemInstance inst{std::move(set), y, Vector::Zero(m), truth, CorruptionSpec{}, {}};
        const InitReport rep = spectral_init(inst, r);
        CHECK(rep.directional_error <= 0.1 * truth.sigmar);
    }
}

TEST_CASE("directional error shrinks like one over sqrt(m)") {
    const int d = 20, r = 3;
    std::vector<double> errs;
    for (const int m : {1000, 4000, 16000}) {
        double acc = 0.0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            ProblemInstance inst = make_instance(d, r, m, 0.0, seed);
            acc += spectral_init(inst, r).directional_error;
        }
        errs.push_back(acc / 3);
    }
    CHECK(errs[1] < 0.7 * errs[0]);
    CHECK(errs[2] < 0.7 * errs[1]);
}

TEST_CASE("sign-weighted matrix concentrates toward the scaled truth as m grows") {
    const int d = 30, r = 2;
    const double psi = std::sqrt(2.0 / M_PI);
    std::vector<double> devs;
    for (const int factor : {2, 5, 10}) {
        double acc = 0.0;
        const int seeds = 5;
        for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
            ProblemInstance inst = make_instance(d, r, factor * d * r, 0.0, seed * 31);
            Matrix acc_mat = Matrix::Zero(d, d);
            for (int i = 0; i < inst.measurements(); ++i) {
                acc_mat += (inst.y(i) < 0 ? -1.0 : 1.0) * inst.sensing.matrices[i].mat();
            }
            const Matrix dev = acc_mat / inst.measurements() -
                               psi * inst.truth.x_nat.mat() / frobenius_norm(inst.truth.x_nat);
            acc += operator_norm(SymmetricMatrix{dev});
        }
        devs.push_back(acc / seeds);
    }
    CHECK(devs[0] > devs[1]);
    CHECK(devs[1] > devs[2]);
}

TEST_CASE("RC best scaling falls in the quantile interval most of the time") {
    const int d = 50, r = 2;
    const double p = 0.3;
    const double eps = (0.5 - p) / 3.0;
    const double theta_half = folded_normal_quantile(0.5);
    const double lo = std::sqrt(1.0 / (2.0 * M_PI)) * folded_normal_quantile(eps) / theta_half;
    const double hi = std::sqrt(2.0 / M_PI) * folded_normal_quantile(1.0 - eps) / theta_half;
    int inside = 0;
    const int seeds = 10;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        ProblemInstance inst = make_instance(d, r, 10 * d * r, p, seed, CorruptionModel::RC);
        const InitReport rep = spectral_init(inst, r);
        if (rep.best_c >= lo && rep.best_c <= hi) ++inside;
    }
    CHECK(inside >= 9);
}

TEST_CASE("tiny_init statistics and determinism") {
    CHECK(tiny_init(4, 4, 0.0, 1).norm() == 0.0);

    const Matrix a = tiny_init(5, 3, 1e-7, 77);
    const Matrix b = tiny_init(5, 3, 1e-7, 77);
    CHECK((a.array() == b.array()).all());

    // pooled std over 10^6 draws
    double sumsq = 0.0;
    const int chunks = 1000;
    for (int c = 0; c < chunks; ++c) {
        sumsq += tiny_init(100, 10, 1e-7, 1000 + c).squaredNorm();
    }
    const double std_est = std::sqrt(sumsq / (chunks * 1000.0));
    CHECK(std_est == doctest::Approx(1e-7).epsilon(0.02));

    CHECK_THROWS_AS(tiny_init(0, 1, 1e-7, 1), std::invalid_argument);
    CHECK_THROWS_AS(tiny_init(4, 2, -1.0, 1), std::invalid_argument);
}
