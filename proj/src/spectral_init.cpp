#include "rlrs/spectral_init.hpp"

#include <cmath>
#include <limits>

#include "rlrs/quantiles.hpp"

namespace rlrs {

InitReport spectral_init(const ProblemInstance& instance, int k) {
    const int d = instance.dim();
    const int m = instance.measurements();
    if (k < 1 || k > d) {
        throw std::invalid_argument("spectral_init: need 1 <= k <= d");
    }

    Matrix acc = Matrix::Zero(d, d);
    for (int i = 0; i < m; ++i) {
        const double sgn = instance.y(i) < 0.0 ? -1.0 : 1.0;  // sign(0) = +1
        acc += sgn * instance.sensing.matrices[i].mat();
    }
    SymmetricMatrix dir{acc / m};
    EigenPairs ep = eigendecompose_sym(dir);

    Matrix b(d, k);
    Vector spectrum(k);
    for (int j = 0; j < k; ++j) {
        spectrum(j) = ep.values(j);
        b.col(j) = ep.vectors.col(j) * std::sqrt(std::max(ep.values(j), 0.0));
    }

    const double median_abs_y = sample_quantile(Vector(instance.y.cwiseAbs()), 0.5);
    const double gamma =
        median_abs_y / (std::sqrt(2.0 / M_PI) * folded_normal_quantile(0.5));

    InitReport report;
    report.gamma = gamma;
    report.d_spectrum = std::move(spectrum);
    report.f0 = std::sqrt(gamma) * b;
    report.degenerate = gamma == 0.0;

    // Diagnostic scale search: F0 F0^T is only guaranteed accurate up to an
    // unknown scalar multiple of X_nat, so scan a log grid for the best fit.
    const Matrix f0f0 = report.f0 * report.f0.transpose();
    double best_err = std::numeric_limits<double>::infinity();
    double best_c = 1.0;
    constexpr int kGridPoints = 601;
    for (int i = 0; i < kGridPoints; ++i) {
        const double c = std::pow(10.0, -3.0 + 6.0 * i / (kGridPoints - 1));
        const double err = operator_norm(SymmetricMatrix{f0f0 - c * instance.truth.x_nat.mat()});
        if (err < best_err) {
            best_err = err;
            best_c = c;
        }
    }
    report.directional_error = best_err;
    report.best_c = best_c;
    return report;
}

Matrix tiny_init(int d, int k, double sigma, std::uint64_t seed) {
    if (d < 1 || k < 1 || k > d) {
        throw std::invalid_argument("tiny_init: invalid dimensions");
    }
    if (sigma < 0.0) {
        throw std::invalid_argument("tiny_init: sigma must be >= 0");
    }
    Rng rng(seed);
    Matrix f(d, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < d; ++i) {
            f(i, j) = sigma * rng.normal();
        }
    }
    return f;
}

}  // namespace rlrs
