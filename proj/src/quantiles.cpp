#include "rlrs/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rlrs {

double sample_quantile(std::span<const double> values, double p) {
    if (values.empty()) {
        throw std::invalid_argument("sample_quantile: empty input");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("sample_quantile: level must be in (0, 1)");
    }
    const auto m = values.size();
    auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(m)));
    k = std::clamp<std::size_t>(k, 1, m);
    std::vector<double> buf(values.begin(), values.end());
    std::nth_element(buf.begin(), buf.begin() + (k - 1), buf.end());
    return buf[k - 1];
}

double sample_quantile(const Vector& values, double p) {
    return sample_quantile(std::span<const double>(values.data(), values.size()), p);
}

double standard_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double folded_normal_quantile(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("folded_normal_quantile: level must be in (0, 1)");
    }
    // P(|Z| <= t) = erf(t / sqrt(2)) is strictly increasing; bisect.
    double lo = 0.0;
    double hi = 10.0;
    while (std::erf(hi * M_SQRT1_2) < eps) hi *= 2.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (std::erf(mid * M_SQRT1_2) < eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Vector residuals(const ProblemInstance& instance, const Matrix& f) {
    if (f.rows() != instance.dim()) {
        throw std::invalid_argument("residuals: factor row dimension mismatch");
    }
    SymmetricMatrix ff{f * f.transpose()};
    return apply_operator(instance.sensing, ff) - instance.y;
}

double tau(const ProblemInstance& instance, const Matrix& f) {
    const Vector r = residuals(instance, f).cwiseAbs();
    return sample_quantile(r, 0.5);
}

}  // namespace rlrs
