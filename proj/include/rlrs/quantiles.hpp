#pragma once

#include <span>

#include "rlrs/sensing.hpp"

namespace rlrs {

// ceil(p*m)-th smallest value (1-indexed order statistic), no interpolation.
// For even m the median level p = 1/2 picks the lower median.
double sample_quantile(std::span<const double> values, double p);
double sample_quantile(const Vector& values, double p);

// Standard normal CDF via erf, accurate to ~1e-15.
double standard_normal_cdf(double x);

// theta with P(|Z| <= theta) = eps for Z ~ N(0,1), i.e. Phi^{-1}((1+eps)/2).
// Bisection on the CDF, absolute accuracy better than 1e-12.
double folded_normal_quantile(double eps);

// Residuals <A_i, F F^T> - y_i.
Vector residuals(const ProblemInstance& instance, const Matrix& f);

// Median absolute residual: the scale estimate driving the adaptive stepsize.
double tau(const ProblemInstance& instance, const Matrix& f);

}  // namespace rlrs
