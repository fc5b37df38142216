#pragma once

#include "rlrs/sensing.hpp"

namespace rlrs {

struct InitReport {
    Matrix f0;               // d x k
    double gamma;            // median-based scaling
    Vector d_spectrum;       // top-k eigenvalues of the sign-weighted matrix
    double directional_error;  // min over c of ||F0 F0^T - c X_nat||
    double best_c;             // minimizing scalar from the search grid
    bool degenerate = false;   // all observations zero, F0 = 0
};

// Spectral initialization: top-k eigenpairs of D = (1/m) sum sign(y_i) A_i
// (sign(0) = +1), B = U sqrt(max(Sigma, 0)), F0 = sqrt(gamma) B with
// gamma = median(|y_i|) / (sqrt(2/pi) theta_{1/2}).
InitReport spectral_init(const ProblemInstance& instance, int k);

// i.i.d. N(0, sigma^2) entries, for the overparameterized k = d regime.
Matrix tiny_init(int d, int k, double sigma, std::uint64_t seed);

}  // namespace rlrs
