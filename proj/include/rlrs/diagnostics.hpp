#pragma once

#include "rlrs/quantiles.hpp"

namespace rlrs {

// Deviation of the sign-weighted matrix D(X) from psi * X / ||X||_F, in both
// operator norm (the RDPP quantity) and Frobenius norm (the sign-RIP one).
struct RdppReport {
    double op_dev;
    double fro_dev;
    double psi_used;
    int x_rank;
};

RdppReport rdpp_probe(const SensingSet& sensing, const Vector& s, const SymmetricMatrix& x,
                      double psi);

// (1/m) sum |<A_i, x>| / ||x||_F.
double l1l2_ratio(const SensingSet& sensing, const SymmetricMatrix& x);

// Scaling function for RC probes: sqrt(2/pi) * (1 - p + p E[exp(-s^2 / 2||X||_F^2)]),
// with the expectation estimated by Monte Carlo over the value law.
double rc_psi(double p, const ValueLaw& law, double x_fro, std::uint64_t seed,
              int mc_samples = 100000);

// F = U S + V T along the ground truth's top-r eigenspace U and its
// complement V. S is the signal block, T the error block.
struct StageDecomposition {
    Matrix s_part;     // r x k
    Matrix t_part;     // (d-r) x k
    double q_ss;       // ||S S^T - D_S*||
    double q_st;       // ||S T^T||
    double q_tt;       // ||T T^T||
    double d_t;        // max(q_ss, q_st)
    double e_t;        // max(q_ss, q_st, q_tt)
    double sigma_r_s;  // r-th singular value of S
};

StageDecomposition decompose_stage(const GroundTruth& truth, const Matrix& f);

// Variant with the truth's eigendecomposition precomputed, for per-iteration use.
StageDecomposition decompose_stage(const GroundTruth& truth, const EigenPairs& truth_eig,
                                   const Matrix& f);

struct LineFit {
    double slope;
    double intercept;
    double r2;
};

// Least squares y = a + b x; used for convergence-rate tail fits.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct StageSummary {
    int stage1_exit;            // first t with sigma_r(S_t) >= sqrt(sigma_r / 2), -1 if never
    bool d_nonincreasing;       // after stage-1 exit, up to 1e-3 relative wiggle per step
    double tail_exponent;       // slope of log E_t vs log t on the tail
    double tail_r2;
};

struct IterationTrace;

// Stage summary over a trace recorded with the diagnostics flag. Throws if
// the trace carries no stage records.
StageSummary stage_trace(const IterationTrace& trace, const GroundTruth& truth);

}  // namespace rlrs
