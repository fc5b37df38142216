#include "rlrs/diagnostics.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "rlrs/optimizer.hpp"

namespace rlrs {

RdppReport rdpp_probe(const SensingSet& sensing, const Vector& s, const SymmetricMatrix& x,
                      double psi) {
    const double xf = frobenius_norm(x);
    if (xf == 0.0) {
        throw std::invalid_argument("rdpp_probe: probe matrix must be nonzero");
    }
    const Vector res = apply_operator(sensing, x) - s;
    const SymmetricMatrix dir = direction_from_residuals(sensing, res);
    const Matrix dev = dir.mat() - (psi / xf) * x.mat();

    Eigen::SelfAdjointEigenSolver<Matrix> solver(x.mat(), Eigen::EigenvaluesOnly);
    const double scale = solver.eigenvalues().cwiseAbs().maxCoeff();
    int rank = 0;
    for (int i = 0; i < x.dim(); ++i) {
        if (std::abs(solver.eigenvalues()(i)) > 1e-10 * scale) ++rank;
    }

    return RdppReport{operator_norm(SymmetricMatrix{dev}), dev.norm(), psi, rank};
}

double l1l2_ratio(const SensingSet& sensing, const SymmetricMatrix& x) {
    const double xf = frobenius_norm(x);
    if (xf == 0.0) {
        throw std::invalid_argument("l1l2_ratio: probe matrix must be nonzero");
    }
    const Vector v = apply_operator(sensing, x);
    return v.lpNorm<1>() / sensing.count() / xf;
}

double rc_psi(double p, const ValueLaw& law, double x_fro, std::uint64_t seed, int mc_samples) {
    if (!(x_fro > 0.0)) {
        throw std::invalid_argument("rc_psi: probe norm must be positive");
    }
    Rng rng = Rng::derive(seed, 0x707369ull);
    double acc = 0.0;
    for (int i = 0; i < mc_samples; ++i) {
        const double si = law.sample(rng);
        acc += std::exp(-si * si / (2.0 * x_fro * x_fro));
    }
    return std::sqrt(2.0 / M_PI) * (1.0 - p + p * acc / mc_samples);
}

StageDecomposition decompose_stage(const GroundTruth& truth, const Matrix& f) {
    return decompose_stage(truth, eigendecompose_sym(truth.x_nat), f);
}

StageDecomposition decompose_stage(const GroundTruth& truth, const EigenPairs& ep,
                                   const Matrix& f) {
    const int d = truth.x_nat.dim();
    const int r = truth.rank;
    if (f.rows() != d) {
        throw std::invalid_argument("decompose_stage: factor dimension mismatch");
    }
    const Matrix u = ep.vectors.leftCols(r);
    const Matrix v = ep.vectors.rightCols(d - r);
    const Vector top = ep.values.head(r);

    StageDecomposition out;
    out.s_part = u.transpose() * f;
    out.t_part = v.transpose() * f;  // empty when r == d

    const Matrix ss = out.s_part * out.s_part.transpose() - Matrix(top.asDiagonal());
    out.q_ss = operator_norm(SymmetricMatrix{ss});
    out.q_st = r < d ? operator_norm(Matrix(out.s_part * out.t_part.transpose())) : 0.0;
    out.q_tt = r < d ? operator_norm(SymmetricMatrix{out.t_part * out.t_part.transpose()}) : 0.0;
    out.d_t = std::max(out.q_ss, out.q_st);
    out.e_t = std::max(out.d_t, out.q_tt);

    Eigen::JacobiSVD<Matrix> svd(out.s_part);
    out.sigma_r_s = svd.singularValues()(svd.singularValues().size() - 1);
    return out;
}

StageSummary stage_trace(const IterationTrace& trace, const GroundTruth& truth) {
    const auto& recs = trace.records;
    if (recs.empty() || !recs.front().stage.has_value()) {
        throw std::invalid_argument("stage_trace: trace was not recorded with diagnostics");
    }
    StageSummary out{-1, true, 0.0, 0.0};

    const double threshold = std::sqrt(truth.sigmar / 2.0);
    for (const auto& rec : recs) {
        if (rec.stage->sigma_r_s >= threshold) {
            out.stage1_exit = rec.t;
            break;
        }
    }

    if (out.stage1_exit >= 0) {
        for (std::size_t i = 1; i < recs.size(); ++i) {
            if (recs[i - 1].t < out.stage1_exit) continue;
            const double prev = recs[i - 1].stage->d_t;
            if (prev > 0.0 && recs[i].stage->d_t > prev * (1.0 + 1e-3)) {
                out.d_nonincreasing = false;
                break;
            }
        }
    }

    // Tail exponent of E_t: log-log fit over the last half of the trace.
    std::vector<double> lx, ly;
    for (std::size_t i = recs.size() / 2; i < recs.size(); ++i) {
        if (recs[i].t >= 1 && recs[i].stage->e_t > 0.0) {
            lx.push_back(std::log(static_cast<double>(recs[i].t)));
            ly.push_back(std::log(recs[i].stage->e_t));
        }
    }
    if (lx.size() >= 2) {
        const LineFit fit = fit_line(lx, ly);
        out.tail_exponent = fit.slope;
        out.tail_r2 = fit.r2;
    }
    return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const auto n = x.size();
    if (n != y.size() || n < 2) {
        throw std::invalid_argument("fit_line: need two equal-length samples of size >= 2");
    }
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return LineFit{slope, my - slope * mx, r2};
}

}  // namespace rlrs
