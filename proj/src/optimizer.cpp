#include "rlrs/optimizer.hpp"

#include <cmath>

namespace rlrs {

namespace {

inline double sign_plus(double x) { return x < 0.0 ? -1.0 : 1.0; }  // sign(0) = +1

double stepsize_from(const StepsizeRule& rule, int t, double objective_value, double tau_value,
                     const Matrix& g) {
    struct Visitor {
        int t;
        double fval;
        double tau_value;
        const Matrix& g;

        double operator()(const Constant& r) const { return r.eta0; }
        double operator()(const Geometric& r) const { return r.eta0 * std::pow(r.ratio, t); }
        double operator()(const Sublinear& r) const { return r.eta0 / std::max(t, 1); }
        double operator()(const Polyak& r) const {
            const double gn2 = g.squaredNorm();
            return gn2 == 0.0 ? 0.0 : (fval - r.f_star) / gn2;
        }
        double operator()(const AdaptiveMedian& r) const { return r.c_eta * tau_value; }
    };
    return std::visit(Visitor{t, objective_value, tau_value, g}, rule);
}

}  // namespace

void validate(const StepsizeRule& rule) {
    struct Visitor {
        void operator()(const Constant& r) const {
            if (!(r.eta0 > 0.0)) throw std::invalid_argument("Constant: eta0 must be > 0");
        }
        void operator()(const Geometric& r) const {
            if (!(r.eta0 > 0.0)) throw std::invalid_argument("Geometric: eta0 must be > 0");
            if (!(r.ratio > 0.0 && r.ratio < 1.0))
                throw std::invalid_argument("Geometric: ratio must be in (0, 1)");
        }
        void operator()(const Sublinear& r) const {
            if (!(r.eta0 > 0.0)) throw std::invalid_argument("Sublinear: eta0 must be > 0");
        }
        void operator()(const Polyak& r) const {
            if (!std::isfinite(r.f_star)) throw std::invalid_argument("Polyak: f_star must be finite");
        }
        void operator()(const AdaptiveMedian& r) const {
            if (!(r.c_eta > 0.0)) throw std::invalid_argument("AdaptiveMedian: c_eta must be > 0");
        }
    };
    std::visit(Visitor{}, rule);
}

const char* rule_name(const StepsizeRule& rule) {
    struct Visitor {
        const char* operator()(const Constant&) const { return "constant"; }
        const char* operator()(const Geometric&) const { return "geometric"; }
        const char* operator()(const Sublinear&) const { return "sublinear"; }
        const char* operator()(const Polyak&) const { return "polyak"; }
        const char* operator()(const AdaptiveMedian&) const { return "adaptive"; }
    };
    return std::visit(Visitor{}, rule);
}

double objective(const ProblemInstance& instance, const Matrix& f) {
    const Vector r = residuals(instance, f);
    return r.lpNorm<1>() / (2.0 * instance.measurements());
}

SymmetricMatrix direction_from_residuals(const SensingSet& sensing, const Vector& res) {
    const int m = sensing.count();
    const int d = sensing.dim();
    if (res.size() != m) {
        throw std::invalid_argument("direction_from_residuals: residual length mismatch");
    }
    if (sensing.packed.rows() == m) {
        Vector signs(m);
        for (int i = 0; i < m; ++i) signs(i) = sign_plus(res(i));
        const Vector flat = sensing.packed.transpose() * signs / m;
        // off-diagonal slots carry doubled entries; undo that when unpacking
        Matrix acc(d, d);
        Eigen::Index c = 0;
        for (int col = 0; col < d; ++col) {
            for (int row = 0; row < col; ++row) {
                acc(row, col) = 0.5 * flat(c++);
            }
            acc(col, col) = flat(c++);
        }
        return SymmetricMatrix(acc);
    }
    Matrix acc = Matrix::Zero(d, d);
    for (int i = 0; i < m; ++i) {
        acc += sign_plus(res(i)) * sensing.matrices[i].mat();
    }
    return SymmetricMatrix(acc / m);
}

SymmetricMatrix subgradient_direction(const ProblemInstance& instance, const SymmetricMatrix& x) {
    if (x.dim() != instance.dim()) {
        throw std::invalid_argument("subgradient_direction: dimension mismatch");
    }
    const Vector res = apply_operator(instance.sensing, x) - instance.s;
    return direction_from_residuals(instance.sensing, res);
}

Matrix subgradient(const ProblemInstance& instance, const Matrix& f) {
    const Vector res = residuals(instance, f);
    return direction_from_residuals(instance.sensing, res).mat() * f;
}

double stepsize(const StepsizeRule& rule, int t, const ProblemInstance& instance, const Matrix& f,
                const Matrix& g) {
    if (t < 0) throw std::invalid_argument("stepsize: t must be >= 0");
    double fval = 0.0;
    double tau_value = 0.0;
    if (std::holds_alternative<Polyak>(rule)) fval = objective(instance, f);
    if (std::holds_alternative<AdaptiveMedian>(rule)) tau_value = tau(instance, f);
    return stepsize_from(rule, t, fval, tau_value, g);
}

IterationTrace run(const ProblemInstance& instance, Matrix f, const StepsizeRule& rule,
                   const RunOptions& options) {
    validate(rule);
    if (f.rows() != instance.dim()) {
        throw std::invalid_argument("run: initialization dimension mismatch");
    }
    if (options.iters < 0) throw std::invalid_argument("run: iters must be >= 0");

    const int m = instance.measurements();
    const double divergence_norm =
        options.divergence_factor * std::sqrt(frobenius_norm(instance.truth.x_nat));

    IterationTrace trace;
    trace.iters_requested = options.iters;
    trace.records.reserve(options.iters + 1);

    std::optional<EigenPairs> truth_eig;
    if (options.diagnostics) truth_eig = eigendecompose_sym(instance.truth.x_nat);

    for (int t = 0;; ++t) {
        if (!f.allFinite() || f.norm() > divergence_norm) {
            trace.diverged = true;
            break;
        }
        SymmetricMatrix ff{f * f.transpose()};
        SymmetricMatrix err{ff.mat() - instance.truth.x_nat.mat()};
        const Vector res = apply_operator(instance.sensing, ff) - instance.y;

        TraceRecord rec;
        rec.t = t;
        rec.op_error = operator_norm(err);
        rec.fro_error = frobenius_norm(err);
        rec.objective = res.lpNorm<1>() / (2.0 * m);
        rec.tau = sample_quantile(Vector(res.cwiseAbs()), 0.5);
        rec.eta = 0.0;
        if (options.diagnostics) rec.stage = decompose_stage(instance.truth, *truth_eig, f);

        const bool at_floor = rec.op_error < options.stop_floor;
        if (t == options.iters || at_floor) {
            trace.records.push_back(std::move(rec));
            trace.hit_floor = at_floor && t < options.iters;
            break;
        }

        const Matrix g = direction_from_residuals(instance.sensing, res).mat() * f;
        const double eta = stepsize_from(rule, t, rec.objective, rec.tau, g);
        rec.eta = eta;
        trace.records.push_back(std::move(rec));
        f -= eta * g;
    }
    return trace;
}

std::pair<double, double> c_eta_theory_interval(double sigma1, double sigmar, double p, double c6,
                                                double c7) {
    const double theta = folded_normal_quantile(1.0 - (0.5 - p) / 3.0);
    const double base = sigmar / (sigma1 * sigma1) / theta;
    return {c6 * base, c7 * base};
}

}  // namespace rlrs
