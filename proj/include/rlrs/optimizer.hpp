#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "rlrs/diagnostics.hpp"

namespace rlrs {

struct Constant {
    double eta0;
};
struct Geometric {
    double eta0;
    double ratio;  // in (0, 1)
};
struct Sublinear {
    double eta0;  // eta_t = eta0 / max(t, 1)
};
struct Polyak {
    double f_star;
};
struct AdaptiveMedian {
    double c_eta;  // eta_t = c_eta * median |<A_i, F F^T> - y_i|
};

using StepsizeRule = std::variant<Constant, Geometric, Sublinear, Polyak, AdaptiveMedian>;

void validate(const StepsizeRule& rule);
const char* rule_name(const StepsizeRule& rule);

struct TraceRecord {
    int t;
    double op_error;   // ||F F^T - X_nat||
    double fro_error;  // ||F F^T - X_nat||_F
    double objective;
    double eta;        // stepsize applied at this iterate (last record: 0)
    double tau;
    std::optional<StageDecomposition> stage;
};

struct IterationTrace {
    std::vector<TraceRecord> records;  // size = iterations run + 1
    int iters_requested = 0;
    bool diverged = false;
    bool hit_floor = false;  // stopped early below the op_error floor
};

// (1/2m) sum_i |<A_i, F F^T> - y_i|
double objective(const ProblemInstance& instance, const Matrix& f);

// D(x) = (1/m) sum_i sign(<A_i, x> - s_i) A_i with sign(0) = +1.
SymmetricMatrix subgradient_direction(const ProblemInstance& instance, const SymmetricMatrix& x);

// Same sum weighted by the signs of precomputed residuals.
SymmetricMatrix direction_from_residuals(const SensingSet& sensing, const Vector& res);

// g = D(F F^T - X_nat) F, computed from observed residuals.
Matrix subgradient(const ProblemInstance& instance, const Matrix& f);

double stepsize(const StepsizeRule& rule, int t, const ProblemInstance& instance, const Matrix& f,
                const Matrix& g);

struct RunOptions {
    int iters = 1000;
    bool diagnostics = false;
    double stop_floor = 1e-13;        // early stop when op_error drops below
    double divergence_factor = 1e8;   // abort when ||F|| exceeds this * ||X_nat||_F^(1/2)
};

// F_{t+1} = F_t - eta_t g_t. A record is appended before each update and
// after the last; non-finite or exploding iterates abort with diverged set.
IterationTrace run(const ProblemInstance& instance, Matrix f0, const StepsizeRule& rule,
                   const RunOptions& options);

// Theory-side C_eta interval from the convergence guarantee, with
// c6 = c7 = 0.001 defaults. Desk-scale runs use C_eta = 0.5 instead.
std::pair<double, double> c_eta_theory_interval(double sigma1, double sigmar, double p,
                                                double c6 = 0.001, double c7 = 0.001);

}  // namespace rlrs
