#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlrs/linalg.hpp"

namespace rlrs {

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CorruptionModel { AC, RC };

// Distribution of nonzero corruption values. Default matches the N(0, 100)
// used throughout the experiments; StudentT covers heavy-tailed RC laws.
struct ValueLaw {
    enum class Kind { Gaussian, PointMass, StudentT };
    Kind kind = Kind::Gaussian;
    double mean = 0.0;
    double stddev = 10.0;
    double value = 0.0;  // PointMass
    double dof = 3.0;    // StudentT
    double scale = 1.0;  // StudentT

    double sample(Rng& rng) const;
};

struct CorruptionSpec {
    CorruptionModel model = CorruptionModel::AC;
    double p = 0.0;  // must satisfy 0 <= p < 1
    ValueLaw value_law;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SensingSet {
    std::vector<SymmetricMatrix> matrices;
    // Row i holds vec(A_i); lets the operator and the subgradient accumulate
    // as single matrix products. Built by sample_sensing_set; empty otherwise.
    Matrix packed;

    int count() const { return static_cast<int>(matrices.size()); }
    int dim() const { return matrices.empty() ? 0 : matrices.front().dim(); }

    void build_packed();
};

struct InstanceMeta {
    std::uint64_t seed = 0;          // master seed
    std::uint64_t sensing_seed = 0;
    std::uint64_t truth_seed = 0;
    std::uint64_t corruption_seed = 0;
    int d = 0;
    int r = 0;
    int m = 0;
    int truth_attempts = 1;
    std::vector<int> corrupted_indices;
    std::string created_at;  // ISO-8601 UTC
};

struct ProblemInstance {
    SensingSet sensing;
    Vector y;
    Vector s;
    GroundTruth truth;
    CorruptionSpec corruption;
    InstanceMeta meta;

    int dim() const { return sensing.dim(); }
    int measurements() const { return sensing.count(); }
};

// y_i = trace(A_i x). Sequential reduction, order fixed.
Vector apply_operator(const SensingSet& sensing, const SymmetricMatrix& x);

// AC model: support is a uniform subset of size floor(p*m); values from the
// law. Returns (y, s).
std::pair<Vector, Vector> corrupt_ac(const Vector& clean, const CorruptionSpec& spec);

// AC with caller-supplied corruption values (adversarial injection). The
// support of s_explicit must not exceed floor(p*m).
std::pair<Vector, Vector> corrupt_ac(const Vector& clean, const CorruptionSpec& spec,
                                     const Vector& s_explicit);

// RC model: each entry independently nonzero with probability p.
std::pair<Vector, Vector> corrupt_rc(const Vector& clean, const CorruptionSpec& spec);

inline constexpr std::uint64_t kDefaultBudgetBytes = 2ull << 30;

// GOE sensing set + normalized ground truth + corrupted observations.
// Sensing matrices use per-index derived streams from the master seed.
ProblemInstance generate_instance(int d, int r, int m, const CorruptionSpec& corruption,
                                  std::uint64_t seed,
                                  std::uint64_t budget_bytes = kDefaultBudgetBytes);

SensingSet sample_sensing_set(int d, int m, std::uint64_t seed);

}  // namespace rlrs
