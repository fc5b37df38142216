#include "rlrs/sensing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numeric>

namespace rlrs {

namespace {

// Marsaglia-Tsang, shape >= 1 after boosting.
double sample_gamma(double shape, Rng& rng) {
    if (shape < 1.0) {
        const double u = rng.uniform01();
        return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

double ValueLaw::sample(Rng& rng) const {
    switch (kind) {
        case Kind::Gaussian:
            return mean + stddev * rng.normal();
        case Kind::PointMass:
            return value;
        case Kind::StudentT: {
            const double z = rng.normal();
            const double chi2 = 2.0 * sample_gamma(dof / 2.0, rng);
            return mean + scale * z / std::sqrt(chi2 / dof);
        }
    }
    throw std::logic_error("ValueLaw: unknown kind");
}

void CorruptionSpec::validate() const {
    if (!(p >= 0.0 && p < 1.0)) {
        throw std::invalid_argument("CorruptionSpec: corruption rate must satisfy 0 <= p < 1");
    }
}

void SensingSet::build_packed() {
    const int m = count();
    const int d = dim();
    packed.resize(m, static_cast<Eigen::Index>(d) * (d + 1) / 2);
    for (int i = 0; i < m; ++i) {
        const Matrix& a = matrices[i].mat();
        Eigen::Index c = 0;
        for (int col = 0; col < d; ++col) {
            for (int row = 0; row < col; ++row) {
                packed(i, c++) = 2.0 * a(row, col);
            }
            packed(i, c++) = a(col, col);
        }
    }
}

Vector apply_operator(const SensingSet& sensing, const SymmetricMatrix& x) {
    if (sensing.dim() != x.dim()) {
        throw std::invalid_argument("apply_operator: dimension mismatch");
    }
    const int m = sensing.count();
    const int d = x.dim();
    if (sensing.packed.rows() == m) {
        Vector tv(static_cast<Eigen::Index>(d) * (d + 1) / 2);
        Eigen::Index c = 0;
        for (int col = 0; col < d; ++col) {
            for (int row = 0; row <= col; ++row) {
                tv(c++) = x(row, col);
            }
        }
        return sensing.packed * tv;
    }
    Vector out(m);
    for (int i = 0; i < m; ++i) {
        out(i) = (sensing.matrices[i].mat().array() * x.mat().array()).sum();
    }
    return out;
}

std::pair<Vector, Vector> corrupt_ac(const Vector& clean, const CorruptionSpec& spec) {
    spec.validate();
    if (spec.model != CorruptionModel::AC) {
        throw std::invalid_argument("corrupt_ac: spec model is not AC");
    }
    const int m = static_cast<int>(clean.size());
    const int nnz = static_cast<int>(std::floor(spec.p * m));
    Rng rng = Rng::derive(spec.seed, 0x414331ull);  // "AC1"
    // Partial Fisher-Yates gives a uniform size-nnz subset.
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < nnz; ++i) {
        const int j = i + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(m - i));
        std::swap(idx[i], idx[j]);
    }
    Vector s = Vector::Zero(m);
    for (int i = 0; i < nnz; ++i) {
        s(idx[i]) = spec.value_law.sample(rng);
    }
    return {clean + s, s};
}

std::pair<Vector, Vector> corrupt_ac(const Vector& clean, const CorruptionSpec& spec,
                                     const Vector& s_explicit) {
    spec.validate();
    if (spec.model != CorruptionModel::AC) {
        throw std::invalid_argument("corrupt_ac: spec model is not AC");
    }
    if (s_explicit.size() != clean.size()) {
        throw std::invalid_argument("corrupt_ac: injected s has wrong length");
    }
    const int m = static_cast<int>(clean.size());
    const int budget = static_cast<int>(std::floor(spec.p * m));
    const int nnz = static_cast<int>((s_explicit.array() != 0.0).count());
    if (nnz > budget) {
        throw std::invalid_argument("corrupt_ac: injected support exceeds floor(p*m)");
    }
    return {clean + s_explicit, s_explicit};
}

std::pair<Vector, Vector> corrupt_rc(const Vector& clean, const CorruptionSpec& spec) {
    spec.validate();
    if (spec.model != CorruptionModel::RC) {
        throw std::invalid_argument("corrupt_rc: spec model is not RC");
    }
    const int m = static_cast<int>(clean.size());
    Rng rng = Rng::derive(spec.seed, 0x524331ull);  // "RC1"
    Vector s = Vector::Zero(m);
    for (int i = 0; i < m; ++i) {
        if (rng.uniform01() < spec.p) {
            s(i) = spec.value_law.sample(rng);
        }
    }
    return {clean + s, s};
}

SensingSet sample_sensing_set(int d, int m, std::uint64_t seed) {
    SensingSet set;
    set.matrices.reserve(m);
    for (int i = 0; i < m; ++i) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
        set.matrices.push_back(sample_goe(d, rng));
    }
    set.build_packed();
    return set;
}

ProblemInstance generate_instance(int d, int r, int m, const CorruptionSpec& corruption,
                                  std::uint64_t seed, std::uint64_t budget_bytes) {
    corruption.validate();
    if (d < 1 || r < 1 || r > d || m < 1) {
        throw std::invalid_argument("generate_instance: invalid dimensions");
    }
    // 2x for the per-matrix storage plus the packed operator
    const std::uint64_t need =
        8ull * (2ull * static_cast<std::uint64_t>(m) * d * d + 2ull * d * d + 2ull * m);
    if (need > budget_bytes) {
        throw BudgetError("generate_instance: instance needs " + std::to_string(need) +
                          " bytes, budget is " + std::to_string(budget_bytes));
    }

    const std::uint64_t sensing_seed = Rng::derive(seed, 1).next_u64();
    const std::uint64_t truth_seed = Rng::derive(seed, 2).next_u64();
    std::uint64_t corruption_seed = corruption.seed != 0 ? corruption.seed
                                                         : Rng::derive(seed, 3).next_u64();

    SensingSet sensing = sample_sensing_set(d, m, sensing_seed);
    GroundTruth truth = make_ground_truth(d, r, truth_seed, /*normalize=*/true);
    Vector clean = apply_operator(sensing, truth.x_nat);

    CorruptionSpec spec = corruption;
    spec.seed = corruption_seed;
    auto [y, s] = spec.model == CorruptionModel::AC ? corrupt_ac(clean, spec)
                                                    : corrupt_rc(clean, spec);

    InstanceMeta meta;
    meta.seed = seed;
    meta.sensing_seed = sensing_seed;
    meta.truth_seed = truth_seed;
    meta.corruption_seed = corruption_seed;
    meta.d = d;
    meta.r = r;
    meta.m = m;
    meta.truth_attempts = truth.generation_attempts;
    for (int i = 0; i < m; ++i) {
        if (s(i) != 0.0) meta.corrupted_indices.push_back(i);
    }
    meta.created_at = utc_timestamp();

    return ProblemInstance{std::move(sensing), std::move(y), std::move(s),
                           std::move(truth),   spec,          std::move(meta)};
}

}  // namespace rlrs
