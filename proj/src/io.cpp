#include "rlrs/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace rlrs {

static_assert(std::endian::native == std::endian::little,
              "instance container assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'R', 'L', 'R', 'S'};
constexpr std::uint8_t kVersion = 1;

void write_doubles(std::ofstream& out, const double* data, std::size_t n) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::ifstream& in, double* data, std::size_t n) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw IoError("load_instance: truncated file");
}

const char* model_name(CorruptionModel m) { return m == CorruptionModel::AC ? "ac" : "rc"; }

}  // namespace

void save_instance(const ProblemInstance& instance, const std::filesystem::path& path) {
    const int d = instance.dim();
    const int m = instance.measurements();
    const int r = instance.truth.rank;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_instance: cannot open " + path.string());
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    const std::uint32_t dims[3] = {static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(r),
                                   static_cast<std::uint32_t>(m)};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    for (const auto& a : instance.sensing.matrices) {
        write_doubles(out, a.mat().data(), static_cast<std::size_t>(d) * d);
    }
    write_doubles(out, instance.y.data(), m);
    write_doubles(out, instance.s.data(), m);
    write_doubles(out, instance.truth.x_nat.mat().data(), static_cast<std::size_t>(d) * d);
    write_doubles(out, instance.truth.factor.data(), static_cast<std::size_t>(d) * r);
    if (!out) throw IoError("save_instance: write failed for " + path.string());
    out.close();

    nlohmann::json meta = {
        {"d", d},
        {"r", r},
        {"m", m},
        {"p", instance.corruption.p},
        {"model", model_name(instance.corruption.model)},
        {"seeds",
         {{"master", instance.meta.seed},
          {"sensing", instance.meta.sensing_seed},
          {"truth", instance.meta.truth_seed},
          {"corruption", instance.meta.corruption_seed}}},
        {"norm_x_nat", frobenius_norm(instance.truth.x_nat)},
        {"sigma1", instance.truth.sigma1},
        {"sigmar", instance.truth.sigmar},
        {"kappa", instance.truth.kappa},
        {"truth_attempts", instance.meta.truth_attempts},
        {"corrupted_indices", instance.meta.corrupted_indices},
        {"created_at", instance.meta.created_at},
    };
    std::ofstream side(path.string() + ".json");
    if (!side) throw IoError("save_instance: cannot open sidecar for " + path.string());
    side << meta.dump(2) << "\n";
}

ProblemInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_instance: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("load_instance: bad magic in " + path.string());
    }
    const int version = in.get();
    if (version != kVersion) {
        throw IoError("load_instance: unsupported container version");
    }
    std::uint32_t dims[3];
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!in) throw IoError("load_instance: truncated header");
    const int d = static_cast<int>(dims[0]);
    const int r = static_cast<int>(dims[1]);
    const int m = static_cast<int>(dims[2]);

    SensingSet sensing;
    sensing.matrices.reserve(m);
    for (int i = 0; i < m; ++i) {
        Matrix a(d, d);
        read_doubles(in, a.data(), static_cast<std::size_t>(d) * d);
        sensing.matrices.emplace_back(std::move(a));
    }
    sensing.build_packed();
    Vector y(m), s(m);
    read_doubles(in, y.data(), m);
    read_doubles(in, s.data(), m);
    Matrix x(d, d);
    read_doubles(in, x.data(), static_cast<std::size_t>(d) * d);
    Matrix factor(d, r);
    read_doubles(in, factor.data(), static_cast<std::size_t>(d) * r);

    std::ifstream side(path.string() + ".json");
    if (!side) throw IoError("load_instance: missing sidecar for " + path.string());
    nlohmann::json meta = nlohmann::json::parse(side);

    SymmetricMatrix x_nat{std::move(x)};
    EigenPairs ep = eigendecompose_sym(x_nat);
    GroundTruth truth{std::move(x_nat),
                      std::move(factor),
                      r,
                      ep.values(0),
                      ep.values(r - 1),
                      ep.values(0) / ep.values(r - 1),
                      meta.value("truth_attempts", 1)};

    CorruptionSpec spec;
    spec.model = meta.at("model").get<std::string>() == "ac" ? CorruptionModel::AC
                                                             : CorruptionModel::RC;
    spec.p = meta.at("p").get<double>();
    spec.seed = meta.at("seeds").at("corruption").get<std::uint64_t>();

    InstanceMeta im;
    im.seed = meta.at("seeds").at("master").get<std::uint64_t>();
    im.sensing_seed = meta.at("seeds").at("sensing").get<std::uint64_t>();
    im.truth_seed = meta.at("seeds").at("truth").get<std::uint64_t>();
    im.corruption_seed = spec.seed;
    im.d = d;
    im.r = r;
    im.m = m;
    im.truth_attempts = truth.generation_attempts;
    im.corrupted_indices = meta.value("corrupted_indices", std::vector<int>{});
    im.created_at = meta.value("created_at", "");

    return ProblemInstance{std::move(sensing), std::move(y), std::move(s),
                           std::move(truth),   spec,          std::move(im)};
}

std::string config_hash(const std::string& canonical_json) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : canonical_json) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_trace_csv: cannot open " + path.string());
    out << "t,op_error,fro_error,objective,eta,tau\n";
    for (const auto& rec : trace.records) {
        out << rec.t << ',' << format_double(rec.op_error) << ',' << format_double(rec.fro_error)
            << ',' << format_double(rec.objective) << ',' << format_double(rec.eta) << ','
            << format_double(rec.tau) << '\n';
    }
    if (!out) throw IoError("write_trace_csv: write failed for " + path.string());
}

}  // namespace rlrs
