#pragma once

#include <filesystem>
#include <string>

#include "rlrs/optimizer.hpp"

namespace rlrs {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance container: magic "RLRS" + version byte, then little-endian f64
// arrays (sensing matrices, y, s, x_nat, factor). Scalars and seeds live in
// the JSON sidecar written next to it ("<path>.json").
void save_instance(const ProblemInstance& instance, const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);

// FNV-1a over the canonical config JSON dump; recorded in every output so
// equal configurations are recognizable.
std::string config_hash(const std::string& canonical_json);

std::string format_double(double v);  // shortest round-trippable decimal

// One row per record, header exactly: t,op_error,fro_error,objective,eta,tau
void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path);

}  // namespace rlrs
