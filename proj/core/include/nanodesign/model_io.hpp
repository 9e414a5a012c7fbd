#pragma once

#include <filesystem>
#include <iosfwd>

#include "nanodesign/network.hpp"

namespace nanodesign {

// NLM1 layout: "NLM1\n", key: value header (architecture, normalizer,
// training config, provenance), "end_header\n", little-endian f64
// parameters in Parameters::flatten() order, CRC-32 of the payload.
// Training history is not stored; the CLI writes it as CSV.
void write_model(std::ostream& out, const MlpModel& model);
MlpModel read_model(std::istream& in);
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace nanodesign
