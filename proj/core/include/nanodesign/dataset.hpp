#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nanodesign/materials.hpp"
#include "nanodesign/spectral.hpp"

namespace nanodesign {

/// Admissible per-layer thickness interval in nm.
struct ThicknessBounds {
    double min_nm = 30.0;
    double max_nm = 70.0;

    friend bool operator==(const ThicknessBounds&, const ThicknessBounds&) = default;
};

inline constexpr ThicknessBounds kDesignBox{30.0, 70.0};

struct DatasetManifest {
    std::size_t num_layers = 0;
    SpectralGrid grid;
    std::array<std::string, 2> material_cycle{"SiO2", "TiO2"};
    double host_index = 1.0;
    std::uint64_t seed = 0;
    std::string unit = "nm^2";
    std::size_t count = 0;
    ThicknessBounds bounds;
    std::string subset = "all";  // all | train | validation | test

    friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

struct Record {
    std::vector<double> thicknesses;
    std::vector<double> spectrum;

    friend bool operator==(const Record&, const Record&) = default;
};

struct Dataset {
    DatasetManifest manifest;
    std::vector<Record> records;

    std::size_t size() const noexcept { return records.size(); }
    LayerStack stack(std::size_t i) const;
    Spectrum spectrum(std::size_t i) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Throws ArgumentError if records disagree with the manifest.
void validate(const Dataset& ds);

/// i.i.d. uniform thicknesses; a pure function of (seed, index).
LayerStack sample_stack(std::uint64_t seed, std::uint64_t index, std::size_t num_layers,
                        ThicknessBounds bounds = kDesignBox);

struct GenerateOptions {
    std::size_t count = 20000;
    std::size_t num_layers = 12;
    SpectralGrid grid;
    double host_index = 1.0;
    std::uint64_t seed = 0;
    ThicknessBounds bounds = kDesignBox;
    std::array<std::string, 2> material_cycle{"SiO2", "TiO2"};
    unsigned workers = 1;  // never changes the result
};

/// Record i is the oracle spectrum of sample_stack(seed, i).
Dataset generate_dataset(const GenerateOptions& options, const MaterialLibrary& materials);

struct SplitFractions {
    double train = 0.90;
    double validation = 0.05;
    double test = 0.05;
};

struct DatasetSplit {
    Dataset train;
    Dataset validation;
    Dataset test;
};

/// Seeded shuffle, then floor / floor / remainder sizing.
DatasetSplit split_dataset(const Dataset& ds, SplitFractions fractions, std::uint64_t seed);

// NLD1 layout: "NLD1\n", key: value manifest, "end_header\n", little-endian
// f64 payload (record-major: thicknesses then spectrum), CRC-32 of payload.
void write_dataset(std::ostream& out, const Dataset& ds);
Dataset read_dataset(std::istream& in);
void save_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace nanodesign
