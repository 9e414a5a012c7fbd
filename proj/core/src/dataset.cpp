#include "nanodesign/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "nanodesign/binary_io.hpp"
#include "nanodesign/errors.hpp"
#include "nanodesign/mie.hpp"
#include "nanodesign/parallel.hpp"
#include "nanodesign/text_manifest.hpp"

namespace nanodesign {
namespace {

constexpr const char* kMagic = "NLD1";
constexpr const char* kHeaderEnd = "end_header";

TextManifest to_text(const DatasetManifest& m, std::size_t payload_bytes) {
    TextManifest t;
    t.set("format", std::string("nanodesign-dataset"));
    t.set("num_layers", m.num_layers);
    t.set("count", m.count);
    t.set("lambda_min_nm", m.grid.lambda_min());
    t.set("lambda_max_nm", m.grid.lambda_max());
    t.set("n_points", m.grid.size());
    t.set("material_core", m.material_cycle[0]);
    t.set("material_shell", m.material_cycle[1]);
    t.set("host_index", m.host_index);
    t.set("seed", m.seed);
    t.set("unit", m.unit);
    t.set("thickness_min_nm", m.bounds.min_nm);
    t.set("thickness_max_nm", m.bounds.max_nm);
    t.set("subset", m.subset);
    t.set("payload_bytes", payload_bytes);
    return t;
}

DatasetManifest from_text(const TextManifest& t) {
    DatasetManifest m;
    m.num_layers = t.get_uint("num_layers");
    m.count = t.get_uint("count");
    try {
        m.grid = SpectralGrid(t.get_double("lambda_min_nm"), t.get_double("lambda_max_nm"),
                              t.get_uint("n_points"));
    } catch (const ArgumentError& e) {
        throw FormatError(FormatError::Kind::Header, std::string("bad grid: ") + e.what());
    }
    m.material_cycle = {t.get("material_core"), t.get("material_shell")};
    m.host_index = t.get_double("host_index");
    m.seed = t.get_uint("seed");
    m.unit = t.get("unit");
    m.bounds = {t.get_double("thickness_min_nm"), t.get_double("thickness_max_nm")};
    m.subset = t.get("subset");
    return m;
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> order, std::size_t begin,
               std::size_t end, const char* name) {
    Dataset out;
    out.manifest = ds.manifest;
    out.manifest.subset = name;
    out.records.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) out.records.push_back(ds.records[order[i]]);
    out.manifest.count = out.records.size();
    return out;
}

}  // namespace

LayerStack Dataset::stack(std::size_t i) const {
    return LayerStack{records.at(i).thicknesses, manifest.material_cycle};
}

Spectrum Dataset::spectrum(std::size_t i) const {
    return Spectrum{manifest.grid, records.at(i).spectrum, false};
}

void validate(const Dataset& ds) {
    if (ds.records.size() != ds.manifest.count) {
        throw ArgumentError("dataset record count disagrees with manifest");
    }
    for (const auto& r : ds.records) {
        if (r.thicknesses.size() != ds.manifest.num_layers ||
            r.spectrum.size() != ds.manifest.grid.size()) {
            throw ArgumentError("dataset record shape disagrees with manifest");
        }
    }
}

LayerStack sample_stack(std::uint64_t seed, std::uint64_t index, std::size_t num_layers,
                        ThicknessBounds bounds) {
    if (num_layers < 1) throw ArgumentError("num_layers must be at least 1");
    if (!std::isfinite(bounds.min_nm) || !std::isfinite(bounds.max_nm) || !(bounds.min_nm > 0.0) ||
        bounds.min_nm > bounds.max_nm) {
        throw ArgumentError("thickness bounds must satisfy 0 < min <= max");
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    LayerStack stack;
    stack.thicknesses.resize(num_layers);
    if (bounds.min_nm == bounds.max_nm) {
        std::fill(stack.thicknesses.begin(), stack.thicknesses.end(), bounds.min_nm);
        return stack;
    }
    std::uniform_real_distribution<double> uniform(bounds.min_nm, bounds.max_nm);
    for (double& t : stack.thicknesses) t = uniform(rng);
    return stack;
}

Dataset generate_dataset(const GenerateOptions& options, const MaterialLibrary& materials) {
    if (options.count < 1) throw ArgumentError("dataset count must be at least 1");
    if (options.num_layers < 1) throw ArgumentError("num_layers must be at least 1");
    for (const auto& name : options.material_cycle) {
        const MaterialTable& table = materials.at(name);
        if (!table.covers(options.grid.lambda_min(), options.grid.lambda_max())) {
            throw DomainError("material '" + name + "' does not cover the spectral grid");
        }
    }

    Dataset ds;
    ds.manifest.num_layers = options.num_layers;
    ds.manifest.grid = options.grid;
    ds.manifest.material_cycle = options.material_cycle;
    ds.manifest.host_index = options.host_index;
    ds.manifest.seed = options.seed;
    ds.manifest.count = options.count;
    ds.manifest.bounds = options.bounds;
    ds.records.resize(options.count);

    parallel_for(options.count, options.workers, [&](std::size_t i) {
        LayerStack stack = sample_stack(options.seed, i, options.num_layers, options.bounds);
        stack.material_cycle = options.material_cycle;
        try {
            Spectrum s = spectrum(stack, materials, options.grid, options.host_index);
            ds.records[i] = Record{std::move(stack.thicknesses), std::move(s.values)};
        } catch (const Error& e) {
            throw Error("dataset record " + std::to_string(i) + ": " + e.what());
        }
    });
    return ds;
}

DatasetSplit split_dataset(const Dataset& ds, SplitFractions f, std::uint64_t seed) {
    if (!(f.train > 0.0) || !(f.validation > 0.0) || !(f.test > 0.0) ||
        std::abs(f.train + f.validation + f.test - 1.0) > 1e-9) {
        throw ArgumentError("split fractions must be positive and sum to 1");
    }
    const std::size_t n = ds.size();
    // The 1e-9 guard keeps e.g. 0.29 * 100 from flooring to 28.
    const auto n_train = static_cast<std::size_t>(std::floor(n * f.train + 1e-9));
    const auto n_val = static_cast<std::size_t>(std::floor(n * f.validation + 1e-9));
    if (n_train == 0 || n_val == 0 || n_train + n_val >= n) {
        throw ArgumentError("split of " + std::to_string(n) + " records leaves an empty part");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    return DatasetSplit{subset(ds, order, 0, n_train, "train"),
                        subset(ds, order, n_train, n_train + n_val, "validation"),
                        subset(ds, order, n_train + n_val, n, "test")};
}

void write_dataset(std::ostream& out, const Dataset& ds) {
    validate(ds);
    std::string payload;
    const std::size_t per_record = ds.manifest.num_layers + ds.manifest.grid.size();
    payload.reserve(ds.size() * per_record * 8);
    for (const auto& r : ds.records) {
        for (double t : r.thicknesses) append_le_f64(payload, t);
        for (double v : r.spectrum) append_le_f64(payload, v);
    }
    out << kMagic << '\n';
    to_text(ds.manifest, payload.size()).write(out);
    out << kHeaderEnd << '\n';
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    std::string trailer;
    append_le_u32(trailer, crc32(payload));
    out.write(trailer.data(), static_cast<std::streamsize>(trailer.size()));
}

Dataset read_dataset(std::istream& in) {
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const std::string magic_line = std::string(kMagic) + "\n";
    if (bytes.rfind("NLD", 0) != 0) {
        throw FormatError(FormatError::Kind::Version, "not a dataset file");
    }
    if (bytes.rfind(magic_line, 0) != 0) {
        throw FormatError(FormatError::Kind::Version,
                          "unsupported dataset version '" + bytes.substr(0, bytes.find('\n')) + "'");
    }
    const std::string marker = std::string("\n") + kHeaderEnd + "\n";
    const auto marker_pos = bytes.find(marker);
    if (marker_pos == std::string::npos) {
        throw FormatError(FormatError::Kind::Length, "dataset header truncated");
    }
    std::istringstream header(bytes.substr(magic_line.size(), marker_pos + 1 - magic_line.size()));
    const TextManifest text = TextManifest::read(header);
    Dataset ds;
    ds.manifest = from_text(text);

    const std::size_t payload_bytes = text.get_uint("payload_bytes");
    const std::size_t payload_begin = marker_pos + marker.size();
    if (bytes.size() != payload_begin + payload_bytes + 4) {
        throw FormatError(FormatError::Kind::Length,
                          "dataset payload length mismatch: expected " +
                              std::to_string(payload_bytes + 4) + " bytes, found " +
                              std::to_string(bytes.size() - payload_begin));
    }
    const auto* payload = reinterpret_cast<const unsigned char*>(bytes.data() + payload_begin);
    if (crc32(std::span(payload, payload_bytes)) != read_le_u32(payload + payload_bytes)) {
        throw FormatError(FormatError::Kind::Checksum, "dataset checksum mismatch");
    }
    const std::size_t per_record = ds.manifest.num_layers + ds.manifest.grid.size();
    if (payload_bytes != ds.manifest.count * per_record * 8) {
        throw FormatError(FormatError::Kind::Length, "payload size disagrees with manifest");
    }
    ds.records.resize(ds.manifest.count);
    const unsigned char* p = payload;
    for (auto& r : ds.records) {
        r.thicknesses.resize(ds.manifest.num_layers);
        r.spectrum.resize(ds.manifest.grid.size());
        for (double& t : r.thicknesses) t = read_le_f64(p), p += 8;
        for (double& v : r.spectrum) v = read_le_f64(p), p += 8;
    }
    return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
    write_file_atomically(path, [&](std::ostream& out) { write_dataset(out, ds); });
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    return read_dataset(in);
}

}  // namespace nanodesign
