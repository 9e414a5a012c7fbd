#include "nanodesign/model_io.hpp"

#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "nanodesign/binary_io.hpp"
#include "nanodesign/errors.hpp"
#include "nanodesign/text_manifest.hpp"

namespace nanodesign {
namespace {

constexpr const char* kMagic = "NLM1";
constexpr const char* kHeaderEnd = "end_header";

TextManifest header_of(const MlpModel& model, std::size_t payload_bytes) {
    TextManifest t;
    t.set("format", std::string("nanodesign-model"));
    t.set("architecture", to_string(model.arch.kind));
    t.set("input_dim", model.arch.input_dim);
    t.set("hidden_layers", model.arch.hidden_layers);
    t.set("hidden_width", model.arch.hidden_width);
    t.set("output_dim", model.arch.output_dim);
    t.set("activation", std::string("selu"));
    t.set("init_seed", model.init_seed);
    t.set("input_min_nm", model.normalizer.box().min_nm);
    t.set("input_max_nm", model.normalizer.box().max_nm);
    t.set("output_scale", model.normalizer.output_scale());
    t.set("loss_m", model.config.m);
    t.set("epochs", model.config.epochs);
    t.set("batch_size", model.config.batch_size);
    t.set("learning_rate", model.config.learning_rate);
    t.set("adam_beta1", model.config.beta1);
    t.set("adam_beta2", model.config.beta2);
    t.set("adam_epsilon", model.config.epsilon);
    t.set("train_seed", model.config.seed);
    t.set("epochs_trained", model.history.size());
    const auto& p = model.provenance;
    t.set("lambda_min_nm", p.grid.lambda_min());
    t.set("lambda_max_nm", p.grid.lambda_max());
    t.set("n_points", p.grid.size());
    t.set("material_core", p.material_cycle[0]);
    t.set("material_shell", p.material_cycle[1]);
    t.set("host_index", p.host_index);
    t.set("dataset_seed", p.dataset_seed);
    t.set("dataset_count", p.dataset_count);
    t.set("split_seed", p.split_seed);
    t.set("split_train", p.split_fractions[0]);
    t.set("split_validation", p.split_fractions[1]);
    t.set("split_test", p.split_fractions[2]);
    t.set("parameter_count", model.params.count());
    t.set("parameter_order", std::string("channel,layer,weight_row_major,bias"));
    t.set("payload_bytes", payload_bytes);
    return t;
}

int as_int(const TextManifest& t, const char* key) { return static_cast<int>(t.get_int(key)); }

}  // namespace

void write_model(std::ostream& out, const MlpModel& model) {
    std::string payload;
    for (double v : model.params.flatten()) append_le_f64(payload, v);
    out << kMagic << '\n';
    header_of(model, payload.size()).write(out);
    out << kHeaderEnd << '\n';
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    std::string trailer;
    append_le_u32(trailer, crc32(payload));
    out.write(trailer.data(), static_cast<std::streamsize>(trailer.size()));
}

MlpModel read_model(std::istream& in) {
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const std::string magic_line = std::string(kMagic) + "\n";
    if (bytes.rfind("NLM", 0) != 0) throw FormatError(FormatError::Kind::Version, "not a model file");
    if (bytes.rfind(magic_line, 0) != 0) {
        throw FormatError(FormatError::Kind::Version,
                          "unsupported model version '" + bytes.substr(0, bytes.find('\n')) + "'");
    }
    const std::string marker = std::string("\n") + kHeaderEnd + "\n";
    const auto marker_pos = bytes.find(marker);
    if (marker_pos == std::string::npos) {
        throw FormatError(FormatError::Kind::Length, "model header truncated");
    }
    std::istringstream header(bytes.substr(magic_line.size(), marker_pos + 1 - magic_line.size()));
    const TextManifest t = TextManifest::read(header);

    Architecture arch{parse_architecture_kind(t.get("architecture")), as_int(t, "input_dim"),
                      as_int(t, "hidden_layers"), as_int(t, "hidden_width"), as_int(t, "output_dim")};
    MlpModel model = init_network(arch, 0);
    model.init_seed = t.get_uint("init_seed");
    model.normalizer = Normalizer({t.get_double("input_min_nm"), t.get_double("input_max_nm")},
                                  t.get_double("output_scale"));
    model.config.m = t.get_double("loss_m");
    model.config.epochs = as_int(t, "epochs");
    model.config.batch_size = as_int(t, "batch_size");
    model.config.learning_rate = t.get_double("learning_rate");
    model.config.beta1 = t.get_double("adam_beta1");
    model.config.beta2 = t.get_double("adam_beta2");
    model.config.epsilon = t.get_double("adam_epsilon");
    model.config.seed = t.get_uint("train_seed");
    auto& p = model.provenance;
    p.grid = SpectralGrid(t.get_double("lambda_min_nm"), t.get_double("lambda_max_nm"),
                          t.get_uint("n_points"));
    p.material_cycle = {t.get("material_core"), t.get("material_shell")};
    p.host_index = t.get_double("host_index");
    p.dataset_seed = t.get_uint("dataset_seed");
    p.dataset_count = t.get_uint("dataset_count");
    p.split_seed = t.get_uint("split_seed");
    p.split_fractions = {t.get_double("split_train"), t.get_double("split_validation"),
                         t.get_double("split_test")};

    const std::size_t payload_bytes = t.get_uint("payload_bytes");
    const std::size_t begin = marker_pos + marker.size();
    if (bytes.size() != begin + payload_bytes + 4) {
        throw FormatError(FormatError::Kind::Length, "model payload length mismatch");
    }
    const auto* payload = reinterpret_cast<const unsigned char*>(bytes.data() + begin);
    if (crc32(std::span(payload, payload_bytes)) != read_le_u32(payload + payload_bytes)) {
        throw FormatError(FormatError::Kind::Checksum, "model checksum mismatch");
    }
    if (payload_bytes != model.params.count() * 8) {
        throw FormatError(FormatError::Kind::Length, "parameter count disagrees with architecture");
    }
    std::vector<double> flat(model.params.count());
    for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = read_le_f64(payload + 8 * i);
    model.params.assign(flat);
    return model;
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
    write_file_atomically(path, [&](std::ostream& out) { write_model(out, model); });
}

MlpModel load_model(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    return read_model(in);
}

}  // namespace nanodesign
