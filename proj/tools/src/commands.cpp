#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "nanodesign/binary_io.hpp"
#include "nanodesign/dataset.hpp"
#include "nanodesign/design.hpp"
#include "nanodesign/errors.hpp"
#include "nanodesign/mie.hpp"
#include "nanodesign/model_io.hpp"
#include "nanodesign/text_manifest.hpp"
#include "nanodesign/training.hpp"
#include "plot.hpp"

namespace nanodesign::cli {
namespace fs = std::filesystem;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string config;
    std::string out;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, Common& common, bool out_required = true) {
    cmd->add_option("--seed", common.seed, "Seed for every random stream of this run")
        ->capture_default_str();
    cmd->add_option("--config", common.config, "key: value file supplying default flags");
    auto* out = cmd->add_option("--out", common.out, "Output path");
    if (out_required) out->required();
    cmd->add_option("--workers", common.workers, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
}

std::string joined_command(const std::vector<std::string>& argv) {
    std::string out;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

Provenance base_provenance(const std::vector<std::string>& argv, std::uint64_t seed) {
    return {{"tool", std::string("nanodesign ") + NANODESIGN_VERSION},
            {"command", joined_command(argv)},
            {"seed", std::to_string(seed)}};
}

std::string csv_number(double v) { return format_double(v); }

void write_text(const fs::path& path, const std::string& text) {
    write_file_atomically(path, [&](std::ostream& out) { out << text; });
}

/// CSV with the provenance as leading `#` comment lines.
void write_csv(const fs::path& path, const Provenance& provenance, const std::string& header,
               const std::vector<std::vector<double>>& columns) {
    std::ostringstream out;
    for (const auto& [k, v] : provenance) out << "# " << k << ": " << v << '\n';
    out << header << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ',';
            out << csv_number(columns[c][r]);
        }
        out << '\n';
    }
    write_text(path, out.str());
}

fs::path sibling(const std::string& out, const std::string& suffix) {
    fs::path p(out);
    p.replace_extension(suffix);
    return p;
}

MaterialLibrary material_library(const std::vector<std::string>& files) {
    MaterialLibrary lib = MaterialLibrary::defaults();
    for (const auto& f : files) lib.add(load_material_table(f));
    return lib;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(parse_double(item));
        } catch (const std::exception&) {
            throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(what) + " is empty");
    return out;
}

std::array<std::string, 2> material_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == text.size()) {
        throw UsageError("--materials expects <core>,<next>, got '" + text + "'");
    }
    return {text.substr(0, comma), text.substr(comma + 1)};
}

SplitFractions split_fractions(const std::string& text) {
    const auto f = parse_list(text, "--split");
    if (f.size() != 3) throw UsageError("--split expects three fractions");
    return {f[0], f[1], f[2]};
}

void print_manifest(const Dataset& ds, std::ostream& out) {
    const auto& m = ds.manifest;
    out << "records: " << ds.size() << "\nlayers: " << m.num_layers << "\ngrid: " << m.grid.lambda_min()
        << "-" << m.grid.lambda_max() << " nm, " << m.grid.size() << " points\nmaterials: "
        << m.material_cycle[0] << "," << m.material_cycle[1] << "\nhost_index: " << m.host_index
        << "\nseed: " << m.seed << "\nunit: " << m.unit << '\n';
}

struct TrainSetup {
    ArchitectureKind kind = ArchitectureKind::TwoChannel;
    int hidden_layers = 7;
    int hidden_width = 0;  // 0 picks the architecture default
    TrainConfig config;
};

MlpModel train_on_split(const Dataset& all, const DatasetSplit& split, const SplitFractions& fractions,
                        std::uint64_t seed, const TrainSetup& setup, const EpochCallback& on_epoch) {
    const int layers = static_cast<int>(all.manifest.num_layers);
    const int points = static_cast<int>(all.manifest.grid.size());
    const Architecture arch =
        setup.kind == ArchitectureKind::TwoChannel
            ? Architecture::tcnn(layers, points, setup.hidden_layers,
                                 setup.hidden_width > 0 ? setup.hidden_width : 250)
            : Architecture::fcnn(layers, points, setup.hidden_layers,
                                 setup.hidden_width > 0 ? setup.hidden_width : 520);
    MlpModel model = init_network(arch, seed);
    model.normalizer = Normalizer::fit(split.train, all.manifest.bounds);
    model.provenance.grid = all.manifest.grid;
    model.provenance.material_cycle = all.manifest.material_cycle;
    model.provenance.host_index = all.manifest.host_index;
    model.provenance.dataset_seed = all.manifest.seed;
    model.provenance.dataset_count = all.size();
    model.provenance.split_seed = seed;
    model.provenance.split_fractions = {fractions.train, fractions.validation, fractions.test};
    TrainConfig config = setup.config;
    config.seed = seed;
    return train(std::move(model), split.train, split.validation, config, on_epoch);
}

void add_train_options(CLI::App* cmd, TrainSetup& setup) {
    cmd->add_option("--epochs", setup.config.epochs)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--batch-size", setup.config.batch_size)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--learning-rate", setup.config.learning_rate)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--loss-m", setup.config.m, "Weight of the first spectrum half")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--hidden-layers", setup.hidden_layers)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--hidden-width", setup.hidden_width, "Default 250 (tcnn) or 520 (fcnn)")
        ->check(CLI::PositiveNumber);
}

EpochCallback progress_printer(int every) {
    return [every](const EpochRecord& r) {
        if (r.epoch == 1 || r.epoch % every == 0) {
            std::cerr << "epoch " << r.epoch << "  train_loss " << r.train_loss << "  val_error "
                      << r.validation_error << '\n';
        }
    };
}

// ---------------------------------------------------------------- generate

void register_generate(CLI::App& app, const std::vector<std::string>& argv) {
    struct Args {
        Common common;
        GenerateOptions gen;
        double lambda_min = 400, lambda_max = 800;
        std::size_t points = 400;
        std::string materials = "SiO2,TiO2";
        std::vector<std::string> material_files;
    };
    auto args = std::make_shared<Args>();
    args->gen.count = 20000;
    auto* cmd = app.add_subcommand("generate", "Sample stacks and compute their oracle spectra");
    add_common(cmd, args->common);
    cmd->add_option("--layers", args->gen.num_layers)->required()->check(CLI::PositiveNumber);
    cmd->add_option("--count", args->gen.count)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--lambda-min", args->lambda_min)->capture_default_str();
    cmd->add_option("--lambda-max", args->lambda_max)->capture_default_str();
    cmd->add_option("--points", args->points)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--host-index", args->gen.host_index)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--thickness-min", args->gen.bounds.min_nm)->capture_default_str();
    cmd->add_option("--thickness-max", args->gen.bounds.max_nm)->capture_default_str();
    cmd->add_option("--materials", args->materials, "Material cycle <core>,<next>")->capture_default_str();
    cmd->add_option("--material-file", args->material_files, "Material table file (repeatable)");
    cmd->callback([args, &argv] {
        auto& a = *args;
        a.gen.seed = a.common.seed;
        a.gen.workers = a.common.workers;
        a.gen.material_cycle = material_pair(a.materials);
        try {
            a.gen.grid = SpectralGrid(a.lambda_min, a.lambda_max, a.points);
        } catch (const ArgumentError& e) {
            throw UsageError(e.what());
        }
        if (!(a.gen.bounds.min_nm > 0 && a.gen.bounds.min_nm <= a.gen.bounds.max_nm)) {
            throw UsageError("thickness bounds must satisfy 0 < min <= max");
        }
        const Dataset ds = generate_dataset(a.gen, material_library(a.material_files));
        save_dataset(ds, a.common.out);
        std::cout << "wrote " << a.common.out << '\n';
        print_manifest(ds, std::cout);
    });
}

// ---------------------------------------------------------------- train

void register_train(CLI::App& app, const std::vector<std::string>& argv) {
    struct Args {
        Common common;
        TrainSetup setup;
        std::string data, arch = "tcnn", split = "0.9,0.05,0.05", history;
        int report_every = 10;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("train", "Train a surrogate on a dataset file");
    add_common(cmd, args->common);
    cmd->add_option("--data", args->data)->required()->check(CLI::ExistingFile);
    cmd->add_option("--arch", args->arch, "tcnn | fcnn")
        ->check(CLI::IsMember({"tcnn", "fcnn"}))
        ->capture_default_str();
    cmd->add_option("--split", args->split, "train,validation,test fractions")->capture_default_str();
    cmd->add_option("--history", args->history, "Per-epoch CSV (default <out>.history.csv)");
    cmd->add_option("--report-every", args->report_every)->check(CLI::PositiveNumber);
    add_train_options(cmd, args->setup);
    cmd->callback([args, &argv] {
        auto& a = *args;
        a.setup.kind = parse_architecture_kind(a.arch);
        a.setup.config.workers = a.common.workers;
        const SplitFractions fractions = split_fractions(a.split);
        const Dataset ds = load_dataset(a.data);
        DatasetSplit split;
        try {
            split = split_dataset(ds, fractions, a.common.seed);
        } catch (const ArgumentError& e) {
            throw UsageError(e.what());
        }
        const MlpModel model = train_on_split(ds, split, fractions, a.common.seed, a.setup,
                                              progress_printer(a.report_every));
        save_model(model, a.common.out);

        Provenance prov = base_provenance(argv, a.common.seed);
        prov.emplace_back("architecture", a.arch);
        prov.emplace_back("dataset", a.data);
        std::vector<double> epoch, loss, val;
        for (const auto& r : model.history) {
            epoch.push_back(r.epoch);
            loss.push_back(r.train_loss);
            val.push_back(r.validation_error);
        }
        const fs::path history = a.history.empty() ? sibling(a.common.out, ".history.csv") : fs::path(a.history);
        write_csv(history, prov, "epoch,train_loss,mean_val_error", {epoch, loss, val});

        const double val_error = evaluate_mean_error(model, split.validation);
        const double test_error = evaluate_mean_error(model, split.test);
        std::cout << "wrote " << a.common.out << " and " << history.string() << '\n'
                  << "architecture: " << a.arch << " (" << model.arch.hidden_layers << "x"
                  << model.arch.hidden_width << ", " << model.params.count() << " parameters)\n"
                  << "records: train " << split.train.size() << ", validation " << split.validation.size()
                  << ", test " << split.test.size() << '\n'
                  << "mean_validation_error: " << format_double(val_error) << '\n'
                  << "mean_test_error: " << format_double(test_error) << '\n';
    });
}

// ---------------------------------------------------------------- compare

void register_compare(CLI::App& app, const std::vector<std::string>& argv) {
    struct Args {
        Common common;
        TrainSetup setup;
        std::vector<int> layers{2, 3, 4};
        std::size_t count = 5000;
        std::string split = "0.9,0.05,0.05", data_dir, svg;
    };
    auto args = std::make_shared<Args>();
    args->setup.config.epochs = 200;
    auto* cmd = app.add_subcommand("compare", "Two-channel vs single-channel test error per layer count");
    add_common(cmd, args->common);
    cmd->add_option("--layers", args->layers, "Layer counts, e.g. 2,3,4")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--count", args->count, "Records per layer count")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--split", args->split)->capture_default_str();
    cmd->add_option("--data-dir", args->data_dir, "Cache datasets here (layers<L>.nld)");
    cmd->add_option("--svg", args->svg, "Plot path (default <out>.svg)");
    add_train_options(cmd, args->setup);
    cmd->callback([args, &argv] {
        auto& a = *args;
        a.setup.config.workers = a.common.workers;
        const SplitFractions fractions = split_fractions(a.split);
        std::vector<double> layer_col, tcnn_col, fcnn_col, ratio_col;
        for (int layers : a.layers) {
            GenerateOptions gen;
            gen.count = a.count;
            gen.num_layers = static_cast<std::size_t>(layers);
            gen.seed = a.common.seed;
            gen.workers = a.common.workers;
            Dataset ds;
            const fs::path cached = a.data_dir.empty()
                                        ? fs::path()
                                        : fs::path(a.data_dir) / ("layers" + std::to_string(layers) + ".nld");
            bool loaded = false;
            if (!cached.empty() && fs::exists(cached)) {
                ds = load_dataset(cached);
                loaded = ds.size() == gen.count && ds.manifest.seed == gen.seed &&
                         ds.manifest.num_layers == gen.num_layers;
            }
            if (!loaded) {
                ds = generate_dataset(gen, MaterialLibrary::defaults());
                if (!cached.empty()) {
                    fs::create_directories(cached.parent_path());
                    save_dataset(ds, cached);
                }
            }
            const DatasetSplit split = split_dataset(ds, fractions, a.common.seed);
            double errors[2];
            for (int k = 0; k < 2; ++k) {
                TrainSetup s = a.setup;
                s.kind = k == 0 ? ArchitectureKind::TwoChannel : ArchitectureKind::SingleChannel;
                std::cerr << "layers " << layers << ", " << to_string(s.kind) << '\n';
                const MlpModel model = train_on_split(ds, split, fractions, a.common.seed, s,
                                                      progress_printer(std::max(1, s.config.epochs / 5)));
                errors[k] = evaluate_mean_error(model, split.test);
            }
            layer_col.push_back(layers);
            tcnn_col.push_back(errors[0]);
            fcnn_col.push_back(errors[1]);
            ratio_col.push_back(errors[0] / errors[1]);
            std::cout << "layers " << layers << ": tcnn " << format_double(errors[0]) << ", fcnn "
                      << format_double(errors[1]) << ", ratio " << format_double(errors[0] / errors[1]) << '\n';
        }
        Provenance prov = base_provenance(argv, a.common.seed);
        prov.emplace_back("records_per_layer_count", std::to_string(a.count));
        prov.emplace_back("epochs", std::to_string(a.setup.config.epochs));
        prov.emplace_back("error", "mean per-spectrum SSE on the test split, normalised units");
        write_csv(a.common.out, prov, "layers,tcnn_error,fcnn_error,ratio",
                  {layer_col, tcnn_col, fcnn_col, ratio_col});
        const fs::path svg = a.svg.empty() ? sibling(a.common.out, ".svg") : fs::path(a.svg);
        write_text(svg, line_plot_svg("Mean test error by layer count", "layers", "mean test error",
                                      layer_col, {{"tcnn", tcnn_col}, {"fcnn", fcnn_col}}, prov));
        std::cout << "wrote " << a.common.out << " and " << svg.string() << '\n';
    });
}

// ---------------------------------------------------------------- design

Spectrum read_target_csv(const fs::path& path, const SpectralGrid& grid) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open target CSV " + path.string());
    std::vector<double> lambda, values;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw UsageError("target CSV row without a comma: " + line);
        try {
            lambda.push_back(parse_double(line.substr(0, comma)));
            const auto rest = line.substr(comma + 1);
            values.push_back(parse_double(rest.substr(0, rest.find(','))));
        } catch (const std::exception&) {
            throw UsageError("unparsable target CSV row: " + line);
        }
    }
    if (lambda.size() != grid.size()) {
        throw UsageError("target CSV has " + std::to_string(lambda.size()) + " rows, model grid has " +
                         std::to_string(grid.size()));
    }
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (std::abs(lambda[i] - grid.wavelength(i)) > 1e-6) {
            throw UsageError("target CSV wavelengths do not match the model grid");
        }
    }
    return Spectrum{grid, values, false};
}

void register_design(CLI::App& app, const std::vector<std::string>& argv) {
    struct Args {
        Common common;
        std::string model, target_stack, target_data, target_csv, selection = "adaptive", overlay, svg;
        std::size_t record = 0;
        bool no_elitism = false;
        GaConfig ga;
        FineTuneConfig tune;
        std::vector<std::string> material_files;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("design", "Inverse design against a target spectrum");
    add_common(cmd, args->common);
    cmd->add_option("--model", args->model)->required()->check(CLI::ExistingFile);
    auto* t1 = cmd->add_option("--target-stack", args->target_stack, "Oracle target from thicknesses, e.g. 50,40,60");
    auto* t2 = cmd->add_option("--target-data", args->target_data, "Dataset file holding the target")
                   ->check(CLI::ExistingFile);
    auto* t3 = cmd->add_option("--target-csv", args->target_csv, "CSV with lambda_nm,value rows")
                   ->check(CLI::ExistingFile);
    t1->excludes(t2)->excludes(t3);
    t2->excludes(t3);
    cmd->add_option("--record", args->record, "Record index for --target-data")->capture_default_str();
    cmd->add_option("--ga-selection", args->selection, "adaptive | literal | fixed:<N>")->capture_default_str();
    cmd->add_option("--population", args->ga.population_size)->check(CLI::Range(2, 1000000))->capture_default_str();
    cmd->add_option("--t-value", args->ga.t_value, "Fitness threshold")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--max-generations", args->ga.max_generations)->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--selection-cap", args->ga.selection_cap)->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--crossover-fraction", args->ga.crossover_fraction)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    cmd->add_flag("--no-elitism", args->no_elitism, "Do not carry the best individual forward");
    cmd->add_option("--ft-steps", args->tune.steps)->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--ft-lr", args->tune.learning_rate)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--material-file", args->material_files, "Material table file (repeatable)");
    cmd->add_option("--overlay", args->overlay, "Overlay CSV (default <out>.overlay.csv)");
    cmd->add_option("--svg", args->svg, "Overlay plot (default <out>.svg)");
    cmd->callback([args, &argv] {
        auto& a = *args;
        const MlpModel model = load_model(a.model);
        const SpectralGrid& grid = model.provenance.grid;
        OracleContext oracle;
        oracle.materials = material_library(a.material_files);
        oracle.host_index = model.provenance.host_index;
        oracle.material_cycle = model.provenance.material_cycle;

        Spectrum target;
        std::string target_provenance;
        if (!a.target_stack.empty()) {
            const auto t = parse_list(a.target_stack, "--target-stack");
            if (t.size() != static_cast<std::size_t>(model.arch.input_dim)) {
                throw UsageError("target stack has " + std::to_string(t.size()) + " layers, model expects " +
                                 std::to_string(model.arch.input_dim));
            }
            target = spectrum(LayerStack{t, oracle.material_cycle}, oracle.materials, grid, oracle.host_index);
            target_provenance = "oracle spectrum of stack " + a.target_stack + " nm";
        } else if (!a.target_data.empty()) {
            const Dataset ds = load_dataset(a.target_data);
            if (!(ds.manifest.grid == grid)) throw UsageError("dataset grid does not match the model grid");
            if (a.record >= ds.size()) throw UsageError("--record is beyond the dataset");
            target = ds.spectrum(a.record);
            target_provenance = "dataset " + a.target_data + " record " + std::to_string(a.record);
        } else if (!a.target_csv.empty()) {
            target = read_target_csv(a.target_csv, grid);
            target_provenance = "csv " + a.target_csv;
        } else {
            throw UsageError("one of --target-stack, --target-data or --target-csv is required");
        }

        DesignConfig config;
        config.ga = a.ga;
        config.ga.seed = a.common.seed;
        config.ga.elitism = !a.no_elitism;
        config.fine_tune = a.tune;
        try {
            config.ga.selection = SelectionPolicy::parse(a.selection);
            config.ga.validate();
        } catch (const ArgumentError& e) {
            throw UsageError(e.what());
        }

        const DesignReport report = inverse_design(target, model, oracle, config, target_provenance);

        Provenance prov = base_provenance(argv, a.common.seed);
        prov.emplace_back("model", a.model);
        prov.emplace_back("ga_selection", config.ga.selection.to_string());
        prov.emplace_back("ga_population", std::to_string(config.ga.population_size));
        prov.emplace_back("ga_t_value", format_double(config.ga.t_value));
        prov.emplace_back("ga_max_generations", std::to_string(config.ga.max_generations));
        prov.emplace_back("ga_selection_cap", std::to_string(config.ga.selection_cap));
        prov.emplace_back("ga_crossover_fraction", format_double(config.ga.crossover_fraction));
        prov.emplace_back("ga_elitism", config.ga.elitism ? "true" : "false");
        prov.emplace_back("fine_tune_steps", std::to_string(config.fine_tune.steps));
        prov.emplace_back("fine_tune_learning_rate", format_double(config.fine_tune.learning_rate));

        write_file_atomically(a.common.out, [&](std::ostream& out) { write_design_report(out, report, prov); });

        const auto lambda = grid.wavelengths();
        const fs::path overlay = a.overlay.empty() ? sibling(a.common.out, ".overlay.csv") : fs::path(a.overlay);
        Provenance overlay_prov = prov;
        overlay_prov.emplace_back("target", target_provenance);
        write_csv(overlay, overlay_prov, "lambda_nm,target,designed_oracle,designed_surrogate",
                  {lambda, target.values, report.oracle_spectrum.values, report.surrogate_spectrum.values});
        const fs::path svg = a.svg.empty() ? sibling(a.common.out, ".svg") : fs::path(a.svg);
        write_text(svg, line_plot_svg("Target vs designed spectrum", "wavelength (nm)", "cross section (nm^2)",
                                      lambda,
                                      {{"target", target.values},
                                       {"designed (oracle)", report.oracle_spectrum.values},
                                       {"designed (surrogate)", report.surrogate_spectrum.values}},
                                      overlay_prov));

        std::string stack;
        for (std::size_t i = 0; i < report.designed.size(); ++i) {
            if (i) stack += ',';
            std::ostringstream v;
            v << std::fixed << std::setprecision(2) << report.designed.thicknesses[i];
            stack += v.str();
        }
        std::cout << "designed_stack_nm: " << stack << '\n'
                  << "ga_generations: " << report.ga.generations
                  << (report.ga.reached_threshold ? " (threshold reached)" : " (threshold not reached)") << '\n'
                  << "surrogate_error: " << format_double(report.surrogate_error) << '\n'
                  << "oracle_error: " << format_double(report.oracle_error) << '\n'
                  << "oracle_relative_rms: " << format_double(report.oracle_relative_rms) << '\n'
                  << "wrote " << a.common.out << ", " << overlay.string() << " and " << svg.string() << '\n';
    });
}

// ---------------------------------------------------------------- eval

void register_eval(CLI::App& app, const std::vector<std::string>& argv) {
    struct Args {
        Common common;
        std::string model, data, subset = "test", overlay, svg;
        std::size_t record = 0;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("eval", "Mean error of a model on a dataset split");
    add_common(cmd, args->common, false);
    cmd->add_option("--model", args->model)->required()->check(CLI::ExistingFile);
    cmd->add_option("--data", args->data)->required()->check(CLI::ExistingFile);
    cmd->add_option("--subset", args->subset, "all | train | validation | test")
        ->check(CLI::IsMember({"all", "train", "validation", "test"}))
        ->capture_default_str();
    cmd->add_option("--overlay", args->overlay, "Write one held-out overlay CSV here");
    cmd->add_option("--record", args->record, "Record of the chosen subset for --overlay")->capture_default_str();
    cmd->add_option("--svg", args->svg, "Overlay plot (default <overlay>.svg)");
    cmd->callback([args, &argv] {
        auto& a = *args;
        const MlpModel model = load_model(a.model);
        const Dataset ds = load_dataset(a.data);
        if (!(ds.manifest.grid == model.provenance.grid) ||
            ds.manifest.num_layers != static_cast<std::size_t>(model.arch.input_dim)) {
            throw UsageError("dataset layers or grid do not match the model");
        }
        Dataset chosen;
        std::optional<DatasetSplit> split;
        if (a.subset == "all" || ds.manifest.subset != "all") {
            chosen = ds;
        } else {
            const auto& p = model.provenance;
            if (ds.manifest.seed != p.dataset_seed || ds.size() != p.dataset_count) {
                throw UsageError("dataset is not the one the model was trained on; use --subset all");
            }
            split = split_dataset(ds, {p.split_fractions[0], p.split_fractions[1], p.split_fractions[2]},
                                  p.split_seed);
            chosen = a.subset == "train" ? split->train : a.subset == "validation" ? split->validation : split->test;
        }
        const double error = evaluate_mean_error(model, chosen);

        TextManifest summary;
        summary.set("model", a.model);
        summary.set("data", a.data);
        summary.set("subset", a.subset);
        summary.set("records", static_cast<std::uint64_t>(chosen.size()));
        summary.set("mean_error", format_double(error));
        if (split) {
            const double val = evaluate_mean_error(model, split->validation);
            const double test = evaluate_mean_error(model, split->test);
            summary.set("mean_validation_error", format_double(val));
            summary.set("mean_test_error", format_double(test));
            summary.set("test_to_validation_ratio", format_double(test / val));
        }
        summary.write(std::cout);
        if (!a.common.out.empty()) {
            write_file_atomically(a.common.out, [&](std::ostream& out) { summary.write(out); });
        }

        if (!a.overlay.empty()) {
            if (a.record >= chosen.size()) throw UsageError("--record is beyond the chosen subset");
            const Spectrum target = chosen.spectrum(a.record);
            const Spectrum predicted = predict_spectrum(model, chosen.records[a.record].thicknesses);
            Provenance prov = base_provenance(argv, a.common.seed);
            prov.emplace_back("model", a.model);
            prov.emplace_back("subset", a.subset);
            prov.emplace_back("record", std::to_string(a.record));
            prov.emplace_back("relative_rms", format_double(relative_rms_error(predicted.values, target.values)));
            const auto lambda = model.provenance.grid.wavelengths();
            write_csv(a.overlay, prov, "lambda_nm,target,predicted", {lambda, target.values, predicted.values});
            const fs::path svg = a.svg.empty() ? sibling(a.overlay, ".svg") : fs::path(a.svg);
            write_text(svg, line_plot_svg("Held-out spectrum vs surrogate", "wavelength (nm)",
                                          "cross section (nm^2)", lambda,
                                          {{"target", target.values}, {"surrogate", predicted.values}}, prov));
        }
    });
}

}  // namespace

void register_commands(CLI::App& app, const std::vector<std::string>& argv) {
    register_generate(app, argv);
    register_train(app, argv);
    register_compare(app, argv);
    register_design(app, argv);
    register_eval(app, argv);
}

}  // namespace nanodesign::cli
