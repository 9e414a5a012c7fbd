#include "nanodesign/design.hpp"

#include <ostream>

#include "nanodesign/errors.hpp"
#include "nanodesign/mie.hpp"
#include "nanodesign/text_manifest.hpp"
#include "nanodesign/training.hpp"

namespace nanodesign {
namespace {

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

}  // namespace

DesignReport inverse_design(const Spectrum& target, const MlpModel& model,
                            const OracleContext& oracle, const DesignConfig& config,
                            std::string target_provenance) {
    if (!(target.grid == model.provenance.grid) ||
        target.size() != static_cast<std::size_t>(model.arch.output_dim)) {
        throw ArgumentError("target spectrum grid does not match the model grid");
    }
    DesignReport report;
    report.target_provenance = std::move(target_provenance);
    report.target = target;
    report.ga = run_ga(target, model, config.ga);
    report.target_reachable = report.ga.reached_threshold;
    report.tuning = fine_tune(model, report.ga.best, target, config.fine_tune);

    report.designed = LayerStack{report.tuning.thicknesses_nm, oracle.material_cycle};
    report.surrogate_spectrum = predict_spectrum(model, report.designed.thicknesses);
    report.oracle_spectrum = spectrum(report.designed, oracle.materials, target.grid, oracle.host_index);

    const auto& norm = model.normalizer;
    const auto target_n = norm.normalize_spectrum(target.values);
    report.surrogate_error = report.tuning.error;
    report.oracle_error =
        sum_squared_error(norm.normalize_spectrum(report.oracle_spectrum.values), target_n);
    report.oracle_relative_rms = relative_rms_error(report.oracle_spectrum.values, target.values);
    return report;
}

void write_design_report(std::ostream& out, const DesignReport& report,
                         const std::vector<std::pair<std::string, std::string>>& provenance) {
    TextManifest m;
    m.set("format", "nanodesign-design-report");
    m.set("target_provenance", report.target_provenance);
    for (const auto& [key, value] : provenance) m.set(key, value);
    m.set("target_reachable", report.target_reachable ? "true" : "false");
    m.set("ga_generations", static_cast<std::int64_t>(report.ga.generations));
    m.set("ga_reached_threshold", report.ga.reached_threshold ? "true" : "false");
    m.set("ga_best_fitness", format_double(report.ga.best_fitness));
    m.set("ga_best_stack_nm", join(report.ga.best));
    m.set("fine_tune_accepted_steps", static_cast<std::int64_t>(report.tuning.accepted_steps));
    m.set("fine_tune_initial_error", format_double(report.tuning.error_trace.empty()
                                                        ? report.tuning.error
                                                        : report.tuning.error_trace.front()));
    m.set("designed_stack_nm", join(report.designed.thicknesses));
    m.set("materials", report.designed.material_cycle[0] + "," + report.designed.material_cycle[1]);
    m.set("surrogate_error", format_double(report.surrogate_error));
    m.set("oracle_error", format_double(report.oracle_error));
    m.set("oracle_relative_rms", format_double(report.oracle_relative_rms));
    m.write(out);

    out << "ga_history\n";
    out << "generation,max_fitness,mean_fitness,best_fitness,n_selection,n_crossover,n_mutation\n";
    for (const auto& r : report.ga.history) {
        out << r.generation << ',' << format_double(r.max_fitness) << ','
            << format_double(r.mean_fitness) << ',' << format_double(r.best_fitness) << ','
            << r.plan.selection << ',' << r.plan.crossover << ',' << r.plan.mutation << '\n';
    }
    out << "end_ga_history\n";
}

}  // namespace nanodesign
