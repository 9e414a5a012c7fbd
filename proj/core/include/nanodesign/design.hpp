#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nanodesign/fine_tune.hpp"
#include "nanodesign/genetic.hpp"
#include "nanodesign/materials.hpp"

namespace nanodesign {

/// What the exact solver needs to verify a design.
struct OracleContext {
    MaterialLibrary materials = MaterialLibrary::defaults();
    double host_index = 1.0;
    std::array<std::string, 2> material_cycle{"SiO2", "TiO2"};
};

struct DesignConfig {
    GaConfig ga;
    FineTuneConfig fine_tune;
};

struct DesignReport {
    std::string target_provenance;
    GaResult ga;
    FineTuneResult tuning;
    LayerStack designed;
    Spectrum target;
    Spectrum surrogate_spectrum;  // physical units
    Spectrum oracle_spectrum;     // physical units
    double surrogate_error = 0.0;  // SSE vs target, normalised units
    double oracle_error = 0.0;     // SSE vs target, normalised units
    double oracle_relative_rms = 0.0;
    bool target_reachable = true;  // false when the GA never reached t_value
};

/// GA search on the quantised alphabet, fine-tuning of the best individual,
/// then verification of the result with the exact solver.
DesignReport inverse_design(const Spectrum& target, const MlpModel& model,
                            const OracleContext& oracle, const DesignConfig& config,
                            std::string target_provenance = "unspecified");

/// Structured text: provenance, GA history table, refined stack and errors.
void write_design_report(std::ostream& out, const DesignReport& report,
                         const std::vector<std::pair<std::string, std::string>>& provenance = {});

}  // namespace nanodesign
