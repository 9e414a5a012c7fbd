#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace nanodesign {

using Complex = std::complex<double>;

/// Tabulated complex refractive index of one material, linearly interpolated
/// in real and imaginary parts. Wavelengths are in nanometres.
class MaterialTable {
public:
    struct Sample {
        double wavelength_nm;
        Complex index;
    };

    /// Throws ArgumentError unless wavelengths are finite and strictly
    /// increasing, at least one sample is present and every Im(n) >= 0.
    MaterialTable(std::string name, std::vector<Sample> samples);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Sample>& samples() const noexcept { return samples_; }
    double min_wavelength() const noexcept { return samples_.front().wavelength_nm; }
    double max_wavelength() const noexcept { return samples_.back().wavelength_nm; }
    bool covers(double lo_nm, double hi_nm) const noexcept;

private:
    std::string name_;
    std::vector<Sample> samples_;
};

/// Interpolated index at `wavelength_nm`. DomainError outside the table.
Complex refractive_index(const MaterialTable& table, double wavelength_nm);

MaterialTable constant_material(std::string name, Complex index, double lo_nm = 300.0,
                                double hi_nm = 900.0);

// Default lossless tables used when no material files are supplied.
MaterialTable silica();
MaterialTable titania();

/// Text format: `# material <name>` header, then `wavelength_nm n_real n_imag` rows.
MaterialTable parse_material_table(std::istream& in);
MaterialTable load_material_table(const std::filesystem::path& path);
void write_material_table(std::ostream& out, const MaterialTable& table);

/// Name-keyed collection of material tables.
class MaterialLibrary {
public:
    MaterialLibrary() = default;

    /// SiO2 and TiO2 defaults.
    static MaterialLibrary defaults();

    void add(MaterialTable table);
    bool contains(const std::string& name) const;
    const MaterialTable& at(const std::string& name) const;

private:
    std::map<std::string, MaterialTable> tables_;
};

}  // namespace nanodesign
