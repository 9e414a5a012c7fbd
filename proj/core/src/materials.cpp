#include "nanodesign/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "nanodesign/errors.hpp"

namespace nanodesign {

MaterialTable::MaterialTable(std::string name, std::vector<Sample> samples)
    : name_(std::move(name)), samples_(std::move(samples)) {
    if (samples_.empty()) throw ArgumentError("material '" + name_ + "' has no samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (!std::isfinite(s.wavelength_nm) || !std::isfinite(s.index.real()) ||
            !std::isfinite(s.index.imag())) {
            throw ArgumentError("material '" + name_ + "' has a non-finite sample");
        }
        if (s.index.imag() < 0.0) {
            throw ArgumentError("material '" + name_ + "' has negative Im(n)");
        }
        if (i > 0 && !(s.wavelength_nm > samples_[i - 1].wavelength_nm)) {
            throw ArgumentError("material '" + name_ + "' wavelengths must be strictly increasing");
        }
    }
}

bool MaterialTable::covers(double lo_nm, double hi_nm) const noexcept {
    return lo_nm >= min_wavelength() && hi_nm <= max_wavelength();
}

Complex refractive_index(const MaterialTable& table, double wavelength_nm) {
    const auto& s = table.samples();
    if (!(wavelength_nm >= table.min_wavelength() && wavelength_nm <= table.max_wavelength())) {
        std::ostringstream msg;
        msg << "wavelength " << wavelength_nm << " nm outside the table of material '"
            << table.name() << "' [" << table.min_wavelength() << ", " << table.max_wavelength()
            << "] nm";
        throw DomainError(msg.str());
    }
    auto hi = std::lower_bound(s.begin(), s.end(), wavelength_nm,
                               [](const MaterialTable::Sample& a, double w) {
                                   return a.wavelength_nm < w;
                               });
    if (hi->wavelength_nm == wavelength_nm) return hi->index;
    auto lo = hi - 1;
    const double t = (wavelength_nm - lo->wavelength_nm) / (hi->wavelength_nm - lo->wavelength_nm);
    return lo->index + t * (hi->index - lo->index);
}

MaterialTable constant_material(std::string name, Complex index, double lo_nm, double hi_nm) {
    return MaterialTable(std::move(name), {{lo_nm, index}, {hi_nm, index}});
}

MaterialTable silica() { return constant_material("SiO2", {1.45, 0.0}); }
MaterialTable titania() { return constant_material("TiO2", {2.40, 0.0}); }

MaterialTable parse_material_table(std::istream& in) {
    std::string line;
    std::string name;
    while (std::getline(in, line)) {
        std::istringstream head(line);
        std::string hash, keyword;
        if (!(head >> hash)) continue;
        if (hash != "#" || !(head >> keyword) || keyword != "material" || !(head >> name)) {
            throw ArgumentError("material table must start with '# material <name>'");
        }
        break;
    }
    if (name.empty()) throw ArgumentError("material table header missing");

    std::vector<MaterialTable::Sample> samples;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        double w = 0, re = 0, im = 0;
        if (!(row >> w)) continue;  // blank line
        if (!(row >> re >> im)) {
            throw ArgumentError("material '" + name + "': malformed row at line " +
                                std::to_string(line_no));
        }
        samples.push_back({w, {re, im}});
    }
    return MaterialTable(name, std::move(samples));
}

MaterialTable load_material_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open material table " + path.string());
    return parse_material_table(in);
}

void write_material_table(std::ostream& out, const MaterialTable& table) {
    out << "# material " << table.name() << '\n' << std::setprecision(17);
    for (const auto& s : table.samples()) {
        out << s.wavelength_nm << ' ' << s.index.real() << ' ' << s.index.imag() << '\n';
    }
}

MaterialLibrary MaterialLibrary::defaults() {
    MaterialLibrary lib;
    lib.add(silica());
    lib.add(titania());
    return lib;
}

void MaterialLibrary::add(MaterialTable table) {
    const std::string key = table.name();
    tables_.insert_or_assign(key, std::move(table));
}

bool MaterialLibrary::contains(const std::string& name) const { return tables_.contains(name); }

const MaterialTable& MaterialLibrary::at(const std::string& name) const {
    auto it = tables_.find(name);
    if (it == tables_.end()) throw DomainError("unknown material '" + name + "'");
    return it->second;
}

}  // namespace nanodesign
