#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpefl {

struct SpectralLine {
    double energy = 0.0;
    double weight = 0.0;
};

/// Weighted eigenvalue lines (E_mu, |<phi_mu|B|phi_0>|^2 or |C_mu|^2).
struct Spectrum {
    std::vector<SpectralLine> lines;
    std::string label;
    std::string units;

    double total_weight() const {
        double acc = 0.0;
        for (const auto& l : lines) acc += l.weight;
        return acc;
    }
};

namespace detail {

inline bool parse_double(const std::string& field, double& out) {
    std::size_t used = 0;
    try {
        out = std::stod(field, &used);
    } catch (const std::exception&) {
        return false;
    }
    while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
    return used == field.size() && std::isfinite(out);
}

}  // namespace detail

/// Parses two-column CSV `energy,weight`. `#`-prefixed comment lines are
/// skipped, one leading header line is allowed, rows are sorted by energy.
inline Spectrum parse_spectrum(std::istream& in, const std::string& origin = "<stream>") {
    Spectrum spec;
    std::string line;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
        std::size_t first = trimmed.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (trimmed[first] == '#') continue;

        std::istringstream row(trimmed);
        std::string f_energy, f_weight, extra;
        std::getline(row, f_energy, ',');
        if (!std::getline(row, f_weight, ','))
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": expected two comma-separated columns");
        if (std::getline(row, extra, ',') && extra.find_first_not_of(" \t") != std::string::npos)
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": expected two comma-separated columns");

        double energy = 0.0, weight = 0.0;
        const bool ok = detail::parse_double(f_energy, energy) && detail::parse_double(f_weight, weight);
        if (!ok) {
            if (header_allowed) {  // tolerate a single leading header row
                header_allowed = false;
                continue;
            }
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": malformed row '" + trimmed + "'");
        }
        header_allowed = false;
        if (weight < 0.0)
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": negative weight");
        spec.lines.push_back({energy, weight});
    }
    if (spec.lines.empty()) throw std::runtime_error(origin + ": empty spectrum");
    std::stable_sort(spec.lines.begin(), spec.lines.end(),
                     [](const SpectralLine& a, const SpectralLine& b) { return a.energy < b.energy; });
    return spec;
}

inline Spectrum load_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spectrum file '" + path + "'");
    Spectrum spec = parse_spectrum(in, path);
    spec.label = path;
    return spec;
}

/// Shifts every line by -e0 (the H - E0 substitution applied at load time).
inline Spectrum shift_spectrum(Spectrum spec, double e0) {
    for (auto& l : spec.lines) l.energy -= e0;
    return spec;
}

}  // namespace qpefl
