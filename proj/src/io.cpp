#include "symspace/io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace symspace {

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw std::invalid_argument("write_csv: header/column count mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("write_csv: columns of unequal length");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k][i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

void write_function_csv(const std::string& path, const std::vector<double>& grid, const std::vector<cplx>& values,
                        const std::string& grid_name) {
    std::vector<double> re(values.size()), im(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = values[i].real();
        im[i] = values[i].imag();
    }
    write_csv(path, {grid_name, "value_real", "value_imag"}, {grid, re, im});
}

nlohmann::json describe(const SpaceParams& s) {
    return {{"m1", s.m1}, {"m2", s.m2}, {"d", s.d}, {"rho", s.rho}};
}

nlohmann::json describe(const PanelGrid& g) {
    return {{"lower", g.lower()}, {"upper", g.upper()}, {"panels", g.panels()}, {"order", g.order()},
            {"nodes", g.size()}};
}

nlohmann::json describe(const SphericalTransform& T) {
    return {{"space", describe(T.space())},
            {"t_grid", describe(T.tgrid())},
            {"lambda_grid", describe(T.lgrid())},
            {"kappa_inv", T.kappa_inv()}};
}

}  // namespace symspace
