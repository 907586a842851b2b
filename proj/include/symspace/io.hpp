#pragma once
// Columnar CSV output and JSON descriptors for sampled functions.

#include <string>
#include <vector>

#include "json.hpp"
#include "symspace/transforms.hpp"

namespace symspace {

// Writes a header row followed by one row per index; all columns must have
// equal length.  Throws std::runtime_error when the file cannot be written.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

// (grid, value-real, value-imag) tables.
void write_function_csv(const std::string& path, const std::vector<double>& grid, const std::vector<cplx>& values,
                        const std::string& grid_name = "grid");

nlohmann::json describe(const SpaceParams& s);
nlohmann::json describe(const PanelGrid& g);
// Space parameters, both grids and the inversion constant.
nlohmann::json describe(const SphericalTransform& T);

}  // namespace symspace
