//==============================================================================
// csvio.hpp
// Deterministic CSV reading/writing: header row, comma separator, '.' decimal,
// 17 significant digits so identical runs are byte-identical.
//==============================================================================
#pragma once

#include "kakinuma/state.hpp"

#include <string>
#include <vector>

namespace kakinuma {

std::string format_g17(double x);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const; // -1 when absent
};

void write_csv(const std::string& path, const Table& table);
Table read_csv(const std::string& path);

// Canonical data file: columns x, zeta, phi.
CanonicalState read_canonical_csv(const std::string& path, const Grid1D& grid);
void write_canonical_csv(const std::string& path, const CanonicalState& canon);

// Full state file: columns x, zeta, phi1_0.., phi2_0..
State read_state_csv(const std::string& path, const Grid1D& grid,
                     const ModelParams& params);
void write_state_csv(const std::string& path, const State& state);

} // namespace kakinuma
