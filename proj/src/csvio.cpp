//==============================================================================
// csvio.cpp
// CSV plumbing with locale-independent, fixed-precision float formatting.
//==============================================================================
#include "kakinuma/csvio.hpp"

#include "kakinuma/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace kakinuma {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

int Table::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    for (size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_g17(row[i]);
        out << "\n";
    }
}

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file: " + path);
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV file: " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        while (std::getline(rs, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("non-numeric CSV cell \"" + cell + "\" in " + path);
            }
        }
        if (row.size() != t.header.size())
            throw ConfigError("ragged CSV row in " + path);
        t.rows.push_back(std::move(row));
    }
    return t;
}

CanonicalState read_canonical_csv(const std::string& path, const Grid1D& grid) {
    const Table t = read_csv(path);
    const int cz = t.column("zeta"), cp = t.column("phi");
    if (cz < 0 || cp < 0)
        throw ConfigError("canonical CSV needs columns zeta and phi: " + path);
    if (static_cast<int>(t.rows.size()) != grid.points)
        throw ConfigError("canonical CSV row count does not match grid M: " + path);
    CanonicalState c{Field(grid), Field(grid)};
    for (int i = 0; i < grid.points; ++i) {
        c.zeta[i] = t.rows[i][cz];
        c.phi[i] = t.rows[i][cp];
    }
    return c;
}

void write_canonical_csv(const std::string& path, const CanonicalState& canon) {
    Table t;
    t.header = {"x", "zeta", "phi"};
    for (int i = 0; i < canon.zeta.size(); ++i)
        t.rows.push_back({canon.zeta.grid.node(i), canon.zeta[i], canon.phi[i]});
    write_csv(path, t);
}

State read_state_csv(const std::string& path, const Grid1D& grid,
                     const ModelParams& params) {
    const Table t = read_csv(path);
    if (static_cast<int>(t.rows.size()) != grid.points)
        throw ConfigError("state CSV row count does not match grid M: " + path);
    const int cz = t.column("zeta");
    if (cz < 0) throw ConfigError("state CSV needs a zeta column: " + path);
    State s;
    s.zeta = Field(grid);
    s.phi1.assign(params.N + 1, Field(grid));
    s.phi2.assign(params.Nstar() + 1, Field(grid));
    std::vector<int> c1(params.N + 1), c2(params.Nstar() + 1);
    for (int j = 0; j <= params.N; ++j) {
        c1[j] = t.column("phi1_" + std::to_string(j));
        if (c1[j] < 0) throw ConfigError("state CSV missing phi1_" + std::to_string(j));
    }
    for (int j = 0; j <= params.Nstar(); ++j) {
        c2[j] = t.column("phi2_" + std::to_string(j));
        if (c2[j] < 0) throw ConfigError("state CSV missing phi2_" + std::to_string(j));
    }
    for (int i = 0; i < grid.points; ++i) {
        s.zeta[i] = t.rows[i][cz];
        for (int j = 0; j <= params.N; ++j) s.phi1[j][i] = t.rows[i][c1[j]];
        for (int j = 0; j <= params.Nstar(); ++j) s.phi2[j][i] = t.rows[i][c2[j]];
    }
    return s;
}

void write_state_csv(const std::string& path, const State& state) {
    Table t;
    t.header = {"x", "zeta"};
    for (size_t j = 0; j < state.phi1.size(); ++j)
        t.header.push_back("phi1_" + std::to_string(j));
    for (size_t j = 0; j < state.phi2.size(); ++j)
        t.header.push_back("phi2_" + std::to_string(j));
    for (int i = 0; i < state.zeta.size(); ++i) {
        std::vector<double> row{state.zeta.grid.node(i), state.zeta[i]};
        for (const Field& f : state.phi1) row.push_back(f[i]);
        for (const Field& f : state.phi2) row.push_back(f[i]);
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

} // namespace kakinuma
