#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "qn/core/errors.hpp"
#include "qn/kinetic/grid.hpp"
#include "qn/kinetic/particles.hpp"

namespace qn {

// Particle dump: one row per particle, columns x0..,v0..,w.
inline void write_particles_csv(const std::string& path, const ParticleEnsemble& ens) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open '" + path + "' for writing");
    for (int d = 0; d < ens.dim; ++d) f << "x" << d << ",";
    for (int d = 0; d < ens.dim; ++d) f << "v" << d << ",";
    f << "w\n";
    char buf[32];
    for (std::size_t p = 0; p < ens.size(); ++p) {
        for (int d = 0; d < ens.dim; ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", ens.x[d][p]);
            f << buf << ",";
        }
        for (int d = 0; d < ens.dim; ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", ens.v[d][p]);
            f << buf << ",";
        }
        std::snprintf(buf, sizeof buf, "%.17g", ens.w[p]);
        f << buf << "\n";
    }
}

inline ParticleEnsemble read_particles_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open '" + path + "'");
    std::string header;
    if (!std::getline(f, header)) throw config_error("empty particle CSV");
    int dim = 0;
    {
        std::istringstream hs(header);
        std::string cell;
        while (std::getline(hs, cell, ','))
            if (cell.size() == 2 && cell[0] == 'x') ++dim;
    }
    if (dim < 1 || dim > 3) throw config_error("particle CSV: bad header '" + header + "'");
    ParticleEnsemble ens;
    ens.dim = dim;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream rs(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
        if (int(row.size()) != 2 * dim + 1)
            throw config_error("particle CSV: row width mismatch");
        for (int d = 0; d < dim; ++d) ens.x[d].push_back(row[d]);
        for (int d = 0; d < dim; ++d) ens.v[d].push_back(row[dim + d]);
        ens.w.push_back(row[2 * dim]);
    }
    return ens;
}

// Grid dump: node indices, deposited density, fluctuation potential and its
// gradient (i[,j[,k]],rho,psi,gpsi_x[,gpsi_y[,gpsi_z]]).
inline void write_grid_csv(const std::string& path, const FieldGrid& g) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open '" + path + "' for writing");
    const char* axes[3] = {"x", "y", "z"};
    f << "i";
    if (g.dim > 1) f << ",j";
    if (g.dim > 2) f << ",k";
    f << ",rho,psi";
    for (int d = 0; d < g.dim; ++d) f << ",gpsi_" << axes[d];
    f << "\n";
    char buf[32];
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                const std::size_t idx = g.index(i, j, k);
                f << i;
                if (g.dim > 1) f << "," << j;
                if (g.dim > 2) f << "," << k;
                std::snprintf(buf, sizeof buf, "%.17g", g.rho[idx]);
                f << "," << buf;
                std::snprintf(buf, sizeof buf, "%.17g", g.psi[idx]);
                f << "," << buf;
                for (int d = 0; d < g.dim; ++d) {
                    std::snprintf(buf, sizeof buf, "%.17g", g.gpsi[d][idx]);
                    f << "," << buf;
                }
                f << "\n";
            }
}

} // namespace qn
