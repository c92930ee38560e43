/// @file output.cpp

#include "vvns/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vvns {
namespace {

const char* kCsvHeader = "t,u_l2,u_h1,w_l2,w_h1,g_u,g_w,identity_residual,div_residual,cd,probe_v";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
    if (records.empty()) throw std::invalid_argument("write_timeseries: no records");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << kCsvHeader << "\n";
    for (const auto& r : records) {
        out << fmt(r.t) << ',' << fmt(r.u_l2) << ',' << fmt(r.u_h1) << ',' << fmt(r.w_l2) << ','
            << fmt(r.w_h1) << ',' << fmt(r.g_u) << ',' << fmt(r.g_w) << ','
            << fmt(r.identity_residual) << ',' << fmt(r.div_residual) << ',';
        if (r.cd) out << fmt(*r.cd);
        out << ',';
        if (r.probe_v) out << fmt(*r.probe_v);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<DiagnosticsRecord> read_timeseries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error(path + ": bad or missing CSV header");
    std::vector<DiagnosticsRecord> records;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() < 9 || cells.size() > 11)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 11 cells");
        while (cells.size() < 11) cells.emplace_back();  // dropped trailing empty cells
        DiagnosticsRecord r;
        r.t = std::stod(cells[0]);
        r.u_l2 = std::stod(cells[1]);
        r.u_h1 = std::stod(cells[2]);
        r.w_l2 = std::stod(cells[3]);
        r.w_h1 = std::stod(cells[4]);
        r.g_u = std::stod(cells[5]);
        r.g_w = std::stod(cells[6]);
        r.identity_residual = std::stod(cells[7]);
        r.div_residual = std::stod(cells[8]);
        if (!cells[9].empty()) r.cd = std::stod(cells[9]);
        if (!cells[10].empty()) r.probe_v = std::stod(cells[10]);
        records.push_back(r);
    }
    return records;
}

void write_snapshot(const Field& velocity, const Field& vorticity, const Field& pressure,
                    const Mesh& mesh, const std::string& path) {
    const auto& vs = *velocity.space;
    const auto& ws = *vorticity.space;
    const auto& ps = *pressure.space;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);

    const std::size_t nv = mesh.nodes.size();
    out << "# vtk DataFile Version 3.0\n";
    out << "velocity-vorticity snapshot (P2 fields sampled at vertices)\n";
    out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nv << " double\n";
    for (const auto& p : mesh.nodes) out << fmt(p[0]) << ' ' << fmt(p[1]) << " 0\n";

    const std::size_t nt = mesh.triangles.size();
    out << "CELLS " << nt << ' ' << 4 * nt << "\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
    out << "CELL_TYPES " << nt << "\n";
    for (std::size_t i = 0; i < nt; ++i) out << "5\n";

    out << "POINT_DATA " << nv << "\n";
    out << "VECTORS velocity double\n";
    for (std::size_t i = 0; i < nv; ++i) {
        const int s = vs.vertex_scalar_dof(static_cast<int>(i));
        out << fmt(velocity.coeffs[vs.dof_index(s, 0)]) << ' '
            << fmt(velocity.coeffs[vs.dof_index(s, 1)]) << " 0\n";
    }
    out << "SCALARS vorticity double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < nv; ++i)
        out << fmt(vorticity.coeffs[ws.vertex_scalar_dof(static_cast<int>(i))]) << "\n";
    out << "SCALARS speed double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < nv; ++i) {
        const int s = vs.vertex_scalar_dof(static_cast<int>(i));
        const double ux = velocity.coeffs[vs.dof_index(s, 0)];
        const double uy = velocity.coeffs[vs.dof_index(s, 1)];
        out << fmt(std::sqrt(ux * ux + uy * uy)) << "\n";
    }
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < nv; ++i)
        out << fmt(pressure.coeffs[ps.vertex_scalar_dof(static_cast<int>(i))]) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace vvns
