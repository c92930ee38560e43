/// @file output.hpp
/// @brief Time-series CSV emission and legacy-ASCII VTK field snapshots.

#ifndef VVNS_OUTPUT_HPP
#define VVNS_OUTPUT_HPP

#include <string>
#include <vector>

#include "vvns/diagnostics.hpp"
#include "vvns/fespace.hpp"

namespace vvns {

/// CSV with the fixed header
/// t,u_l2,u_h1,w_l2,w_h1,g_u,g_w,identity_residual,div_residual,cd,probe_v
/// one row per record, 17 significant digits; unset cd/probe_v emit empty
/// cells. Throws std::runtime_error on an unwritable path.
void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path);

/// Reads back a file produced by write_timeseries (bit-exact round trip).
std::vector<DiagnosticsRecord> read_timeseries(const std::string& path);

/// Legacy ASCII VTK unstructured grid with point data at mesh vertices:
/// velocity (vector), vorticity, speed |u|, and pressure. P2 fields are
/// sampled at the vertices; the downsampling is recorded in the title line.
void write_snapshot(const Field& velocity, const Field& vorticity, const Field& pressure,
                    const Mesh& mesh, const std::string& path);

}  // namespace vvns

#endif
