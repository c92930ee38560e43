/// @file config.hpp
/// @brief Flat key-value run configuration: parsing, validation, and
///        construction of the mesh and scheme setup it describes.

#ifndef VVNS_CONFIG_HPP
#define VVNS_CONFIG_HPP

#include <string>

#include "vvns/mesh.hpp"
#include "vvns/scheme.hpp"

namespace vvns {

/// Everything a `run` invocation needs. `scheme` is fully populated
/// (forcing, initial condition, solver options) from the named choices.
struct RunConfig {
    SchemeConfig scheme;
    std::string scheme_name = "be";
    std::string setting_name = "torus";
    std::string forcing_name = "zero";
    std::string initial_name = "rest";
    std::string mesh_file;  // empty: generate from the parameters below
    int mesh_n = 8;         // torus resolution
    ChannelGrading grading;
    std::string out_dir = ".";
    int snapshot_cadence = 0;  // 0: no snapshots
    unsigned seed = 0;         // random forcing / fixture seed
};

/// Parses and validates a config file. Unknown keys are rejected with a
/// nearest-key suggestion; all errors carry "path:line".
RunConfig parse_config(const std::string& path);

/// Same, from an in-memory string (used by tests); `name` stands in for
/// the path in error messages.
RunConfig parse_config_text(const std::string& text, const std::string& name = "<config>");

/// Builds the mesh the config describes (generator or file).
Mesh build_mesh(const RunConfig& config);

}  // namespace vvns

#endif
