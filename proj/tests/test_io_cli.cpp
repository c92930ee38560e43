/// @file test_io_cli.cpp

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "vvns/config.hpp"
#include "vvns/output.hpp"

using namespace vvns;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string error_of(const std::string& config_text) {
    try {
        parse_config_text(config_text, "cfg");
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

const std::string kMinimal = "nu = 0.01\ndt = 0.1\nt_end = 1.0\nscheme = be\n";

/// Runs the solver binary named by VVNS_BIN; returns its exit code.
int run_cli(const std::string& args, const std::string& stdout_path = "/dev/null",
            const std::string& stderr_path = "/dev/null") {
    const char* bin = std::getenv("VVNS_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "VVNS_BIN must point at the solver binary");
    const std::string cmd =
        std::string(bin) + " " + args + " >" + stdout_path + " 2>" + stderr_path;
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("minimal config and defaults") {
    const RunConfig cfg = parse_config_text(kMinimal, "cfg");
    CHECK(cfg.scheme.nu == 0.01);
    CHECK(cfg.scheme.dt == 0.1);
    CHECK(cfg.scheme.t_end == 1.0);
    CHECK(cfg.scheme.scheme == SchemeKind::BE);
    CHECK(cfg.scheme.setting == Setting::torus);
    CHECK(cfg.mesh_n == 8);
    CHECK(cfg.forcing_name == "zero");
    CHECK(cfg.initial_name == "rest");
    CHECK(cfg.scheme.cadence == 1);
    CHECK(cfg.out_dir == ".");
    CHECK(!cfg.scheme.initial_velocity);
}

TEST_CASE("comments, sections, and value parsing") {
    const std::string text =
        "# header comment\n"
        "[time]\n"
        "nu = 0.05   ; inline comment\n"
        "dt = 0.02\n"
        "t_end = 4\n"
        "scheme = bdf2\n"
        "forcing = random\n"
        "seed = 42\n"
        "initial = taylor_green\n"
        "cadence = 5\n";
    const RunConfig cfg = parse_config_text(text, "cfg");
    CHECK(cfg.scheme.scheme == SchemeKind::BDF2);
    CHECK(cfg.seed == 42);
    CHECK(cfg.scheme.cadence == 5);
    REQUIRE(static_cast<bool>(cfg.scheme.initial_velocity));
    const auto v = cfg.scheme.initial_velocity(M_PI / 2.0, 0.0);
    CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("viscosity is an accepted alias for nu") {
    const RunConfig cfg =
        parse_config_text("viscosity = 0.3\ndt = 0.1\nt_end = 1\nscheme = be\n", "cfg");
    CHECK(cfg.scheme.nu == 0.3);
    CHECK(error_of("viscosity = 0.3\n" + kMinimal).find("aliases") != std::string::npos);
}

TEST_CASE("config errors carry the offending key and line") {
    const std::string neg = error_of("nu = -1\ndt = 0.1\nt_end = 1\nscheme = be\n");
    CHECK(neg.find("'nu'") != std::string::npos);
    CHECK(neg.find("cfg:1") != std::string::npos);

    const std::string typo = error_of("viscocity = 0.01\ndt = 0.1\nt_end = 1\nscheme = be\n");
    CHECK(typo.find("unknown key") != std::string::npos);
    CHECK(typo.find("'viscosity'") != std::string::npos);

    CHECK(error_of(kMinimal + "nu = 0.02\n").find("duplicate") != std::string::npos);
    CHECK(error_of("nu = 0.01\ndt = 0.1\nt_end = 1\n").find("'scheme'") != std::string::npos);
    CHECK(error_of("nu = banana\ndt = 0.1\nt_end = 1\nscheme = be\n").find("expected a number") !=
          std::string::npos);
    CHECK(error_of(kMinimal + "what is this\n").find("key = value") != std::string::npos);
    CHECK(error_of(kMinimal + "scheme2 = be\n").find("did you mean") != std::string::npos);
    CHECK_THROWS(parse_config("does_not_exist_12345.cfg"));
}

TEST_CASE("time series round trip") {
    CHECK_THROWS_AS(write_timeseries({}, "unused.csv"), std::invalid_argument);

    DiagnosticsRecord a;
    a.t = 0.1;
    a.u_l2 = 1.0 / 3.0;
    a.u_h1 = std::sqrt(2.0);
    a.w_l2 = 1e-17;
    a.w_h1 = 12345.6789;
    a.g_u = 0.25;
    a.g_w = M_PI;
    a.identity_residual = 3.2e-15;
    a.div_residual = 0.0;
    DiagnosticsRecord b = a;
    b.t = 0.2;
    b.cd = 2.3456;
    b.probe_v = -0.125;

    const std::string path = "test_artifact_ts.csv";
    write_timeseries({a, b}, path);

    const std::string text = slurp(path);
    CHECK(text.rfind("t,u_l2,u_h1,w_l2,w_h1,g_u,g_w,identity_residual,div_residual,cd,probe_v\n",
                     0) == 0);

    const auto rt = read_timeseries(path);
    REQUIRE(rt.size() == 2);
    CHECK(rt[0].t == a.t);
    CHECK(rt[0].u_l2 == a.u_l2);
    CHECK(rt[0].u_h1 == a.u_h1);
    CHECK(rt[0].w_l2 == a.w_l2);
    CHECK(rt[0].identity_residual == a.identity_residual);
    CHECK(!rt[0].cd.has_value());
    CHECK(!rt[0].probe_v.has_value());
    REQUIRE(rt[1].cd.has_value());
    CHECK(*rt[1].cd == *b.cd);
    CHECK(*rt[1].probe_v == *b.probe_v);

    // Writing the read-back records reproduces the file byte for byte.
    const std::string path2 = "test_artifact_ts2.csv";
    write_timeseries(rt, path2);
    CHECK(slurp(path2) == text);
    std::remove(path.c_str());
    std::remove(path2.c_str());

    spit(path, "not,a,valid,header\n1,2,3,4\n");
    CHECK_THROWS(read_timeseries(path));
    std::remove(path.c_str());
}

TEST_CASE("snapshot contents") {
    const Mesh m = build_torus_mesh(4);
    const auto vel = FiniteElementSpace::build(m, ElementType::P2Vector);
    const auto vort = FiniteElementSpace::build(m, ElementType::P2Scalar);
    const auto pres = FiniteElementSpace::build(m, ElementType::P1Scalar);

    const Field u = interpolate(vel, VectorFn([](double, double) {
        return std::array<double, 2>{3.0, 4.0};
    }));
    const Field w = interpolate(vort, ScalarFn([](double, double) { return -2.0; }));
    Field p(pres);

    const std::string path = "test_artifact_snap.vtk";
    write_snapshot(u, w, p, m, path);
    const std::string text = slurp(path);
    CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
    {
        std::ostringstream want;
        want << "POINTS " << m.nodes.size() << " double";
        CHECK(text.find(want.str()) != std::string::npos);
    }
    {
        std::ostringstream want;
        want << "CELLS " << m.triangles.size() << " " << 4 * m.triangles.size();
        CHECK(text.find(want.str()) != std::string::npos);
    }
    CHECK(text.find("VECTORS velocity double") != std::string::npos);
    CHECK(text.find("SCALARS vorticity double") != std::string::npos);
    CHECK(text.find("SCALARS speed double") != std::string::npos);
    CHECK(text.find("SCALARS pressure double") != std::string::npos);
    CHECK(text.find("3 4 0") != std::string::npos);  // the constant velocity vector
    CHECK(text.find("5") != std::string::npos);      // |(3,4)| = 5
    std::remove(path.c_str());
}

TEST_CASE("cli: missing or bad inputs") {
    CHECK(run_cli("run") == 2);
    const std::string err = "test_artifact_cli_err.txt";
    CHECK(run_cli("run no_such_config.cfg", "/dev/null", err) == 1);
    CHECK(slurp(err).find("error:") != std::string::npos);
    std::remove(err.c_str());
}

TEST_CASE("cli: run and mesh subcommands, deterministic output") {
    const fs::path dir1 = "test_artifact_cli_out1";
    const fs::path dir2 = "test_artifact_cli_out2";
    const std::string cfg_path = "test_artifact_cli.cfg";
    spit(cfg_path,
         "nu = 0.05\ndt = 0.05\nt_end = 0.25\nscheme = bdf2\nmesh_n = 4\n"
         "forcing = random\nseed = 11\n");

    CHECK(run_cli("run " + cfg_path + " --out " + dir1.string()) == 0);
    CHECK(run_cli("run " + cfg_path + " --out " + dir2.string()) == 0);
    const std::string csv1 = slurp((dir1 / "timeseries.csv").string());
    CHECK(csv1.rfind("t,", 0) == 0);
    CHECK(csv1 == slurp((dir2 / "timeseries.csv").string()));
    const auto records = read_timeseries((dir1 / "timeseries.csv").string());
    CHECK(records.size() == 5);  // one per step
    CHECK(records.back().t == doctest::Approx(0.25).epsilon(1e-14));

    const std::string mesh_path = "test_artifact_cli.mesh";
    CHECK(run_cli("mesh --kind torus --n 5 --out " + mesh_path) == 0);
    const Mesh m = load_mesh(mesh_path);
    CHECK(m.identified_node_count() == 25);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
    std::remove(cfg_path.c_str());
    std::remove(mesh_path.c_str());
}

}  // TEST_SUITE
