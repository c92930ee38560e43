/// @file vvns_main.cpp
/// @brief CLI entry point: run simulations, generate meshes, verify the
///        discrete identities, and run the flat-plate benchmark.

#include <Eigen/Core>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "vvns/config.hpp"
#include "vvns/output.hpp"

namespace {

using namespace vvns;

void apply_thread_cap() {
    if (const char* env = std::getenv("VVNS_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) Eigen::setNbThreads(n);
    }
}

int cmd_run(const std::string& config_path, const std::string& out_override, int cadence_override) {
    RunConfig cfg = parse_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (cadence_override > 0) cfg.scheme.cadence = cadence_override;
    const Mesh mesh = build_mesh(cfg);
    validate_mesh(mesh);
    if (cfg.scheme.setting == Setting::channel &&
        locate_point(mesh, cfg.scheme.probe[0], cfg.scheme.probe[1]) < 0)
        throw std::runtime_error("probe point lies outside the mesh");

    std::filesystem::create_directories(cfg.out_dir);
    const auto out = [&](const std::string& name) {
        return (std::filesystem::path(cfg.out_dir) / name).string();
    };

    const SimulationResult result = run_simulation(
        mesh, cfg.scheme, [&](const SchemeState& s, const StepReport&) {
            if (cfg.snapshot_cadence > 0 && s.n % cfg.snapshot_cadence == 0) {
                char name[64];
                std::snprintf(name, sizeof name, "snapshot_%06ld.vtk", s.n);
                const Field p = cfg.scheme.setting == Setting::torus
                                    ? bernoulli_to_kinematic(s.P_curr, s.u_curr)
                                    : s.P_curr;
                write_snapshot(s.u_curr, s.w_curr, p, mesh, out(name));
            }
        });
    write_timeseries(result.records, out("timeseries.csv"));

    const auto& last = result.records.back();
    std::cout << "steps=" << result.final_state.n << " t=" << last.t << " u_l2=" << last.u_l2
              << " w_l2=" << last.w_l2 << "\n";
    std::cout << "wrote " << out("timeseries.csv") << "\n";
    return 0;
}

int cmd_mesh(const std::string& kind, int n, const ChannelGrading& grading,
             const std::string& out_path) {
    Mesh mesh;
    if (kind == "torus")
        mesh = build_torus_mesh(n);
    else if (kind == "channel")
        mesh = build_channel_mesh(grading);
    else
        throw std::runtime_error("mesh kind must be 'torus' or 'channel'");
    validate_mesh(mesh);
    save_mesh(mesh, out_path);
    std::cout << "wrote " << out_path << " (" << mesh.nodes.size() << " nodes, "
              << mesh.triangles.size() << " triangles)\n";
    return 0;
}

bool report(const std::string& name, double residual, double tol) {
    const bool ok = residual <= tol;
    std::cout << name << ": " << (ok ? "PASS" : "FAIL") << " (residual " << residual << ", tol "
              << tol << ")\n";
    return ok;
}

int cmd_verify(int n, unsigned seed) {
    const Mesh mesh = build_torus_mesh(n);
    bool all_ok = true;

    // Per-step identities over a short forced run, both schemes.
    for (const SchemeKind kind : {SchemeKind::BE, SchemeKind::BDF2}) {
        SchemeConfig cfg;
        cfg.nu = 0.01;
        cfg.dt = 0.05;
        cfg.t_end = 10 * cfg.dt;
        cfg.scheme = kind;
        cfg.forcing = ForcingSpec::random_fourier(seed);
        const SimulationResult r = run_simulation(mesh, cfg);
        double worst_id = 0.0, worst_div = 0.0;
        for (const auto& rec : r.records) {
            worst_id = std::max(worst_id, rec.identity_residual);
            worst_div = std::max(worst_div, rec.div_residual);
        }
        const bool be = kind == SchemeKind::BE;
        all_ok &= report(be ? "energy identity (backward Euler)" : "G-norm identity (BDF2)",
                         worst_id, be ? 1e-10 : 1e-11);
        all_ok &= report(be ? "divergence constraint (backward Euler)"
                            : "divergence constraint (BDF2)",
                         worst_div, 1e-9);
    }

    // Skew-symmetry of the two trilinear forms on random fields.
    const auto vel = FiniteElementSpace::build(mesh, ElementType::P2Vector, {.zero_mean = true});
    const auto vort = FiniteElementSpace::build(mesh, ElementType::P2Scalar, {.zero_mean = true});
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst_lamb = 0.0, worst_conv = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Field u(vel), w(vort), chi(vort);
        for (auto& c : u.coeffs) c = unif(rng);
        for (auto& c : w.coeffs) c = unif(rng);
        for (auto& c : chi.coeffs) c = unif(rng);
        const SparseMatrix N = assemble_lamb_coupling(w, vel);
        const double lamb = N.bilinear(u.coeffs, u.coeffs);
        worst_lamb = std::max(worst_lamb, std::abs(lamb) / std::max(1.0, N.max_abs()));
        const SparseMatrix C = assemble_convection_skew(u, vort);
        const double conv = C.bilinear(chi.coeffs, chi.coeffs);
        worst_conv = std::max(worst_conv, std::abs(conv) / std::max(1.0, C.max_abs()));
    }
    all_ok &= report("Lamb-term skew symmetry", worst_lamb, 1e-11);
    all_ok &= report("convection skew symmetry", worst_conv, 1e-11);

    return all_ok ? 0 : 1;
}

int cmd_bench(double nu, double dt, double t_end, const ChannelGrading& grading,
              const std::string& out_dir) {
    RunConfig cfg;
    cfg.scheme.nu = nu;
    cfg.scheme.dt = dt;
    cfg.scheme.t_end = t_end;
    cfg.scheme.scheme = SchemeKind::BDF2;
    cfg.scheme.setting = Setting::channel;
    cfg.scheme.cadence = 1;
    cfg.grading = grading;
    const Mesh mesh = build_channel_mesh(grading);
    validate_mesh(mesh);

    const SimulationResult result = run_simulation(mesh, cfg.scheme);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_timeseries(result.records,
                         (std::filesystem::path(out_dir) / "bench_timeseries.csv").string());
    }

    const double window_start = t_end >= 200.0 ? 120.0 : 0.6 * t_end;
    double cd_sum = 0.0;
    long cd_count = 0;
    std::vector<double> probe;
    for (const auto& rec : result.records) {
        if (rec.t < window_start) continue;
        if (rec.cd) {
            cd_sum += *rec.cd;
            ++cd_count;
        }
        if (rec.probe_v) probe.push_back(*rec.probe_v);
    }
    if (cd_count == 0) throw std::runtime_error("no drag samples in the averaging window");
    const double cd = cd_sum / static_cast<double>(cd_count);
    const double st = strouhal(probe, dt * cfg.scheme.cadence);
    std::cout << "Cd=" << cd << " St=" << st << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();

    CLI::App app{"2D incompressible flow solver (decoupled velocity-vorticity method)"};
    app.require_subcommand(0, 1);

    auto* run = app.add_subcommand("run", "Run a simulation from a config file");
    std::string run_config, run_out;
    int run_cadence = 0;
    run->add_option("config_file", run_config, "config file path");
    run->add_option("--config", run_config, "config file path (same as the positional)");
    run->add_option("--out", run_out, "output directory override");
    run->add_option("--cadence", run_cadence, "diagnostics cadence override (steps)");

    auto* meshcmd = app.add_subcommand("mesh", "Generate a mesh file");
    std::string mesh_kind = "torus", mesh_out = "mesh.txt";
    int mesh_n = 8;
    ChannelGrading grading;
    meshcmd->add_option("--kind", mesh_kind, "torus or channel");
    meshcmd->add_option("--n", mesh_n, "torus resolution");
    meshcmd->add_option("--h-near", grading.h_near, "channel cell size at the plate");
    meshcmd->add_option("--h-far", grading.h_far, "channel far-field cell size");
    meshcmd->add_option("--growth", grading.growth, "channel grading ratio");
    meshcmd->add_option("--h-wall", grading.h_wall, "channel cell size at the walls");
    meshcmd->add_option("--out", mesh_out, "output path");

    auto* verify = app.add_subcommand("verify", "Check the exact discrete identities");
    int verify_n = 8;
    unsigned verify_seed = 7;
    verify->add_option("--n", verify_n, "torus resolution");
    verify->add_option("--seed", verify_seed, "random seed");

    auto* bench = app.add_subcommand("bench", "Flat-plate channel benchmark");
    double bench_nu = 0.01, bench_dt = 0.02, bench_t_end = 200.0;
    ChannelGrading bench_grading;
    std::string bench_out;
    bench->add_option("--nu", bench_nu, "kinematic viscosity");
    bench->add_option("--dt", bench_dt, "timestep");
    bench->add_option("--t-end", bench_t_end, "end time");
    bench->add_option("--h-near", bench_grading.h_near, "cell size at the plate");
    bench->add_option("--h-far", bench_grading.h_far, "far-field cell size");
    bench->add_option("--growth", bench_grading.growth, "grading ratio");
    bench->add_option("--h-wall", bench_grading.h_wall, "cell size at the walls");
    bench->add_option("--out", bench_out, "directory for the benchmark time series");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) {
            if (run_config.empty()) {
                std::cerr << "error: missing config path\n" << run->help();
                return 2;
            }
            return cmd_run(run_config, run_out, run_cadence);
        }
        if (meshcmd->parsed()) return cmd_mesh(mesh_kind, mesh_n, grading, mesh_out);
        if (verify->parsed()) return cmd_verify(verify_n, verify_seed);
        if (bench->parsed()) return cmd_bench(bench_nu, bench_dt, bench_t_end, bench_grading,
                                              bench_out);
        std::cout << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
