/// @file scheme.hpp
/// @brief Decoupled velocity-vorticity time stepping: backward Euler and
///        BDF2-IMEX on the torus, and the channel variant with a flat plate.

#ifndef VVNS_SCHEME_HPP
#define VVNS_SCHEME_HPP

#include <memory>
#include <optional>
#include <vector>

#include "vvns/diagnostics.hpp"
#include "vvns/fespace.hpp"
#include "vvns/forcing.hpp"
#include "vvns/linsolve.hpp"
#include "vvns/operators.hpp"

namespace vvns {

enum class SchemeKind { BE, BDF2 };
enum class Setting { torus, channel };

struct SchemeConfig {
    double nu = 0.01;
    double dt = 0.01;
    double t_end = 1.0;
    SchemeKind scheme = SchemeKind::BE;
    Setting setting = Setting::torus;
    ForcingSpec forcing = ForcingSpec::zero();
    VectorFn initial_velocity;   // null: start from rest
    ScalarFn initial_vorticity;  // curl of the initial velocity; null: zero
    SolverOptions solver;
    int cadence = 1;                          // steps between diagnostics records
    std::array<double, 2> probe = {4.0, 0.0};  // channel probe point

    void validate() const;  // throws std::invalid_argument on bad parameters
};

/// Two velocity/vorticity time levels plus the Step-1 Bernoulli pressure.
struct SchemeState {
    Field u_curr, u_prev;
    Field w_curr, w_prev;
    Field P_curr;
    long n = 0;
    double t = 0.0;
};

struct StepReport {
    double identity_residual_u = 0.0;  // energy (BE) or G-norm (BDF2) identity
    double identity_residual_w = 0.0;
    double div_residual = 0.0;  // max |(div u, q_h)| over pressure basis
    double solver_residual_step1 = 0.0;
    double solver_residual_step2 = 0.0;
    std::optional<double> cd;  // channel only
};

/// Owns the spaces, the constant operators, and the cached factorizations.
/// Must outlive every SchemeState it produced.
class Stepper {
public:
    Stepper(const Mesh& mesh, SchemeConfig config);

    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    const SchemeConfig& config() const { return config_; }
    const FiniteElementSpace& velocity_space() const { return *vel_; }
    const FiniteElementSpace& pressure_space() const { return *pres_; }
    const FiniteElementSpace& vorticity_space() const { return *vort_; }

    /// Shared handles for callers that outlive the Stepper.
    std::shared_ptr<const FiniteElementSpace> velocity_space_ptr() const { return vel_; }
    std::shared_ptr<const FiniteElementSpace> pressure_space_ptr() const { return pres_; }
    std::shared_ptr<const FiniteElementSpace> vorticity_space_ptr() const { return vort_; }

    SchemeState init_state() const;

    /// One full step (Step 1 then Step 2); shifts the state history.
    StepReport advance(SchemeState& state);

private:
    StepReport torus_step(SchemeState& state);
    StepReport channel_step(SchemeState& state);

    SchemeConfig config_;
    const Mesh* mesh_;
    std::shared_ptr<const FiniteElementSpace> vel_, pres_, vort_;
    SparseMatrix M_u, K_u, B, Bt, M_w, K_w;
    std::vector<int> plate_dofs_;  // velocity scalar dofs on the plate
    DirectSolver lu1_, lu2_;
};

/// The spaces are shared so final_state's fields stay valid after the
/// Stepper that produced them is gone.
struct SimulationResult {
    SchemeState final_state;
    std::vector<DiagnosticsRecord> records;
    std::shared_ptr<const FiniteElementSpace> velocity_space, pressure_space, vorticity_space;
};

struct SimulationError : std::runtime_error {
    std::vector<DiagnosticsRecord> partial_records;
    SimulationError(const std::string& what, std::vector<DiagnosticsRecord> records)
        : std::runtime_error(what), partial_records(std::move(records)) {}
};

/// Runs ceil(t_end/dt) steps, recording diagnostics every `cadence` steps
/// and at the final step. On a step failure the records gathered so far are
/// attached to the thrown SimulationError. `on_step`, when set, is invoked
/// after every completed step.
SimulationResult run_simulation(
    const Mesh& mesh, const SchemeConfig& config,
    const std::function<void(const SchemeState&, const StepReport&)>& on_step = {});

}  // namespace vvns

#endif
