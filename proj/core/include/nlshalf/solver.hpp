#pragma once

#include "nlshalf/forcing.hpp"
#include "nlshalf/functionals.hpp"
#include "nlshalf/grid.hpp"
#include "nlshalf/identities.hpp"
#include "nlshalf/scenario.hpp"

#include <optional>
#include <vector>

namespace nlshalf {

struct SolverParams {
    double dt = 0.0;
    double fp_tol = 1e-12; // relative sup-norm increment of the fixed point
    int fp_max_iters = 50;
    std::optional<ForcingTerm> forcing;
    bool record_increments = false;

    static SolverParams from(const ScenarioConfig& cfg);
};

struct StepStats {
    int iterations = 0;
    double final_increment = 0.0;        // relative sup-norm of the last sweep
    std::vector<double> increments;      // filled when record_increments is set
};

/// Advances the state by one implicit-midpoint step of
///   i q_t + q_xx - 2 |q|^2 q = f
/// on [0, L], with the Dirichlet value at x=0 taken from the forcing trace
/// when a manufactured term is active and from `dirichlet` otherwise, and
/// q(L) = 0. The cubic term is resolved by fixed-point iteration on the
/// midpoint value; each sweep is one precomputed tridiagonal solve.
///
/// Throws NumericError on fixed-point non-convergence (reporting the final
/// increment) and on NaN/Inf in the updated state.
StepStats step(StateVector& state, const SolverParams& params,
               const DirichletSignal& dirichlet);

struct RunResult {
    DiagnosticsSeries diagnostics;
    IdentityResiduals residuals;
    StateVector final_state;
};

/// Integrates a scenario from t = 0 to the horizon, sampling every
/// sample_stride steps. Aborts with NumericError (reporting the violation
/// time) if |q| at node N-2 exceeds leak_tol times the initial sup-norm,
/// i.e. when the truncated domain stops emulating the half-line.
RunResult run(const ScenarioConfig& cfg);

} // namespace nlshalf
