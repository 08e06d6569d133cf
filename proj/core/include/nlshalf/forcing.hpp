#pragma once

#include "nlshalf/grid.hpp"

#include <functional>
#include <string>

namespace nlshalf {

/// Manufactured-solution catalogue. `none` runs the plain equation;
/// the others add the closed-form source that makes the named q_m exact.
enum class ForcingChoice {
    none,
    zero,           // q_m = 0
    gaussian_phase, // q_m = e^{it} e^{-x^2}
    power_exp,      // q_m = (1+t)^{-3} e^{-x}
};

/// A manufactured solution q_m together with the source f that makes it an
/// exact solution of i q_t + q_xx - 2|q|^2 q = f, plus the traces the solver
/// and the verification bookkeeping need.
struct ForcingTerm {
    std::string name;
    std::function<Complex(double, double)> defect;      // f(x,t)
    std::function<Complex(double, double)> solution;    // q_m(x,t)
    std::function<Complex(double, double)> solution_dt; // d/dt q_m(x,t)
    std::function<Complex(double)> trace_value;         // q_m(0,t)
    std::function<Complex(double)> trace_value_dt;      // d/dt q_m(0,t)
    std::function<Complex(double)> trace_slope;         // d/dx q_m(0,t)
};

ForcingTerm manufactured_forcing(ForcingChoice choice);

const char* forcing_name(ForcingChoice choice);
ForcingChoice forcing_from_name(const std::string& name); // throws ConfigError

} // namespace nlshalf
