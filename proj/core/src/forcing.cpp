#include "nlshalf/forcing.hpp"

#include "nlshalf/errors.hpp"

#include <cmath>

namespace nlshalf {

namespace {

const Complex kI{0.0, 1.0};

ForcingTerm zero_term() {
    ForcingTerm t;
    t.name = "zero";
    t.defect = [](double, double) { return Complex{0.0, 0.0}; };
    t.solution = [](double, double) { return Complex{0.0, 0.0}; };
    t.solution_dt = [](double, double) { return Complex{0.0, 0.0}; };
    t.trace_value = [](double) { return Complex{0.0, 0.0}; };
    t.trace_value_dt = [](double) { return Complex{0.0, 0.0}; };
    t.trace_slope = [](double) { return Complex{0.0, 0.0}; };
    return t;
}

// q_m = e^{it} e^{-x^2}:
//   f = i q_t + q_xx - 2|q|^2 q = e^{it} [ (4x^2 - 3) e^{-x^2} - 2 e^{-3x^2} ]
ForcingTerm gaussian_phase_term() {
    ForcingTerm t;
    t.name = "gaussian_phase";
    t.solution = [](double x, double tt) { return std::exp(kI * tt) * std::exp(-x * x); };
    t.solution_dt = [](double x, double tt) {
        return kI * std::exp(kI * tt) * std::exp(-x * x);
    };
    t.defect = [](double x, double tt) {
        const double g = (4.0 * x * x - 3.0) * std::exp(-x * x) - 2.0 * std::exp(-3.0 * x * x);
        return std::exp(kI * tt) * g;
    };
    t.trace_value = [](double tt) { return std::exp(kI * tt); };
    t.trace_value_dt = [](double tt) { return kI * std::exp(kI * tt); };
    t.trace_slope = [](double) { return Complex{0.0, 0.0}; };
    return t;
}

// q_m = (1+t)^{-3} e^{-x}:
//   f = -3i (1+t)^{-4} e^{-x} + (1+t)^{-3} e^{-x} - 2 (1+t)^{-9} e^{-3x}
ForcingTerm power_exp_term() {
    ForcingTerm t;
    t.name = "power_exp";
    t.solution = [](double x, double tt) {
        return Complex{std::pow(1.0 + tt, -3.0) * std::exp(-x), 0.0};
    };
    t.solution_dt = [](double x, double tt) {
        return Complex{-3.0 * std::pow(1.0 + tt, -4.0) * std::exp(-x), 0.0};
    };
    t.defect = [](double x, double tt) {
        const double b = 1.0 + tt;
        return -3.0 * kI * std::pow(b, -4.0) * std::exp(-x) +
               Complex{std::pow(b, -3.0) * std::exp(-x) -
                           2.0 * std::pow(b, -9.0) * std::exp(-3.0 * x),
                       0.0};
    };
    t.trace_value = [](double tt) { return Complex{std::pow(1.0 + tt, -3.0), 0.0}; };
    t.trace_value_dt = [](double tt) {
        return Complex{-3.0 * std::pow(1.0 + tt, -4.0), 0.0};
    };
    t.trace_slope = [](double tt) { return Complex{-std::pow(1.0 + tt, -3.0), 0.0}; };
    return t;
}

} // namespace

ForcingTerm manufactured_forcing(ForcingChoice choice) {
    switch (choice) {
    case ForcingChoice::none:
    case ForcingChoice::zero:
        return zero_term();
    case ForcingChoice::gaussian_phase:
        return gaussian_phase_term();
    case ForcingChoice::power_exp:
        return power_exp_term();
    }
    throw ConfigError("unknown forcing choice");
}

const char* forcing_name(ForcingChoice choice) {
    switch (choice) {
    case ForcingChoice::none: return "none";
    case ForcingChoice::zero: return "zero";
    case ForcingChoice::gaussian_phase: return "gaussian_phase";
    case ForcingChoice::power_exp: return "power_exp";
    }
    return "?";
}

ForcingChoice forcing_from_name(const std::string& name) {
    if (name == "none") return ForcingChoice::none;
    if (name == "zero") return ForcingChoice::zero;
    if (name == "gaussian_phase") return ForcingChoice::gaussian_phase;
    if (name == "power_exp") return ForcingChoice::power_exp;
    throw ConfigError("config: unknown forcing '" + name + "'");
}

} // namespace nlshalf
