#include "nlshalf/scenario.hpp"

#include "nlshalf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace nlshalf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

// ---------------------------------------------------------------------------
// InitialProfile
// ---------------------------------------------------------------------------

Complex InitialProfile::value(double x) const {
    const double u = (x - center) / width;
    switch (family) {
    case ProfileFamily::gaussian:
        return amplitude * std::exp(-u * u);
    case ProfileFamily::exp_decay:
        return amplitude * std::exp(-u);
    case ProfileFamily::compact_bump: {
        if (std::abs(u) >= 1.0) return {0.0, 0.0};
        // normalized so the peak value is exactly `amplitude`
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - u * u));
    }
    case ProfileFamily::zero:
        return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

Complex InitialProfile::derivative(double x) const {
    const double u = (x - center) / width;
    switch (family) {
    case ProfileFamily::gaussian:
        return amplitude * std::exp(-u * u) * (-2.0 * u / width);
    case ProfileFamily::exp_decay:
        return amplitude * std::exp(-u) * (-1.0 / width);
    case ProfileFamily::compact_bump: {
        if (std::abs(u) >= 1.0) return {0.0, 0.0};
        const double denom = 1.0 - u * u;
        return amplitude * std::exp(1.0 - 1.0 / denom) * (-2.0 * u / (denom * denom)) / width;
    }
    case ProfileFamily::zero:
        return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

double InitialProfile::tail_mass_ratio(double a) const {
    if (std::abs(amplitude) == 0.0) return 0.0;
    switch (family) {
    case ProfileFamily::gaussian: {
        // |q0|^2 = |A|^2 exp(-2 u^2): int_a^inf = w sqrt(pi/8) erfc(sqrt(2) (a-c)/w)
        const double tail = std::erfc(std::sqrt(2.0) * (a - center) / width);
        const double total = std::erfc(std::sqrt(2.0) * (0.0 - center) / width);
        return total > 0.0 ? tail / total : 0.0;
    }
    case ProfileFamily::exp_decay:
        // |q0|^2 = |A|^2 exp(-2 u): ratio collapses to exp(-2 a / w)
        return std::exp(-2.0 * a / width);
    case ProfileFamily::compact_bump: {
        if (center + width <= a) return 0.0;
        if (center - width >= a) return 1.0;
        // overlap case: Simpson on the compact support is exact enough
        auto density = [&](double x) { return std::norm(value(x)); };
        auto simpson = [&](double lo, double hi) {
            const int n = 4000; // even
            const double h = (hi - lo) / n;
            double s = density(lo) + density(hi);
            for (int i = 1; i < n; ++i) s += density(lo + i * h) * (i % 2 ? 4.0 : 2.0);
            return s * h / 3.0;
        };
        const double lo = std::max(0.0, center - width);
        const double hi = center + width;
        const double total = simpson(lo, hi);
        return total > 0.0 ? simpson(std::max(lo, a), hi) / total : 0.0;
    }
    case ProfileFamily::zero:
        return 0.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// DirichletSignal
// ---------------------------------------------------------------------------

double DirichletSignal::beta() const {
    return family == SignalFamily::power_decay ? alpha + 1.0 : kInf;
}

double DirichletSignal::effective_alpha() const {
    return family == SignalFamily::power_decay ? alpha : kInf;
}

double DirichletSignal::effective_beta() const {
    return beta();
}

std::pair<Complex, Complex> DirichletSignal::eval(double t) const {
    switch (family) {
    case SignalFamily::power_decay: {
        const double base = 1.0 + t / timescale;
        const Complex q = q0 * std::pow(base, -alpha);
        const Complex qt = q0 * (-alpha / timescale) * std::pow(base, -alpha - 1.0);
        return {q, qt};
    }
    case SignalFamily::exp_decay: {
        const Complex q = q0 * std::exp(-t / timescale);
        return {q, q * (-1.0 / timescale)};
    }
    case SignalFamily::zero:
        return {{0.0, 0.0}, {0.0, 0.0}};
    }
    return {{0.0, 0.0}, {0.0, 0.0}};
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

AdmissibilityClass classify_admissibility(const DirichletSignal& sig) {
    const double a = sig.effective_alpha();
    const double b = sig.effective_beta();
    AdmissibilityClass cls;
    cls.l2_trace = a > 0.5 && b > 0.5;
    cls.l4_decay = a > 1.5 && b > 2.5;
    cls.l1_trace = a > 2.5 && b > 2.5;

    // largest p = 1 + k/100 with alpha > 2p + 1/2, alpha + beta > p + 1,
    // alpha > (p+1)/4; only existence matters, so a fixed grid suffices.
    std::optional<double> best;
    for (int k = 1; k <= 900; ++k) {
        const double p = 1.0 + k / 100.0;
        if (a > 2.0 * p + 0.5 && a + b > p + 1.0 && a > (p + 1.0) / 4.0) best = p;
    }
    cls.p_feasible = best;
    return cls;
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

const char* profile_family_name(ProfileFamily f) {
    switch (f) {
    case ProfileFamily::gaussian: return "gaussian";
    case ProfileFamily::exp_decay: return "exp_decay";
    case ProfileFamily::compact_bump: return "compact_bump";
    case ProfileFamily::zero: return "zero";
    }
    return "?";
}

const char* signal_family_name(SignalFamily f) {
    switch (f) {
    case SignalFamily::power_decay: return "power_decay";
    case SignalFamily::exp_decay: return "exp_decay";
    case SignalFamily::zero: return "zero";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, RawEntry>;

std::string trim(const std::string& s) {
    auto b = s.begin();
    while (b != s.end() && std::isspace(static_cast<unsigned char>(*b))) ++b;
    auto e = s.end();
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return {b, e};
}

const std::set<std::string> kSections = {"initial", "dirichlet", "grid", "solver"};

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"initial", {"family", "amplitude_re", "amplitude_im", "width", "center"}},
    {"dirichlet", {"family", "Q0_re", "Q0_im", "alpha", "timescale"}},
    {"grid", {"L", "N"}},
    {"solver",
     {"dt", "horizon", "sample_stride", "fp_tol", "fp_max_iters", "compat_tol", "leak_tol",
      "forcing"}},
};

class ConfigReader {
public:
    explicit ConfigReader(const std::string& text) { parse_lines(text); }

    bool has(const std::string& sec, const std::string& key) const {
        auto s = sections_.find(sec);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    std::string get_string(const std::string& sec, const std::string& key) {
        auto* e = find(sec, key);
        if (!e)
            throw ConfigError("config: missing required key '" + sec + "." + key + "'");
        e->used = true;
        return e->value;
    }

    std::string get_string_or(const std::string& sec, const std::string& key,
                              const std::string& def) {
        auto* e = find(sec, key);
        if (!e) return def;
        e->used = true;
        return e->value;
    }

    double get_double(const std::string& sec, const std::string& key) {
        return to_double(sec, key, get_string(sec, key));
    }

    double get_double_or(const std::string& sec, const std::string& key, double def) {
        auto* e = find(sec, key);
        if (!e) return def;
        e->used = true;
        return to_double(sec, key, e->value);
    }

    long get_int(const std::string& sec, const std::string& key) {
        return to_int(sec, key, get_string(sec, key));
    }

    long get_int_or(const std::string& sec, const std::string& key, long def) {
        auto* e = find(sec, key);
        if (!e) return def;
        e->used = true;
        return to_int(sec, key, e->value);
    }

private:
    RawEntry* find(const std::string& sec, const std::string& key) {
        auto s = sections_.find(sec);
        if (s == sections_.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    double to_double(const std::string& sec, const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size())
                throw ConfigError("config: trailing characters in value for '" + sec + "." + key +
                                  "': '" + v + "'");
            return d;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config: cannot parse number for '" + sec + "." + key + "': '" + v +
                              "'");
        }
    }

    long to_int(const std::string& sec, const std::string& key, const std::string& v) {
        long out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw ConfigError("config: cannot parse integer for '" + sec + "." + key + "': '" + v +
                              "'");
        return out;
    }

    void parse_lines(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        std::string current;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config: line " + std::to_string(lineno) +
                                      ": unterminated section header");
                current = trim(line.substr(1, line.size() - 2));
                if (!kSections.count(current))
                    throw ConfigError("config: line " + std::to_string(lineno) +
                                      ": unknown section '" + current + "'");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config: line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
            if (current.empty())
                throw ConfigError("config: line " + std::to_string(lineno) +
                                  ": key before any section header");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ConfigError("config: line " + std::to_string(lineno) +
                                  ": empty key or value");
            if (!kKnownKeys.at(current).count(key))
                throw ConfigError("config: line " + std::to_string(lineno) + ": unknown key '" +
                                  current + "." + key + "'");
            if (!sections_[current].emplace(key, RawEntry{value, lineno, false}).second)
                throw ConfigError("config: line " + std::to_string(lineno) + ": duplicate key '" +
                                  current + "." + key + "'");
        }
    }

    std::map<std::string, Section> sections_;
};

ProfileFamily profile_from_name(const std::string& s) {
    if (s == "gaussian") return ProfileFamily::gaussian;
    if (s == "exp_decay") return ProfileFamily::exp_decay;
    if (s == "compact_bump") return ProfileFamily::compact_bump;
    if (s == "zero") return ProfileFamily::zero;
    throw ConfigError("config: unknown initial family '" + s + "'");
}

SignalFamily signal_from_name(const std::string& s) {
    if (s == "power_decay") return SignalFamily::power_decay;
    if (s == "exp_decay") return SignalFamily::exp_decay;
    if (s == "zero") return SignalFamily::zero;
    throw ConfigError("config: unknown dirichlet family '" + s + "'");
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    ConfigReader reader(text);
    ScenarioConfig cfg;

    cfg.forcing = forcing_from_name(reader.get_string_or("solver", "forcing", "none"));
    const bool forced = cfg.forcing != ForcingChoice::none;

    // Forced scenarios take their data from the manufactured solution, so
    // the [initial]/[dirichlet] sections default to zero there.
    if (!forced || reader.has("initial", "family")) {
        cfg.initial.family = profile_from_name(reader.get_string("initial", "family"));
        if (cfg.initial.family != ProfileFamily::zero) {
            cfg.initial.amplitude = {reader.get_double("initial", "amplitude_re"),
                                     reader.get_double_or("initial", "amplitude_im", 0.0)};
            cfg.initial.width = reader.get_double("initial", "width");
            cfg.initial.center = reader.get_double_or("initial", "center", 0.0);
        }
    } else {
        cfg.initial.family = ProfileFamily::zero;
    }

    if (!forced || reader.has("dirichlet", "family")) {
        cfg.dirichlet.family = signal_from_name(reader.get_string("dirichlet", "family"));
        if (cfg.dirichlet.family != SignalFamily::zero) {
            cfg.dirichlet.q0 = {reader.get_double("dirichlet", "Q0_re"),
                                reader.get_double_or("dirichlet", "Q0_im", 0.0)};
            cfg.dirichlet.timescale = reader.get_double_or("dirichlet", "timescale", 1.0);
        }
        if (cfg.dirichlet.family == SignalFamily::power_decay)
            cfg.dirichlet.alpha = reader.get_double("dirichlet", "alpha");
    } else {
        cfg.dirichlet.family = SignalFamily::zero;
    }

    cfg.grid.length = reader.get_double("grid", "L");
    cfg.grid.nodes = static_cast<int>(reader.get_int("grid", "N"));

    cfg.dt = reader.get_double("solver", "dt");
    cfg.horizon = reader.get_double("solver", "horizon");
    cfg.sample_stride = static_cast<int>(reader.get_int_or("solver", "sample_stride", 10));
    cfg.fp_tol = reader.get_double_or("solver", "fp_tol", 1e-12);
    cfg.fp_max_iters = static_cast<int>(reader.get_int_or("solver", "fp_max_iters", 50));
    cfg.compat_tol = reader.get_double_or("solver", "compat_tol", 1e-12);
    cfg.leak_tol = reader.get_double_or("solver", "leak_tol", 1e-6);

    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void ScenarioConfig::validate() const {
    grid.validate();
    if (!(dt > 0.0)) throw ConfigError("solver: dt must be positive");
    if (!(horizon > 0.0)) throw ConfigError("solver: horizon must be positive");
    if (sample_stride < 1) throw ConfigError("solver: sample_stride must be >= 1");
    if (!(fp_tol > 0.0)) throw ConfigError("solver: fp_tol must be positive");
    if (fp_max_iters < 1) throw ConfigError("solver: fp_max_iters must be >= 1");
    if (!(leak_tol > 0.0)) throw ConfigError("solver: leak_tol must be positive");
    if (initial.family != ProfileFamily::zero) {
        if (!(initial.width > 0.0)) throw ConfigError("initial: width must be positive");
        if (initial.center < 0.0) throw ConfigError("initial: center must be nonnegative");
    }
    if (dirichlet.family == SignalFamily::power_decay && !(dirichlet.alpha > 0.0))
        throw ConfigError("dirichlet: alpha must be positive");
    if (dirichlet.family != SignalFamily::zero && !(dirichlet.timescale > 0.0))
        throw ConfigError("dirichlet: timescale must be positive");

    if (forced()) return; // data come from the manufactured solution

    // corner compatibility q0(0) = Q(0)
    const Complex q00 = initial.value(0.0);
    const Complex Q0 = dirichlet.eval(0.0).first;
    const double mismatch = std::abs(q00 - Q0);
    if (mismatch > compat_tol) {
        std::ostringstream msg;
        msg << "config: compatibility violation |q0(0) - Q(0)| = " << mismatch << " exceeds "
            << compat_tol;
        throw ConfigError(msg.str());
    }

    // truncation sanity: initial mass beyond L/2 below 1e-12 of the total
    const double ratio = initial.tail_mass_ratio(grid.length / 2.0);
    if (ratio > kTruncationTol) {
        std::ostringstream msg;
        msg << "config: truncation sanity violation: initial mass fraction beyond L/2 = " << ratio
            << " exceeds " << kTruncationTol << " (increase L or shrink the profile)";
        throw ConfigError(msg.str());
    }
}

StateVector build_initial_state(const ScenarioConfig& cfg) {
    StateVector state;
    state.grid = cfg.grid;
    state.t = 0.0;
    state.values.resize(cfg.grid.nodes);
    if (cfg.forced()) {
        const ForcingTerm term = manufactured_forcing(cfg.forcing);
        for (int j = 0; j < cfg.grid.nodes; ++j)
            state.values[j] = term.solution(cfg.grid.x(j), 0.0);
    } else {
        for (int j = 0; j < cfg.grid.nodes; ++j)
            state.values[j] = cfg.initial.value(cfg.grid.x(j));
    }
    state.values.back() = {0.0, 0.0};
    return state;
}

} // namespace nlshalf
