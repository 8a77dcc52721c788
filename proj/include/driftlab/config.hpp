/// @file config.hpp
/// @brief Sectioned key = value run configuration and scenario presets
///
/// Format:
///
///     preset = "interval-super"      # optional, must precede any section
///     [problem]
///     gamma = 0.5
///     [stepper]
///     t_end = 2
///
/// Unknown sections and keys are errors. See README.md for the key list.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "model.hpp"
#include "pde.hpp"

namespace driftlab {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, int line, const std::string& what)
        : std::runtime_error(format(key, line, what)), key_(std::move(key)), line_(line) {}
    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string s = "config error";
        if (line > 0) s += " (line " + std::to_string(line) + ")";
        if (!key.empty()) s += " [" + key + "]";
        return s + ": " + what;
    }
    std::string key_;
    int line_;
};

struct GridConfig {
    int nx = 256;
    int ny = 0;  ///< 0: same as nx
    int na = 256;
    double grading = 1.0;
    double a_min_width = 0.0;
    AMeshKind mesh = AMeshKind::graded;
};

struct ParticleConfig {
    std::size_t count = 0;  ///< 0 disables the particle run
    double dt = 1e-3;
    bool dump = false;
};

struct OutputConfig {
    std::string dir = "out";
    double interval = 0.0;
    int every = 0;
    bool fields = true;
    double field_interval = 0.0;  ///< 0: at every output
};

struct RunConfig {
    std::string preset;
    ProblemSpec problem;
    InitialDataSpec initial;
    GridConfig grid;
    RunOptions run;
    ParticleConfig particles;
    OutputConfig output;
    std::uint64_t seed = 0;
    int threads = 0;  ///< 0: all cores

    Grid make_grid() const {
        AMeshSpec a{grid.na, problem.a_max, grid.grading, grid.a_min_width, grid.mesh, problem.drift.gamma};
        if (problem.dimension == 2)
            return Grid::make_2d(grid.nx, grid.ny > 0 ? grid.ny : grid.nx, problem.half_width, a);
        return Grid::make_1d(grid.nx, problem.half_width, a);
    }
};

// ---------------------------------------------------------------------------
// Presets

inline std::vector<std::string> preset_names() {
    return {"whole-line-accel", "whole-line-sub",  "whole-line-super", "interval-sub", "interval-super",
            "logistic-global",  "logistic-blowup", "porous",           "ball-2d",      "sde-crosscheck"};
}

inline RunConfig preset_config(const std::string& name) {
    RunConfig c;
    c.preset = name;
    auto& p = c.problem;
    auto& init = c.initial;
    auto& st = c.run.stepper;
    init.x_profile = {ProfileKind::gaussian, 0.0, 1.0};
    st.advection = AdvectionScheme::local_upwind;

    if (name == "whole-line-super") {
        p.drift = {DriftSign::deceleration, 0.5};
        p.half_width = 10.0;
        p.a_max = 1.0;
        init.a0 = 0.0;
        init.A0 = 1.0;
        c.grid = {256, 0, 256, 1.2, 1e-16, AMeshKind::graded};
        st.advection = AdvectionScheme::implicit_upwind;
        st.dt = 2e-3;
        c.run.t_end = 3.0;
        c.run.stop_on_blowup = false;
        c.output.interval = 0.1;
        c.output.field_interval = 0.5;
    } else if (name == "whole-line-sub") {
        p.drift = {DriftSign::deceleration, 2.0};
        p.half_width = 10.0;
        p.a_max = 1.0;
        init.a0 = 0.25;
        init.A0 = 1.0;
        c.grid = {256, 0, 128, 1.0, 0.0, AMeshKind::graded};
        st.dt = 1e-2;
        c.run.t_end = 10.0;
        c.output.interval = 0.1;
        c.output.field_interval = 1.0;
    } else if (name == "whole-line-accel") {
        p.drift = {DriftSign::acceleration, 1.0};
        p.half_width = 10.0;
        p.a_max = 4.0;
        init.a0 = 0.25;
        init.A0 = 1.0;
        c.grid = {256, 0, 256, 1.0, 0.0, AMeshKind::graded};
        st.dt = 5e-3;
        c.run.t_end = 1.0;
        c.output.interval = 0.05;
        c.output.field_interval = 0.5;
    } else if (name == "interval-sub") {
        p.drift = {DriftSign::deceleration, 2.0};
        p.localization = LocalizationSpec::interval(0.5);
        p.half_width = 5.0;
        p.a_max = 1.0;
        init.a0 = 0.25;
        init.A0 = 1.0;
        c.grid = {1000, 0, 128, 1.0, 0.0, AMeshKind::graded};
        st.dt = 1e-3;
        c.run.t_end = 1.0;
        c.output.interval = 0.05;
        c.output.field_interval = 0.5;
    } else if (name == "interval-super" || name == "porous") {
        p.drift = {DriftSign::deceleration, 0.5};
        p.localization = LocalizationSpec::interval(0.5);
        p.half_width = 5.0;
        p.a_max = 0.5;
        init.a0 = 0.2;
        init.A0 = 0.4;
        init.x_profile = {ProfileKind::cosine_bump, 0.0, 0.4};
        c.grid = {200, 0, 256, 1.2, 1e-16, AMeshKind::characteristic};
        st.dt = 1e-2;
        st.dt_from_cfl = true;
        st.cfl_fraction = 1.0;
        st.adaptive = true;
        c.run.t_end = 3.0;
        c.output.every = 1;
        c.output.field_interval = 0.25;
        if (name == "porous") {
            p.diffusion_exponent = 1.5;
            c.run.diagnostics.m = 0.2;
            c.grid.grading = 1.3;
            c.grid.a_min_width = 1e-20;
        }
    } else if (name == "logistic-global" || name == "logistic-blowup") {
        p.drift = {DriftSign::deceleration, 0.5};
        p.localization = LocalizationSpec::interval(0.5);
        p.logistic = {4.0, 1.0};
        p.half_width = 5.0;
        p.a_max = 1.0;
        init.x_profile = {ProfileKind::cosine_bump, 0.0, 0.4};
        if (name == "logistic-global") {
            c.grid = {200, 0, 256, 1.0, 0.0, AMeshKind::graded};
            // one cell above the root: the first occupied cell then lies above it
            init.a0 = *find_root_h(4.0, 1.0, 0.5) + p.a_max / c.grid.na;
            init.A0 = 1.0;
            st.dt = 1e-2;
            c.run.t_end = 10.0;
            c.output.interval = 0.1;
            c.output.field_interval = 1.0;
        } else {
            init.a0 = 0.01;
            init.A0 = 0.02;
            c.grid = {200, 0, 256, 1.2, 1e-16, AMeshKind::characteristic};
            st.dt = 1e-2;
            st.dt_from_cfl = true;
            st.cfl_fraction = 1.0;
            st.adaptive = true;
            c.run.t_end = 3.0;
            c.output.every = 1;
            c.output.field_interval = 0.1;
        }
    } else if (name == "ball-2d") {
        p.dimension = 2;
        p.drift = {DriftSign::deceleration, 0.5};
        p.localization = LocalizationSpec::ball_2d();
        p.half_width = 2.0;
        p.a_max = 0.3;
        init.a0 = 0.2;
        init.A0 = 0.25;
        init.x_profile = {ProfileKind::cosine_bump, 0.0, 0.5};
        c.grid = {128, 128, 128, 1.3, 1e-14, AMeshKind::characteristic};
        c.run.diagnostics.m = 0.25;
        st.dt = 1e-2;
        st.dt_from_cfl = true;
        st.cfl_fraction = 1.0;
        st.adaptive = true;
        c.run.t_end = 3.0;
        c.output.every = 1;
        c.output.fields = false;
    } else if (name == "sde-crosscheck") {
        p.drift = {DriftSign::deceleration, 0.5};
        p.localization = LocalizationSpec::interval(0.5);
        p.half_width = 5.0;
        p.a_max = 1.0;
        init.a0 = 0.25;
        init.A0 = 1.0;
        init.x_profile = {ProfileKind::cosine_bump, 0.0, 1.0};
        c.grid = {100, 0, 128, 1.0, 0.0, AMeshKind::graded};
        st.dt = 1e-3;
        c.run.t_end = 0.5;
        c.output.interval = 0.05;
        c.output.field_interval = 0.5;
        c.particles.count = 100000;
        c.particles.dt = 1e-3;
    } else {
        throw ConfigError("preset", 0, "unknown preset '" + name + "'");
    }
    return c;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

inline double parse_double(const std::string& key, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        if (!std::isfinite(d)) throw std::invalid_argument("non-finite");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key, line, "expected a number, got '" + v + "'");
    }
}

inline long long parse_int(const std::string& key, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key, line, "expected an integer, got '" + v + "'");
    }
}

inline bool parse_bool(const std::string& key, int line, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, line, "expected true or false, got '" + v + "'");
}

inline ProfileKind parse_profile(const std::string& key, int line, const std::string& v) {
    if (v == "uniform") return ProfileKind::uniform;
    if (v == "cosine_bump") return ProfileKind::cosine_bump;
    if (v == "gaussian") return ProfileKind::gaussian;
    throw ConfigError(key, line, "unknown profile '" + v + "' (uniform, cosine_bump, gaussian)");
}

}  // namespace detail

/// Remembers where each key was set so late validation can point at it.
struct KeyLines {
    std::map<std::string, int> lines;
    int of(const std::string& key) const {
        auto it = lines.find(key);
        return it == lines.end() ? 0 : it->second;
    }
};

/// Applies one `section.key = value` setting.
inline void apply_setting(RunConfig& c, const std::string& section, const std::string& key,
                          const std::string& raw, int line) {
    using namespace detail;
    const std::string v = unquote(trim(raw));
    const std::string full = section + "." + key;
    auto num = [&] { return parse_double(key, line, v); };
    auto positive = [&] {
        const double d = num();
        if (!(d > 0.0)) throw ConfigError(key, line, key + " must be positive");
        return d;
    };
    auto count = [&](long long lo) {
        const long long n = parse_int(key, line, v);
        if (n < lo) throw ConfigError(key, line, key + " must be >= " + std::to_string(lo));
        return n;
    };
    auto& p = c.problem;
    auto& init = c.initial;
    auto& st = c.run.stepper;
    auto& dg = c.run.diagnostics;

    if (section == "problem") {
        if (key == "dimension") {
            const auto d = parse_int(key, line, v);
            if (d != 1 && d != 2) throw ConfigError(key, line, "dimension must be 1 or 2");
            p.dimension = static_cast<int>(d);
        } else if (key == "drift") {
            if (v == "deceleration") p.drift.sign = DriftSign::deceleration;
            else if (v == "acceleration") p.drift.sign = DriftSign::acceleration;
            else throw ConfigError(key, line, "drift must be deceleration or acceleration");
        } else if (key == "gamma") {
            const double g = num();
            if (!(g >= 0.0)) throw ConfigError(key, line, "gamma must be >= 0");
            p.drift.gamma = g;
        } else if (key == "localization") {
            const double delta = p.localization.delta;
            if (v == "whole_line") p.localization = LocalizationSpec::whole_line();
            else if (v == "interval") p.localization = LocalizationSpec::interval(delta);
            else if (v == "smooth_bump") p.localization = LocalizationSpec::smooth_bump();
            else if (v == "ball_2d") p.localization = LocalizationSpec::ball_2d();
            else throw ConfigError(key, line, "unknown localization '" + v + "'");
        } else if (key == "delta") {
            p.localization.delta = positive();
        } else if (key == "lambda") {
            const double l = num();
            if (!(l >= 0.0)) throw ConfigError(key, line, "lambda must be >= 0");
            p.logistic.lambda = l;
        } else if (key == "a_star") {
            p.logistic.a_star_cap = positive();
        } else if (key == "q") {
            const double q = num();
            if (!(q >= 1.0)) throw ConfigError(key, line, "q must be >= 1");
            p.diffusion_exponent = q;
        } else if (key == "L") {
            p.half_width = positive();
        } else if (key == "a_max") {
            p.a_max = positive();
        } else {
            throw ConfigError(key, line, "unknown key '" + full + "'");
        }
    } else if (section == "initial") {
        if (key == "a0") {
            const double a = num();
            if (!(a >= 0.0)) throw ConfigError(key, line, "a0 must be >= 0");
            init.a0 = a;
        } else if (key == "A0") {
            init.A0 = positive();
        } else if (key == "a_profile") {
            init.a_profile = parse_profile(key, line, v);
        } else if (key == "x_profile") {
            init.x_profile.kind = parse_profile(key, line, v);
        } else if (key == "x_center") {
            init.x_profile.center = num();
        } else if (key == "x_width") {
            init.x_profile.half_width = positive();
        } else if (key == "mass") {
            init.total_mass = positive();
        } else {
            throw ConfigError(key, line, "unknown key '" + full + "'");
        }
    } else if (section == "stepper") {
        if (key == "dt") {
            st.dt = positive();
        } else if (key == "dt_from_cfl") {
            st.dt_from_cfl = parse_bool(key, line, v);
        } else if (key == "adaptive") {
            st.adaptive = parse_bool(key, line, v);
        } else if (key == "cfl") {
            const double f = num();
            if (!(f > 0.0 && f <= 1.0)) throw ConfigError(key, line, "cfl must lie in (0,1]");
            st.cfl_fraction = f;
        } else if (key == "diffusion") {
            if (v == "backward_euler") st.diffusion = DiffusionScheme::backward_euler;
            else if (v == "crank_nicolson") st.diffusion = DiffusionScheme::crank_nicolson;
            else throw ConfigError(key, line, "diffusion must be backward_euler or crank_nicolson");
        } else if (key == "advection") {
            if (v == "explicit") st.advection = AdvectionScheme::explicit_upwind;
            else if (v == "implicit") st.advection = AdvectionScheme::implicit_upwind;
            else if (v == "local") st.advection = AdvectionScheme::local_upwind;
            else throw ConfigError(key, line, "advection must be explicit, implicit or local");
        } else if (key == "dt_min") {
            st.dt_min = positive();
        } else if (key == "mass_floor") {
            const double f = num();
            if (!(f >= 0.0)) throw ConfigError(key, line, "mass_floor must be >= 0");
            st.mass_floor = f;
        } else if (key == "positivity_clip") {
            st.positivity_clip = parse_bool(key, line, v);
        } else if (key == "t_end") {
            c.run.t_end = positive();
        } else if (key == "stop_on_blowup") {
            c.run.stop_on_blowup = parse_bool(key, line, v);
        } else if (key == "nx") {
            c.grid.nx = static_cast<int>(count(2));
        } else if (key == "ny") {
            c.grid.ny = static_cast<int>(count(2));
        } else if (key == "na") {
            c.grid.na = static_cast<int>(count(1));
        } else if (key == "grading") {
            const double r = num();
            if (!(r >= 1.0 && r <= 2.0)) throw ConfigError(key, line, "grading must lie in [1, 2]");
            c.grid.grading = r;
        } else if (key == "a_min_width") {
            const double w = num();
            if (!(w >= 0.0)) throw ConfigError(key, line, "a_min_width must be >= 0");
            c.grid.a_min_width = w;
        } else if (key == "a_mesh") {
            if (v == "graded") c.grid.mesh = AMeshKind::graded;
            else if (v == "characteristic") c.grid.mesh = AMeshKind::characteristic;
            else throw ConfigError(key, line, "a_mesh must be graded or characteristic");
        } else if (key == "particles") {
            c.particles.count = static_cast<std::size_t>(count(0));
        } else if (key == "particle_dt") {
            c.particles.dt = positive();
        } else if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(count(0));
        } else if (key == "threads") {
            c.threads = static_cast<int>(count(0));
        } else {
            throw ConfigError(key, line, "unknown key '" + full + "'");
        }
    } else if (section == "diagnostics") {
        if (key == "p") {
            const double d = num();
            if (!(d >= 1.0)) throw ConfigError(key, line, "p must be >= 1");
            dg.p = d;
        } else if (key == "m") {
            const double m = num();
            if (!(m > 0.0 && m < 1.0)) throw ConfigError(key, line, "m must lie in (0,1)");
            dg.m = m;
        } else if (key == "virial_factor") {
            dg.virial_factor = positive();
        } else if (key == "lp_factor") {
            dg.lp_factor = positive();
        } else if (key == "support_threshold") {
            dg.support_threshold = positive();
        } else if (key == "concentration_level") {
            dg.concentration_level = positive();
        } else {
            throw ConfigError(key, line, "unknown key '" + full + "'");
        }
    } else if (section == "output") {
        if (key == "dir") {
            c.output.dir = v;
        } else if (key == "interval") {
            c.output.interval = positive();
        } else if (key == "every") {
            c.output.every = static_cast<int>(count(0));
        } else if (key == "fields") {
            c.output.fields = parse_bool(key, line, v);
        } else if (key == "field_interval") {
            c.output.field_interval = num();
        } else if (key == "particle_dump") {
            c.particles.dump = parse_bool(key, line, v);
        } else {
            throw ConfigError(key, line, "unknown key '" + full + "'");
        }
    } else {
        throw ConfigError(key, line, "unknown section '" + section + "'");
    }
}

inline std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/// Cross-key checks, run after every key is applied.
inline void validate_config(const RunConfig& c, const KeyLines& kl = {}) {
    const auto& p = c.problem;
    const auto& init = c.initial;
    if (p.porous() && p.drift.gamma > 0.0 && !(p.diffusion_exponent < porous_exponent_limit(p.drift.gamma)))
        throw ConfigError("q", kl.of("problem.q"),
                          "q = " + fmt_short(p.diffusion_exponent) + " is outside [1, 1+1/gamma) = [1, " +
                              fmt_short(porous_exponent_limit(p.drift.gamma)) + ")");
    if (p.porous() && p.dimension != 1)
        throw ConfigError("q", kl.of("problem.q"), "porous diffusion is only available in 1D");
    if (!(init.A0 > init.a0)) throw ConfigError("A0", kl.of("initial.A0"), "A0 must exceed a0");
    if (init.A0 > p.a_max) throw ConfigError("a_max", kl.of("problem.a_max"), "a_max must be >= A0");
    const auto kind = p.localization.kind;
    if (p.dimension == 2 && kind != LocalizationKind::ball_2d && kind != LocalizationKind::whole_line)
        throw ConfigError("localization", kl.of("problem.localization"),
                          "2D runs support ball_2d or whole_line localization");
    if (p.dimension == 1 && kind == LocalizationKind::ball_2d)
        throw ConfigError("localization", kl.of("problem.localization"), "ball_2d requires dimension = 2");
    if (c.grid.mesh == AMeshKind::characteristic && !(c.grid.grading > 1.0 && c.grid.a_min_width > 0.0))
        throw ConfigError("a_mesh", kl.of("stepper.a_mesh"), "characteristic mesh needs grading > 1 and a_min_width > 0");
    try {
        p.validate();
        c.run.stepper.validate();
        (void)c.make_grid();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("", 0, e.what());
    }
}

/// Parses a configuration text. A leading `preset = "name"` seeds every
/// value; later keys override it. Without a preset, problem.gamma,
/// initial.A0 and stepper.t_end are required.
inline RunConfig parse_config(const std::string& text) {
    using namespace detail;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::string section;
    std::optional<RunConfig> cfg;
    RunConfig explicit_cfg;
    KeyLines kl;
    bool any_section = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("", line, "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            any_section = true;
            if (section != "problem" && section != "initial" && section != "stepper" && section != "diagnostics" &&
                section != "output")
                throw ConfigError(section, line, "unknown section '" + section + "'");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("", line, "expected key = value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("", line, "missing key");
        if (section.empty()) {
            if (key != "preset") throw ConfigError(key, line, "only 'preset' may appear before a section");
            if (any_section || cfg) throw ConfigError(key, line, "preset must come first and only once");
            try {
                cfg = preset_config(unquote(value));
            } catch (const ConfigError& e) {
                throw ConfigError(key, line, e.what());
            }
            continue;
        }
        RunConfig& target = cfg ? *cfg : explicit_cfg;
        apply_setting(target, section, key, value, line);
        kl.lines[section + "." + key] = line;
    }
    if (!cfg) {
        for (const char* req : {"problem.gamma", "initial.A0", "stepper.t_end"})
            if (!kl.lines.count(req)) {
                const std::string k(req);
                throw ConfigError(k.substr(k.find('.') + 1), 0, std::string("missing required key '") + req + "'");
            }
        cfg = explicit_cfg;
    }
    validate_config(*cfg, kl);
    return *cfg;
}

/// Section that owns a bare key name ("gamma" -> "problem"); empty if none.
inline std::string section_of(const std::string& key) {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"problem", {"dimension", "drift", "gamma", "localization", "delta", "lambda", "a_star", "q", "L", "a_max"}},
        {"initial", {"a0", "A0", "a_profile", "x_profile", "x_center", "x_width", "mass"}},
        {"stepper", {"dt", "dt_from_cfl", "adaptive", "cfl", "diffusion", "advection", "dt_min", "mass_floor",
                     "positivity_clip", "t_end", "stop_on_blowup", "nx", "ny", "na", "grading", "a_min_width",
                     "a_mesh", "particles", "particle_dt", "seed", "threads"}},
        {"diagnostics", {"p", "m", "virial_factor", "lp_factor", "support_threshold", "concentration_level"}},
        {"output", {"dir", "interval", "every", "fields", "field_interval", "particle_dump"}},
    };
    for (const auto& [section, names] : keys)
        for (const auto& n : names)
            if (n == key) return section;
    return {};
}

/// Applies a `section.key=value` override (as given on the command line).
/// A bare `key=value` is accepted when the key name is unambiguous.
inline void apply_override(RunConfig& c, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(assignment, 0, "override must look like section.key=value");
    const std::string lhs = detail::trim(assignment.substr(0, eq));
    const auto dot = lhs.find('.');
    std::string section, key;
    if (dot == std::string::npos) {
        key = lhs;
        section = section_of(key);
        if (section.empty()) throw ConfigError(key, 0, "unknown key '" + key + "'");
    } else {
        section = detail::trim(lhs.substr(0, dot));
        key = detail::trim(lhs.substr(dot + 1));
    }
    apply_setting(c, section, key, assignment.substr(eq + 1), 0);
}

}  // namespace driftlab
