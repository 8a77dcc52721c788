/// @file scenario.hpp
/// @brief Runs a RunConfig end to end and writes its artifacts
///
/// Artifacts in the output directory:
///   config.txt       effective configuration (re-parseable, no preset)
///   diagnostics.csv  one row per output time
///   report.txt       key = value blow-up report
///   field_t*.csv     field dumps
///   trajectory.csv   particle summaries (when particles > 0)
///   particles.csv    per-particle dump (when output.particle_dump)
#pragma once

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "config.hpp"
#include "io.hpp"
#include "particles.hpp"
#include "pde.hpp"

namespace driftlab {

enum ExitCode : int { exit_global = 0, exit_config_error = 1, exit_numerical_failure = 2, exit_blow_up = 3 };

namespace detail {

inline const char* name_of(ProfileKind k) {
    switch (k) {
    case ProfileKind::uniform: return "uniform";
    case ProfileKind::cosine_bump: return "cosine_bump";
    case ProfileKind::gaussian: return "gaussian";
    }
    return "uniform";
}

inline const char* name_of(LocalizationKind k) {
    switch (k) {
    case LocalizationKind::whole_line: return "whole_line";
    case LocalizationKind::interval: return "interval";
    case LocalizationKind::ball_2d: return "ball_2d";
    case LocalizationKind::smooth_bump: return "smooth_bump";
    }
    return "whole_line";
}

inline const char* name_of(AdvectionScheme s) {
    switch (s) {
    case AdvectionScheme::explicit_upwind: return "explicit";
    case AdvectionScheme::implicit_upwind: return "implicit";
    case AdvectionScheme::local_upwind: return "local";
    }
    return "local";
}

}  // namespace detail

/// Writes `c` as an explicit configuration that parse_config accepts.
inline std::string dump_config(const RunConfig& c) {
    using detail::name_of;
    const auto& p = c.problem;
    const auto& init = c.initial;
    const auto& st = c.run.stepper;
    const auto& dg = c.run.diagnostics;
    std::ostringstream os;
    os << "# effective configuration";
    if (!c.preset.empty()) os << " (from preset " << c.preset << ")";
    os << "\n[problem]\n"
       << "dimension = " << p.dimension << '\n'
       << "drift = " << (p.drift.sign == DriftSign::deceleration ? "deceleration" : "acceleration") << '\n'
       << "gamma = " << fmt(p.drift.gamma) << '\n'
       << "localization = " << name_of(p.localization.kind) << '\n'
       << "delta = " << fmt(p.localization.delta) << '\n'
       << "lambda = " << fmt(p.logistic.lambda) << '\n'
       << "a_star = " << fmt(p.logistic.a_star_cap) << '\n'
       << "q = " << fmt(p.diffusion_exponent) << '\n'
       << "L = " << fmt(p.half_width) << '\n'
       << "a_max = " << fmt(p.a_max) << '\n'
       << "[initial]\n"
       << "a0 = " << fmt(init.a0) << '\n'
       << "A0 = " << fmt(init.A0) << '\n'
       << "a_profile = " << name_of(init.a_profile) << '\n'
       << "x_profile = " << name_of(init.x_profile.kind) << '\n'
       << "x_center = " << fmt(init.x_profile.center) << '\n'
       << "x_width = " << fmt(init.x_profile.half_width) << '\n'
       << "mass = " << fmt(init.total_mass) << '\n'
       << "[stepper]\n"
       << "t_end = " << fmt(c.run.t_end) << '\n'
       << "dt = " << fmt(st.dt) << '\n'
       << "dt_from_cfl = " << (st.dt_from_cfl ? "true" : "false") << '\n'
       << "adaptive = " << (st.adaptive ? "true" : "false") << '\n'
       << "cfl = " << fmt(st.cfl_fraction) << '\n'
       << "diffusion = "
       << (st.diffusion == DiffusionScheme::backward_euler ? "backward_euler" : "crank_nicolson") << '\n'
       << "advection = " << name_of(st.advection) << '\n'
       << "dt_min = " << fmt(st.dt_min) << '\n'
       << "mass_floor = " << fmt(st.mass_floor) << '\n'
       << "positivity_clip = " << (st.positivity_clip ? "true" : "false") << '\n'
       << "stop_on_blowup = " << (c.run.stop_on_blowup ? "true" : "false") << '\n'
       << "nx = " << c.grid.nx << '\n';
    if (c.grid.ny > 0) os << "ny = " << c.grid.ny << '\n';
    os << "na = " << c.grid.na << '\n'
       << "grading = " << fmt(c.grid.grading) << '\n'
       << "a_min_width = " << fmt(c.grid.a_min_width) << '\n'
       << "a_mesh = " << (c.grid.mesh == AMeshKind::graded ? "graded" : "characteristic") << '\n'
       << "particles = " << c.particles.count << '\n'
       << "particle_dt = " << fmt(c.particles.dt) << '\n'
       << "seed = " << c.seed << '\n'
       << "threads = " << c.threads << '\n'
       << "[diagnostics]\n"
       << "p = " << fmt(dg.p) << '\n';
    if (!std::isnan(dg.m)) os << "m = " << fmt(dg.m) << '\n';
    os << "virial_factor = " << fmt(dg.virial_factor) << '\n'
       << "lp_factor = " << fmt(dg.lp_factor) << '\n'
       << "support_threshold = " << fmt(dg.support_threshold) << '\n'
       << "concentration_level = " << fmt(dg.concentration_level) << '\n'
       << "[output]\n"
       << "dir = \"" << c.output.dir << "\"\n";
    if (c.output.interval > 0.0) os << "interval = " << fmt(c.output.interval) << '\n';
    os << "every = " << c.output.every << '\n'
       << "fields = " << (c.output.fields ? "true" : "false") << '\n'
       << "field_interval = " << fmt(c.output.field_interval) << '\n'
       << "particle_dump = " << (c.particles.dump ? "true" : "false") << '\n';
    return os.str();
}

struct ScenarioResult {
    int exit_code = exit_global;
    RunResult pde;
    std::optional<EnsembleResult> particles;
    std::optional<double> particle_l1;  ///< x-marginal L1 distance PDE vs particles at t_end (1D)
    std::string error;
};

/// Runs `c` and writes artifacts to c.output.dir. Numerical failures are
/// reported through the exit code, with the partial diagnostics written.
inline ScenarioResult run_config(const RunConfig& c, std::ostream& log = std::clog) {
    namespace fs = std::filesystem;
    ScenarioResult out;
#ifdef _OPENMP
    if (c.threads > 0) omp_set_num_threads(c.threads);
#endif
    const fs::path dir(c.output.dir);
    fs::create_directories(dir);
    {
        auto os = open_out((dir / "config.txt").string());
        os << dump_config(c);
    }

    const Grid g = c.make_grid();
    const Field initial = make_initial_field(c.problem, g, c.initial);

    RunOptions opt = c.run;
    opt.output_interval = c.output.interval;
    opt.output_every = c.output.every;

    double next_field = 0.0;
    const double field_eps = 1e-9 * opt.t_end;
    Observer observer;
    if (c.output.fields)
        observer = [&](const Field& f, const DiagnosticsSample&) {
            if (f.time + field_eps < next_field) return;
            write_field_csv((dir / field_filename(f.time)).string(), f, g);
            if (c.output.field_interval > 0.0)
                while (next_field <= f.time + field_eps) next_field += c.output.field_interval;
        };

    KeyValueReport kv;
    kv.set("preset", c.preset.empty() ? std::string("none") : c.preset);
    try {
        out.pde = run(c.problem, g, initial, opt, observer);
    } catch (const NumericalError& e) {
        out.exit_code = exit_numerical_failure;
        out.error = e.what();
        kv.set("status", "numerical_failure");
        kv.set("error", out.error);
        write_field_csv((dir / field_filename(e.state().time)).string(), e.state(), g);
        kv.write((dir / "report.txt").string());
        log << "numerical failure: " << out.error << '\n';
        return out;
    }
    const auto& r = out.pde;
    if (c.output.fields && r.final.time + field_eps >= next_field && r.series.samples.back().t != r.final.time)
        write_field_csv((dir / field_filename(r.final.time)).string(), r.final, g);
    write_diagnostics_csv((dir / "diagnostics.csv").string(), r.series);

    double drift = 0.0;
    for (const auto& s : r.series.samples)
        drift = std::max(drift, std::abs(s.mass + s.boundary_mass - r.initial_mass));
    kv.set("status", "completed");
    add_report(kv, r.report);
    kv.set("t_final", r.final.time);
    kv.set("steps", std::to_string(r.steps));
    kv.set("initial_mass", r.initial_mass);
    kv.set("max_mass_drift", drift);
    kv.set("virial_m", r.series.m);
    kv.set("p", r.series.p);

    if (c.particles.count > 0) {
        const auto ens = sample_from_field(initial, g, c.particles.count, c.seed);
        out.particles = simulate_ensemble(ens, c.problem, c.particles.dt, c.run.t_end,
                                          c.output.interval > 0.0 ? c.output.interval : 0.0);
        write_trajectory_csv((dir / "trajectory.csv").string(), out.particles->summary);
        if (c.particles.dump) write_particles_csv((dir / "particles.csv").string(), out.particles->ensemble);
        kv.set("particles", std::to_string(c.particles.count));
        kv.set("trapped_fraction", out.particles->summary.back().trapped_fraction);
        if (g.dimension() == 1 && std::abs(r.final.time - c.run.t_end) <= field_eps) {
            const auto pde_marg = x_marginal(r.final, g);
            const auto sde_marg = ensemble_x_marginal(out.particles->ensemble, g, r.initial_mass);
            out.particle_l1 = l1_distance(pde_marg, sde_marg, g.dx());
            kv.set("particle_x_marginal_l1", *out.particle_l1);
        }
    }
    kv.write((dir / "report.txt").string());
    out.exit_code = r.report.verdict == Verdict::blow_up ? exit_blow_up : exit_global;
    return out;
}

}  // namespace driftlab
