/// @file pde.hpp
/// @brief Conservative finite-volume solver: implicit diffusion in x per
///        a-slice, upwind transport in a, Strang splitting
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "field.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "tridiag.hpp"

namespace driftlab {

enum class DiffusionScheme { backward_euler, crank_nicolson };
/// explicit_upwind: SSP-RK2 over forward-Euler upwind, CFL-limited.
/// implicit_upwind: backward-Euler upwind.
/// local_upwind: forward Euler in cells with Courant number <= 1, backward
/// Euler in the others; no step restriction.
enum class AdvectionScheme { explicit_upwind, implicit_upwind, local_upwind };

struct StepperConfig {
    double dt = 1e-3;
    bool dt_from_cfl = false;  ///< nominal dt = 2 x stable transport step of the initial datum
    bool adaptive = false;
    double cfl_fraction = 0.9;
    DiffusionScheme diffusion = DiffusionScheme::backward_euler;
    AdvectionScheme advection = AdvectionScheme::explicit_upwind;
    double dt_min = 1e-8;
    double mass_floor = 1e-18;  ///< cells lighter than this fraction of M do not limit dt
    bool positivity_clip = false;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
        if (!(cfl_fraction > 0.0 && cfl_fraction <= 1.0))
            throw std::invalid_argument("cfl_fraction must lie in (0,1]");
        if (!(dt_min > 0.0)) throw std::invalid_argument("dt_min must be positive");
        if (!(mass_floor >= 0.0)) throw std::invalid_argument("mass_floor must be nonnegative");
    }
};

class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, Field state)
        : std::runtime_error(what), state_(std::move(state)) {}
    const Field& state() const { return state_; }

private:
    Field state_;
};

class CflError : public std::runtime_error {
public:
    CflError(double dt, double dt_max)
        : std::runtime_error("CFL violation: dt = " + std::to_string(dt) +
                             " exceeds the stable limit " + std::to_string(dt_max)),
          dt_(dt), dt_max_(dt_max) {}
    double dt() const { return dt_; }
    double dt_max() const { return dt_max_; }

private:
    double dt_;
    double dt_max_;
};

/// Transport coefficients on the grid: v(s, j) = -psi_s f(a_j) + lambda g(a_j).
struct Coefficients {
    std::vector<double> psi;     ///< per spatial cell
    std::vector<double> f;       ///< f(a_j)
    std::vector<double> lg;      ///< lambda g(a_j)
    std::vector<double> bottom;  ///< v(s, 0) at the a = 0 face
    bool has_logistic = false;

    double velocity(std::size_t s, std::size_t j) const { return -psi[s] * f[j] + lg[j]; }
};

inline Coefficients make_coefficients(const ProblemSpec& spec, const Grid& g) {
    Coefficients c;
    c.psi = psi_on_grid(g, spec.localization);
    const auto na = static_cast<std::size_t>(g.na());
    c.f.resize(na);
    c.lg.resize(na);
    for (std::size_t j = 0; j < na; ++j) {
        c.f[j] = drift_f(g.a_centers()[j], spec.drift);
        c.lg[j] = spec.logistic.lambda * logistic_g(g.a_centers()[j], spec.logistic);
    }
    c.has_logistic = spec.logistic.enabled();
    const double f0 = drift_f(0.0, spec.drift);
    c.bottom.resize(c.psi.size());
    for (std::size_t s = 0; s < c.psi.size(); ++s) c.bottom[s] = -c.psi[s] * f0;
    return c;
}

namespace detail {

/// Per-cell outflow rates (1/time): upward through the top face and downward
/// through the bottom face (into boundary_mass for the first cell).
struct Rates {
    double up = 0.0;
    double down = 0.0;
};

inline Rates outflow_rates(const Coefficients& c, const Grid& g, std::size_t s, std::size_t j) {
    const std::size_t na = static_cast<std::size_t>(g.na());
    const double v = c.velocity(s, j);
    const double w = g.a_widths()[j];
    Rates r;
    if (j + 1 < na && v > 0.0) r.up = v / w;
    if (j > 0) {
        if (v < 0.0) r.down = -v / w;
    } else if (c.bottom[s] < 0.0) {
        r.down = -c.bottom[s] / w;
    }
    return r;
}

inline bool column_static(const Coefficients& c, std::size_t s) {
    return c.psi[s] == 0.0 && !c.has_logistic;
}

/// One forward-Euler upwind step in place, in mass-per-area variables
/// q = u * da. Outflow fractions are capped at 1 (only reachable in cells
/// ignored by the mass-aware CFL).
inline void advect_explicit_fe(std::vector<double>& u, double& boundary, double dt, const Grid& g,
                               const Coefficients& c, std::vector<double>& out_up,
                               std::vector<double>& out_down) {
    const std::size_t ns = g.n_space(), na = static_cast<std::size_t>(g.na());
    out_up.assign(u.size(), 0.0);
    out_down.assign(u.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(na); ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const double w = g.a_widths()[j];
        for (std::size_t s = 0; s < ns; ++s) {
            if (column_static(c, s)) continue;
            const std::size_t id = j * ns + s;
            const double q = u[id] * w;
            if (q == 0.0) continue;
            const Rates r = outflow_rates(c, g, s, j);
            double fu = dt * r.up, fd = dt * r.down;
            const double tot = fu + fd;
            if (tot > 1.0) {
                fu /= tot;
                fd /= tot;
            }
            out_up[id] = fu * q;
            out_down[id] = fd * q;
        }
    }
    double absorbed = 0.0;
    for (std::size_t s = 0; s < ns; ++s) absorbed += out_down[s];
    absorbed *= g.cell_area();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(na); ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const double w = g.a_widths()[j];
        for (std::size_t s = 0; s < ns; ++s) {
            if (column_static(c, s)) continue;
            const std::size_t id = j * ns + s;
            double q = u[id] * w - out_up[id] - out_down[id];
            if (j > 0) q += out_up[id - ns];
            if (j + 1 < na) q += out_down[id + ns];
            u[id] = std::max(q, 0.0) / w;
        }
    }
    boundary += absorbed;
}

}  // namespace detail

/// Largest dt for which forward-Euler upwind keeps dt * (outflow rate) <=
/// cfl_fraction in every cell holding at least mass_floor * (total mass).
inline double max_stable_advection_dt(const Field& f, const Grid& g, const Coefficients& c,
                                      double cfl_fraction, double mass_floor) {
    const std::size_t ns = g.n_space(), na = static_cast<std::size_t>(g.na());
    const double area = g.cell_area();
    const double floor_mass = mass_floor * (mass(f, g) + f.boundary_mass);
    double rate = 0.0;
    for (std::size_t j = 0; j < na; ++j) {
        const double w = g.a_widths()[j];
        for (std::size_t s = 0; s < ns; ++s) {
            const double m = f.u[j * ns + s] * w * area;
            if (m <= 0.0 || m < floor_mass) continue;
            const auto r = detail::outflow_rates(c, g, s, j);
            rate = std::max(rate, r.up + r.down);
        }
    }
    return rate > 0.0 ? cfl_fraction / rate : std::numeric_limits<double>::infinity();
}

inline double max_stable_advection_dt(const Field& f, const Grid& g, const ProblemSpec& spec,
                                      double cfl_fraction = 0.9, double mass_floor = 1e-18) {
    return max_stable_advection_dt(f, g, make_coefficients(spec, g), cfl_fraction, mass_floor);
}

namespace detail {

inline void advect_explicit(Field& f, double dt, const Grid& g, const Coefficients& c) {
    // SSP-RK2 (Heun) over forward-Euler upwind stages
    std::vector<double> up, down;
    std::vector<double> u1 = f.u;
    double b1 = f.boundary_mass;
    advect_explicit_fe(u1, b1, dt, g, c, up, down);
    std::vector<double> u2 = u1;
    double b2 = b1;
    advect_explicit_fe(u2, b2, dt, g, c, up, down);
    for (std::size_t k = 0; k < f.u.size(); ++k) f.u[k] = 0.5 * (f.u[k] + u2[k]);
    f.boundary_mass = 0.5 * (f.boundary_mass + b2);
}

inline void advect_implicit(Field& f, double dt, const Grid& g, const Coefficients& c) {
    const std::size_t ns = g.n_space(), na = static_cast<std::size_t>(g.na());
    std::vector<double> absorbed(ns, 0.0);
#pragma omp parallel
    {
        std::vector<double> lo(na), di(na), hi(na), rhs(na), scratch(na), up(na), down(na);
#pragma omp for schedule(static)
        for (std::ptrdiff_t ss = 0; ss < static_cast<std::ptrdiff_t>(ns); ++ss) {
            const auto s = static_cast<std::size_t>(ss);
            if (column_static(c, s)) continue;
            bool any = false;
            for (std::size_t j = 0; j < na; ++j) {
                rhs[j] = f.u[j * ns + s] * g.a_widths()[j];
                any = any || rhs[j] != 0.0;
                const auto r = outflow_rates(c, g, s, j);
                up[j] = r.up;
                down[j] = r.down;
            }
            if (!any) continue;
            for (std::size_t j = 0; j < na; ++j) {
                di[j] = 1.0 + dt * (up[j] + down[j]);
                lo[j] = j > 0 ? -dt * up[j - 1] : 0.0;
                hi[j] = j + 1 < na ? -dt * down[j + 1] : 0.0;
            }
            solve_tridiagonal(lo, di, hi, rhs, scratch);
            absorbed[s] = dt * down[0] * rhs[0];
            for (std::size_t j = 0; j < na; ++j) f.u[j * ns + s] = std::max(rhs[j], 0.0) / g.a_widths()[j];
        }
    }
    double total = 0.0;
    for (double a : absorbed) total += a;
    f.boundary_mass += total * g.cell_area();
}

/// Mixed update: each cell's outflow is taken at the old state when its
/// Courant number is <= 1 (capped at full outflow) and at the new state
/// otherwise. One tridiagonal M-matrix solve per column.
inline void advect_local(Field& f, double dt, const Grid& g, const Coefficients& c) {
    const std::size_t ns = g.n_space(), na = static_cast<std::size_t>(g.na());
    std::vector<double> absorbed(ns, 0.0);
#pragma omp parallel
    {
        std::vector<double> lo(na), di(na), hi(na), rhs(na), scratch(na), up(na), down(na), q(na);
        std::vector<char> impl(na);
#pragma omp for schedule(static)
        for (std::ptrdiff_t ss = 0; ss < static_cast<std::ptrdiff_t>(ns); ++ss) {
            const auto s = static_cast<std::size_t>(ss);
            if (column_static(c, s)) continue;
            bool any = false, any_impl = false;
            for (std::size_t j = 0; j < na; ++j) {
                q[j] = f.u[j * ns + s] * g.a_widths()[j];
                any = any || q[j] != 0.0;
                const auto r = outflow_rates(c, g, s, j);
                double fu = dt * r.up, fd = dt * r.down;
                const double tot = fu + fd;
                impl[j] = tot > 1.0 + 1e-12;
                if (!impl[j] && tot > 1.0) {
                    fu /= tot;
                    fd /= tot;
                }
                up[j] = fu;
                down[j] = fd;
                any_impl = any_impl || impl[j];
            }
            if (!any) continue;
            // explicit contributions on the right, implicit ones in the matrix
            for (std::size_t j = 0; j < na; ++j) {
                double r = impl[j] ? q[j] : q[j] * (1.0 - up[j] - down[j]);
                if (j > 0 && !impl[j - 1]) r += up[j - 1] * q[j - 1];
                if (j + 1 < na && !impl[j + 1]) r += down[j + 1] * q[j + 1];
                rhs[j] = r;
                di[j] = 1.0 + (impl[j] ? up[j] + down[j] : 0.0);
                lo[j] = (j > 0 && impl[j - 1]) ? -up[j - 1] : 0.0;
                hi[j] = (j + 1 < na && impl[j + 1]) ? -down[j + 1] : 0.0;
            }
            if (any_impl) solve_tridiagonal(lo, di, hi, rhs, scratch);
            absorbed[s] = down[0] * (impl[0] ? rhs[0] : q[0]);
            for (std::size_t j = 0; j < na; ++j) f.u[j * ns + s] = std::max(rhs[j], 0.0) / g.a_widths()[j];
        }
    }
    double total = 0.0;
    for (double a : absorbed) total += a;
    f.boundary_mass += total * g.cell_area();
}

}  // namespace detail

/// Upwind transport in a over dt. The explicit scheme throws CflError when dt
/// exceeds the mass-aware stability limit.
inline Field step_advection_a(const Field& field, double dt, const Grid& g, const ProblemSpec& spec,
                              AdvectionScheme scheme = AdvectionScheme::explicit_upwind,
                              double cfl_fraction = 0.9, double mass_floor = 1e-18) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const auto c = make_coefficients(spec, g);
    Field out = field;
    if (scheme == AdvectionScheme::explicit_upwind) {
        const double lim = max_stable_advection_dt(field, g, c, cfl_fraction, mass_floor);
        if (dt > lim * (1.0 + 1e-12)) throw CflError(dt, lim);
        detail::advect_explicit(out, dt, g, c);
    } else if (scheme == AdvectionScheme::implicit_upwind) {
        detail::advect_implicit(out, dt, g, c);
    } else {
        detail::advect_local(out, dt, g, c);
    }
    out.time = field.time + dt;
    return out;
}

namespace detail {

/// Implicit no-flux heat step along lines of length n with stride `stride`
/// starting at `base`, diffusion number r = dt a / h^2.
inline void diffuse_line(double* u, std::size_t n, std::size_t stride, double r, DiffusionScheme scheme,
                         std::vector<double>& lo, std::vector<double>& di, std::vector<double>& hi,
                         std::vector<double>& rhs, std::vector<double>& scratch) {
    const double theta = scheme == DiffusionScheme::crank_nicolson ? 0.5 : 1.0;
    const double ri = theta * r, re = (1.0 - theta) * r;
    for (std::size_t i = 0; i < n; ++i) {
        const double ui = u[i * stride];
        double lap = 0.0;
        if (re > 0.0) {
            if (i > 0) lap += u[(i - 1) * stride] - ui;
            if (i + 1 < n) lap += u[(i + 1) * stride] - ui;
        }
        rhs[i] = ui + re * lap;
        lo[i] = i > 0 ? -ri : 0.0;
        hi[i] = i + 1 < n ? -ri : 0.0;
        di[i] = 1.0 + (i > 0 ? ri : 0.0) + (i + 1 < n ? ri : 0.0);
    }
    solve_tridiagonal(lo, di, hi, rhs, scratch);
    for (std::size_t i = 0; i < n; ++i) u[i * stride] = rhs[i];
}

inline void check_finite(const Field& f, const char* where) {
    for (double v : f.u)
        if (!std::isfinite(v)) throw NumericalError(std::string("non-finite value in ") + where, f);
    if (!std::isfinite(f.boundary_mass)) throw NumericalError(std::string("non-finite boundary mass in ") + where, f);
}

inline void diffuse(Field& f, double dt, const Grid& g, DiffusionScheme scheme) {
    const std::size_t nx = static_cast<std::size_t>(g.nx()), ny = static_cast<std::size_t>(g.ny());
    const std::size_t ns = g.n_space(), na = static_cast<std::size_t>(g.na());
    const std::size_t nmax = std::max(nx, ny);
#pragma omp parallel
    {
        std::vector<double> lo(nmax), di(nmax), hi(nmax), rhs(nmax), scratch(nmax);
#pragma omp for schedule(static)
        for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(na); ++jj) {
            const auto j = static_cast<std::size_t>(jj);
            const double a = g.a_centers()[j];
            if (a == 0.0) continue;
            double* slice = f.u.data() + j * ns;
            const double rx = dt * a / (g.dx() * g.dx());
            for (std::size_t k = 0; k < ny; ++k)
                diffuse_line(slice + k * nx, nx, 1, rx, scheme, lo, di, hi, rhs, scratch);
            if (g.dimension() == 2) {
                const double ry = dt * a / (g.dy() * g.dy());
                for (std::size_t i = 0; i < nx; ++i)
                    diffuse_line(slice + i, ny, nx, ry, scheme, lo, di, hi, rhs, scratch);
            }
        }
    }
}

}  // namespace detail

/// Linear diffusion a Lap_x over dt, slice by slice, no-flux walls.
inline Field step_diffusion(const Field& field, double dt, const Grid& g, const ProblemSpec& spec,
                            DiffusionScheme scheme = DiffusionScheme::backward_euler) {
    (void)spec;
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    detail::check_finite(field, "step_diffusion input");
    Field out = field;
    detail::diffuse(out, dt, g, scheme);
    out.time = field.time + dt;
    return out;
}

/// Stability limit of the explicit porous step: cfl dx^2 / (2 a_j q max(u)^{q-1}).
inline double max_stable_porous_dt(const Field& f, const Grid& g, double q, double cfl_fraction) {
    const std::size_t ns = g.n_space();
    double dt = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.na(); ++j) {
        const double a = g.a_centers()[static_cast<std::size_t>(j)];
        const double* row = f.u.data() + static_cast<std::size_t>(j) * ns;
        double mx = 0.0;
        for (std::size_t s = 0; s < ns; ++s) mx = std::max(mx, row[s]);
        if (mx <= 0.0 || a <= 0.0) continue;
        dt = std::min(dt, cfl_fraction * g.dx() * g.dx() / (2.0 * a * q * std::pow(mx, q - 1.0)));
    }
    return dt;
}

/// Explicit conservative update of d_t u = a d_xx(u^q), no flux at the walls.
inline Field step_porous_diffusion(const Field& field, double dt, const Grid& g, const ProblemSpec& spec,
                                   double cfl_fraction = 0.9) {
    const double q = spec.diffusion_exponent;
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (g.dimension() != 1) throw std::invalid_argument("porous diffusion is 1D only");
    if (spec.drift.gamma > 0.0 && !(q < porous_exponent_limit(spec.drift.gamma)))
        throw std::invalid_argument("q must lie in [1, 1+1/gamma)");
    const double lim = max_stable_porous_dt(field, g, q, cfl_fraction);
    if (dt > lim) throw CflError(dt, lim);
    Field out = field;
    const std::size_t nx = static_cast<std::size_t>(g.nx());
#pragma omp parallel
    {
        std::vector<double> w(nx);
#pragma omp for schedule(static)
        for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(g.na()); ++jj) {
            const auto j = static_cast<std::size_t>(jj);
            const double r = dt * g.a_centers()[j] / (g.dx() * g.dx());
            if (r == 0.0) continue;
            const double* in = field.u.data() + j * nx;
            double* o = out.u.data() + j * nx;
            for (std::size_t i = 0; i < nx; ++i) w[i] = q == 1.0 ? in[i] : std::pow(in[i], q);
            // face fluxes w_{i+1} - w_i; walls carry none
            for (std::size_t i = 0; i < nx; ++i) {
                double lap = 0.0;
                if (i > 0) lap += w[i - 1] - w[i];
                if (i + 1 < nx) lap += w[i + 1] - w[i];
                o[i] = std::max(in[i] + r * lap, 0.0);
            }
        }
    }
    out.time = field.time + dt;
    return out;
}

namespace detail {

inline void advect(Field& f, double dt, const Grid& g, const Coefficients& c, const StepperConfig& cfg) {
    switch (cfg.advection) {
    case AdvectionScheme::explicit_upwind:
        advect_explicit(f, dt, g, c);
        break;
    case AdvectionScheme::implicit_upwind:
        advect_implicit(f, dt, g, c);
        break;
    case AdvectionScheme::local_upwind:
        advect_local(f, dt, g, c);
        break;
    }
}

inline void diffuse_any(Field& f, double dt, const Grid& g, const ProblemSpec& spec, const StepperConfig& cfg) {
    if (!spec.porous()) {
        diffuse(f, dt, g, cfg.diffusion);
        return;
    }
    double done = 0.0;
    while (done < dt) {
        const double lim = max_stable_porous_dt(f, g, spec.diffusion_exponent, cfg.cfl_fraction);
        const double h = std::min(dt - done, lim);
        if (!(h > 0.0)) throw NumericalError("porous sub-cycling stalled", f);
        const double t0 = f.time;
        f = step_porous_diffusion(f, h, g, spec, cfg.cfl_fraction);
        f.time = t0;
        done = (dt - done - h <= 1e-15 * dt) ? dt : done + h;
    }
}

inline void strang(Field& f, double dt, const Grid& g, const ProblemSpec& spec, const Coefficients& c,
                   const StepperConfig& cfg) {
    advect(f, 0.5 * dt, g, c, cfg);
    diffuse_any(f, dt, g, spec, cfg);
    advect(f, 0.5 * dt, g, c, cfg);
    if (cfg.positivity_clip)
        for (double& v : f.u) v = std::max(v, 0.0);
}

}  // namespace detail

/// One Strang step: transport dt/2, diffusion dt, transport dt/2.
inline Field step(const Field& field, double dt, const Grid& g, const ProblemSpec& spec,
                  const StepperConfig& cfg = {}) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    detail::check_finite(field, "step input");
    const auto c = make_coefficients(spec, g);
    if (cfg.advection == AdvectionScheme::explicit_upwind) {
        const double lim = max_stable_advection_dt(field, g, c, cfg.cfl_fraction, cfg.mass_floor);
        if (0.5 * dt > lim * (1.0 + 1e-12)) throw CflError(dt, 2.0 * lim);
    }
    Field out = field;
    detail::strang(out, dt, g, spec, c, cfg);
    out.time = field.time + dt;
    return out;
}

/// Discretizes an InitialDataSpec: x-profile at cell centers (radial in 2D),
/// a-profile at cell centers weighted by the overlap of the cell with
/// [a0, A0], normalized to the requested total mass.
inline Field make_initial_field(const ProblemSpec& spec, const Grid& g, const InitialDataSpec& init) {
    init.validate();
    if (init.A0 > g.a_max() * (1.0 + 1e-12))
        throw std::invalid_argument("a_max must be >= A0 of the initial datum");
    (void)spec;
    Field f(g);
    const std::size_t ns = g.n_space();
    std::vector<double> X(ns, 0.0);
    for (int k = 0; k < g.ny(); ++k)
        for (int i = 0; i < g.nx(); ++i) {
            const double r = g.dimension() == 2 ? std::hypot(g.x(i), g.y(k)) : g.x(i);
            X[static_cast<std::size_t>(k) * static_cast<std::size_t>(g.nx()) + static_cast<std::size_t>(i)] =
                init.x_profile(r);
        }
    for (int j = 0; j < g.na(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double lo = g.a_faces()[jj], hi = g.a_faces()[jj + 1];
        const double overlap = std::max(0.0, std::min(hi, init.A0) - std::max(lo, init.a0)) / (hi - lo);
        if (overlap <= 0.0) continue;
        const double c = std::clamp(g.a_centers()[jj], init.a0, init.A0);
        const double A = init.a_weight(c) * overlap;
        for (std::size_t s = 0; s < ns; ++s) f.u[jj * ns + s] = X[s] * A;
    }
    const double m = mass(f, g);
    if (!(m > 0.0)) throw std::invalid_argument("initial datum has zero mass on this grid");
    const double scale = init.total_mass / m;
    for (double& v : f.u) v *= scale;
    return f;
}

// ---------------------------------------------------------------------------
// Driver

struct RunOptions {
    double t_end = 1.0;
    StepperConfig stepper;
    DiagnosticsConfig diagnostics;
    double output_interval = 0.0;  ///< 0: output only at t_end
    int output_every = 0;          ///< > 0: output every this many steps instead
    bool stop_on_blowup = true;
};

struct RunResult {
    Field final;
    DiagnosticsSeries series;
    BlowupReport report;
    double initial_mass = 0.0;
    double initial_A0 = 0.0;
    std::size_t steps = 0;
};

using Observer = std::function<void(const Field&, const DiagnosticsSample&)>;

/// Theoretical blow-up bound attached to reports: T_b on the whole line,
/// T(alpha) for localized drifts. Returns (value, name) when applicable.
inline std::optional<std::pair<double, std::string>> theory_bound(const ProblemSpec& spec, const Grid& g,
                                                                  const Field& initial, double m) {
    const double gamma = spec.drift.gamma;
    if (spec.drift.sign != DriftSign::deceleration || gamma >= 1.0) return std::nullopt;
    const double M = mass(initial, g) + initial.boundary_mass;
    if (!(M > 0.0)) return std::nullopt;
    if (spec.localization.kind == LocalizationKind::whole_line) {
        const auto marg = a_marginal_mass(initial, g);
        std::vector<double> dens(marg.size());
        for (std::size_t j = 0; j < marg.size(); ++j) dens[j] = marg[j] / g.a_widths()[j];
        return std::make_pair(blowup_time_Tb(g.a_centers(), g.a_widths(), dens, gamma), std::string("T_b"));
    }
    const auto sb = support_bounds(initial, g, 1e-12 * M);
    const double A0 = sb.a_max;
    const double y0 = virial_y(initial, g, m);
    const double theta = (1.0 - gamma) / m;
    const bool two_d = g.dimension() == 2;
    const double C1 = (two_d ? 8.0 : 12.0) * std::pow(A0, 1.0 - m) * M;
    const double C2 = (two_d ? m : 0.5 * m) * std::pow(M, -(1.0 - gamma) / m);
    if (!(y0 > 0.0)) return std::nullopt;
    const auto b = gronwall_T_alpha(C1, C2, theta, y0);
    if (!b.T_alpha) return std::nullopt;
    return std::make_pair(*b.T_alpha, std::string("T_alpha"));
}

inline RunResult run(const ProblemSpec& spec, const Grid& g, const Field& initial, const RunOptions& opt,
                     const Observer& observer = {}) {
    spec.validate();
    opt.stepper.validate();
    if (!(opt.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (initial.u.size() != g.size()) throw std::invalid_argument("initial field does not match grid");
    detail::check_finite(initial, "initial datum");

    const auto coeff = make_coefficients(spec, g);
    DiagnosticsContext ctx(spec, g, opt.diagnostics);
    RunResult res;
    res.final = initial;
    Field& f = res.final;
    const double M = mass(f, g) + f.boundary_mass;
    res.initial_mass = M;
    res.initial_A0 = support_bounds(f, g, opt.diagnostics.support_threshold * M).a_max;
    res.series.p = ctx.p();
    res.series.m = ctx.m();
    res.series.gamma = spec.drift.gamma;

    auto emit = [&](const Field& fld) {
        auto s = ctx.sample(fld, M);
        res.series.samples.push_back(s);
        if (observer) observer(fld, s);
    };
    emit(f);
    res.series.trace.push_back(ctx.trace(f, 0.0));
    const double y0 = res.series.trace.front().virial_y, l0 = res.series.trace.front().lp;

    const double interval = opt.output_interval > 0.0 ? opt.output_interval : opt.t_end;
    std::size_t out_k = 1;
    auto next_output = [&] {
        if (opt.output_every > 0) return opt.t_end;
        return std::min(opt.t_end, interval * static_cast<double>(out_k));
    };

    double nominal = opt.stepper.dt;
    if (opt.stepper.dt_from_cfl) {
        nominal = 2.0 * max_stable_advection_dt(f, g, coeff, opt.stepper.cfl_fraction, opt.stepper.mass_floor);
        if (!std::isfinite(nominal)) nominal = opt.stepper.dt;
    }
    double y_ref = y0;
    bool collapse = false, fired = false;
    const double eps_t = 1e-12 * opt.t_end;

    while (f.time < opt.t_end - eps_t) {
        double natural = nominal;
        if (opt.stepper.advection == AdvectionScheme::explicit_upwind)
            natural = std::min(natural, 2.0 * max_stable_advection_dt(f, g, coeff, opt.stepper.cfl_fraction,
                                                                       opt.stepper.mass_floor));
        if (natural < opt.stepper.dt_min) {
            collapse = true;
            break;
        }
        const double t_out = next_output();
        double dt = std::min(natural, t_out - f.time);
        const bool at_t_out = dt >= t_out - f.time - eps_t;
        const double t_new = at_t_out ? t_out : f.time + dt;
        const bool hits_output =
            at_t_out || (opt.output_every > 0 && (res.steps + 1) % static_cast<std::size_t>(opt.output_every) == 0);
        detail::strang(f, dt, g, spec, coeff, opt.stepper);
        f.time = t_new;
        ++res.steps;

        const auto tp = ctx.trace(f, dt);
        if (!std::isfinite(tp.total_mass) || !std::isfinite(tp.lp) || !std::isfinite(tp.virial_y))
            throw NumericalError("non-finite field at t = " + std::to_string(f.time), f);
        res.series.trace.push_back(tp);

        if (hits_output) {
            emit(f);
            ++out_k;
            // y doubled since the previous output
            if (opt.stepper.adaptive && y_ref > 0.0 && tp.virial_y >= 2.0 * y_ref) nominal *= 0.5;
            y_ref = tp.virial_y;
        }
        if (!fired && y0 > 0.0 && l0 > 0.0 && tp.virial_y >= opt.diagnostics.virial_factor * y0 &&
            tp.lp >= opt.diagnostics.lp_factor * l0) {
            fired = true;
            if (opt.stop_on_blowup) break;
        }
    }
    if (res.series.samples.back().t != f.time) emit(f);

    const double gamma = spec.drift.gamma;
    const double theta = gamma < 1.0 ? (1.0 - gamma) / ctx.m() : 1.0;
    res.report = detect_blowup(res.series, {opt.diagnostics.virial_factor, opt.diagnostics.lp_factor}, theta,
                               collapse);
    if (const auto tb = theory_bound(spec, g, initial, ctx.m())) {
        res.report.theory_bound = tb->first;
        res.report.theory_name = tb->second;
    }
    if (spec.drift.sign == DriftSign::deceleration && gamma < 1.0 &&
        spec.localization.kind == LocalizationKind::whole_line) {
        if (const auto mct = mean_concentration_time(res.series.trace)) {
            res.report.t_star_estimate = *mct;
            res.report.t_star_method = "mean_concentration_time";
        }
    }
    if (res.report.t_star_estimate && res.report.theory_bound)
        res.report.comparison = *res.report.t_star_estimate / *res.report.theory_bound;
    return res;
}

inline RunResult run(const ProblemSpec& spec, const Grid& g, const InitialDataSpec& init, const RunOptions& opt,
                     const Observer& observer = {}) {
    return run(spec, g, make_initial_field(spec, g, init), opt, observer);
}

}  // namespace driftlab
