/// @file particles.hpp
/// @brief Euler-Maruyama particle ensemble for
///
///   dX = sqrt(2 A) dW,   dA = (-psi(X) f(A) + lambda g(A)) dt
///
/// with a = 0 absorbing (trapped particles).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "diagnostics.hpp"
#include "field.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace driftlab {

struct Particle {
    double x = 0.0;
    double y = 0.0;  ///< second coordinate, 2D only
    double a = 0.0;
    bool trapped = false;
    std::optional<double> trap_time;
};

struct Ensemble {
    std::vector<Particle> particles;
    std::uint64_t seed = 0;
    double time = 0.0;
};

/// psi at a particle position (radial for ball_2d).
inline double psi_at(const Particle& p, const ProblemSpec& spec) {
    if (spec.dimension == 2) return spec.localization(std::hypot(p.x, p.y));
    return spec.localization(p.x);
}

inline double reflect(double x, double L) {
    const double period = 4.0 * L;
    double s = std::fmod(x + L, period);
    if (s < 0.0) s += period;
    return s <= 2.0 * L ? s - L : 3.0 * L - s;
}

/// Deterministic a-drift -psi f(a) + lambda g(a).
inline double a_drift(double a, double psi, const ProblemSpec& spec) {
    return -psi * drift_f(a, spec.drift) + spec.logistic.lambda * logistic_g(a, spec.logistic);
}

/// One Euler-Maruyama step. `z` holds one standard normal per spatial
/// dimension. psi is taken at the pre-step position. Positions reflect at
/// +-L; a is clamped at 0 and the particle is trapped there.
inline Particle em_step(Particle p, double dt, const ProblemSpec& spec, double z0, double z1 = 0.0,
                        double t = 0.0) {
    if (!(dt > 0.0)) throw std::invalid_argument("em_step: dt must be positive");
    if (p.trapped) return p;
    const double psi = psi_at(p, spec);
    const double s = std::sqrt(2.0 * p.a * dt);
    const double L = spec.half_width;
    p.x = reflect(p.x + s * z0, L);
    if (spec.dimension == 2) p.y = reflect(p.y + s * z1, L);
    p.a = std::max(p.a + a_drift(p.a, psi, spec) * dt, 0.0);
    if (p.a == 0.0) {
        p.trapped = true;
        p.trap_time = t + dt;
    }
    return p;
}

/// Full step of length dt: one position increment, and a-substeps halved
/// while a < 10 h^{1/(1-gamma)} in the supercritical deceleration regime.
inline Particle advance_particle(Particle p, double dt, const ProblemSpec& spec, double z0, double z1, double t,
                                 int max_halvings = 30) {
    if (p.trapped) return p;
    const double psi = psi_at(p, spec);
    const double a_start = p.a;
    double h = dt;
    const double g = spec.drift.gamma;
    const bool refine = spec.drift.sign == DriftSign::deceleration && g < 1.0;
    const double e = refine ? 1.0 / (1.0 - g) : 1.0;
    int halvings = 0;
    double elapsed = 0.0;
    while (elapsed < dt * (1.0 - 1e-12)) {
        while (refine && halvings < max_halvings && p.a < 10.0 * std::pow(h, e)) {
            h *= 0.5;
            ++halvings;
        }
        const double step = std::min(h, dt - elapsed);
        p.a = std::max(p.a + a_drift(p.a, psi, spec) * step, 0.0);
        elapsed += step;
        if (p.a == 0.0) {
            p.trapped = true;
            p.trap_time = t + elapsed;
            break;
        }
    }
    const double s = std::sqrt(2.0 * a_start * dt);
    const double L = spec.half_width;
    p.x = reflect(p.x + s * z0, L);
    if (spec.dimension == 2) p.y = reflect(p.y + s * z1, L);
    return p;
}

struct TrajectorySample {
    double t = 0.0;
    double trapped_fraction = 0.0;
    double mean_a = 0.0;
    double var_x = 0.0;
    double mean_x = 0.0;
};

struct EnsembleResult {
    Ensemble ensemble;
    std::vector<TrajectorySample> summary;
};

inline TrajectorySample summarize(const Ensemble& e) {
    TrajectorySample s;
    s.t = e.time;
    const double n = static_cast<double>(e.particles.size());
    if (e.particles.empty()) return s;
    double trapped = 0.0, sa = 0.0, sx = 0.0;
    for (const auto& p : e.particles) {
        trapped += p.trapped ? 1.0 : 0.0;
        sa += p.a;
        sx += p.x;
    }
    s.trapped_fraction = trapped / n;
    s.mean_a = sa / n;
    s.mean_x = sx / n;
    double vx = 0.0;
    for (const auto& p : e.particles) vx += (p.x - s.mean_x) * (p.x - s.mean_x);
    s.var_x = vx / n;
    return s;
}

/// Noise counter layout: (particle index, step index); step indices below
/// 2^62 are reserved for time steps, initial sampling uses the top range.
inline constexpr std::uint64_t kSamplingStream = 1ULL << 62;

/// Draws n particles from the cell-averaged density of `f` (cell chosen by
/// mass, uniform inside the cell).
inline Ensemble sample_from_field(const Field& f, const Grid& g, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("ensemble size must be positive");
    const std::size_t ns = g.n_space();
    std::vector<double> cdf(f.u.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(g.na()); ++j)
        for (std::size_t s = 0; s < ns; ++s) {
            acc += f.u[j * ns + s] * g.a_widths()[j];
            cdf[j * ns + s] = acc;
        }
    if (!(acc > 0.0)) throw std::invalid_argument("cannot sample from a zero field");
    Philox4x32 gen(seed);
    Ensemble e;
    e.seed = seed;
    e.particles.resize(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        const auto i = static_cast<std::uint64_t>(ii);
        const auto u = uniform_pair(gen, i, kSamplingStream);
        const auto v = uniform_pair(gen, i, kSamplingStream + 1);
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u[0] * acc);
        const std::size_t id = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        const std::size_t j = id / ns, s = id % ns;
        Particle p;
        const int ix = static_cast<int>(s % static_cast<std::size_t>(g.nx()));
        const int iy = static_cast<int>(s / static_cast<std::size_t>(g.nx()));
        p.x = g.x(ix) + (u[1] - 0.5) * g.dx();
        if (g.dimension() == 2) p.y = g.y(iy) + (v[1] - 0.5) * g.dy();
        p.a = g.a_faces()[j] + v[0] * g.a_widths()[j];
        e.particles[static_cast<std::size_t>(ii)] = p;
    }
    return e;
}

/// Evolves every particle to t_end with step dt. Summaries are recorded at
/// t = 0 and every `output_interval` (or only at t_end when 0).
inline EnsembleResult simulate_ensemble(Ensemble e, const ProblemSpec& spec, double dt, double t_end,
                                        double output_interval = 0.0) {
    if (e.particles.empty()) throw std::invalid_argument("ensemble must contain at least one particle");
    if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("dt and t_end must be positive");
    const Philox4x32 gen(e.seed);
    EnsembleResult res;
    res.summary.push_back(summarize(e));
    const auto steps = static_cast<std::uint64_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
    const double interval = output_interval > 0.0 ? output_interval : t_end;
    double next_out = interval;
    const double t0 = e.time;
    for (std::uint64_t k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const double h = std::min(dt, t0 + t_end - t);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(e.particles.size()); ++ii) {
            auto& p = e.particles[static_cast<std::size_t>(ii)];
            if (p.trapped) continue;
            const auto z = normal_pair(gen, static_cast<std::uint64_t>(ii), k);
            p = advance_particle(p, h, spec, z[0], z[1], t);
        }
        e.time = t + h;
        if (e.time >= t0 + next_out - 1e-9 * dt || k + 1 == steps) {
            res.summary.push_back(summarize(e));
            next_out += interval;
        }
    }
    res.ensemble = std::move(e);
    return res;
}

/// Histogram estimator of u normalized to total mass M. Trapped particles
/// go to boundary_mass.
inline Field empirical_density(const Ensemble& e, const Grid& g, double total_mass) {
    Field f(g);
    f.time = e.time;
    if (e.particles.empty()) return f;
    const double w = total_mass / static_cast<double>(e.particles.size());
    for (const auto& p : e.particles) {
        if (p.trapped) {
            f.boundary_mass += w;
            continue;
        }
        const int i = g.x_cell(p.x), j = g.a_cell(p.a);
        const int k = g.dimension() == 2 ? g.y_cell(p.y) : 0;
        const std::size_t id = g.dimension() == 2 ? g.index(i, k, j) : g.index(i, j);
        f.u[id] += w / (g.cell_area() * g.a_widths()[static_cast<std::size_t>(j)]);
    }
    return f;
}

/// Spatial marginal density of the ensemble on the x-cells of `g` (1D),
/// trapped particles included.
inline std::vector<double> ensemble_x_marginal(const Ensemble& e, const Grid& g, double total_mass) {
    std::vector<double> out(static_cast<std::size_t>(g.nx()), 0.0);
    if (e.particles.empty()) return out;
    const double w = total_mass / static_cast<double>(e.particles.size()) / g.dx();
    for (const auto& p : e.particles) out[static_cast<std::size_t>(g.x_cell(p.x))] += w;
    return out;
}

/// sum |p_i - q_i| dx
inline double l1_distance(const std::vector<double>& p, const std::vector<double>& q, double dx) {
    if (p.size() != q.size()) throw std::invalid_argument("l1_distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return s * dx;
}

}  // namespace driftlab
