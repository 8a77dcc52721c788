/// @file diagnostics.hpp
/// @brief Functionals of a Field, time series, blow-up detection and
///        L^p envelope checks
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "grid.hpp"
#include "model.hpp"

namespace driftlab {

/// psi sampled per spatial cell: exact cell average for 1D interval and bump
/// localizations, cell-center value otherwise.
inline std::vector<double> psi_on_grid(const Grid& g, const LocalizationSpec& loc) {
    std::vector<double> psi(g.n_space(), 1.0);
    if (g.dimension() == 1) {
        for (int i = 0; i < g.nx(); ++i) {
            const double x = g.x(i);
            psi[static_cast<std::size_t>(i)] =
                (loc.kind == LocalizationKind::whole_line)
                    ? 1.0
                    : loc.integral(x - 0.5 * g.dx(), x + 0.5 * g.dx()) / g.dx();
        }
        return psi;
    }
    for (int k = 0; k < g.ny(); ++k)
        for (int i = 0; i < g.nx(); ++i)
            psi[static_cast<std::size_t>(k) * static_cast<std::size_t>(g.nx()) +
                static_cast<std::size_t>(i)] = loc(std::hypot(g.x(i), g.y(k)));
    return psi;
}

/// Default virial exponent: midpoint of the admissible window (0, 1 - gamma).
inline double default_virial_m(double gamma) { return gamma < 1.0 ? 0.5 * (1.0 - gamma) : 0.5; }

// ---------------------------------------------------------------------------
// Functionals

inline double mass(const Field& f, const Grid& g) {
    const std::size_t ns = g.n_space();
    double total = 0.0;
    for (int j = 0; j < g.na(); ++j) {
        double s = 0.0;
        const double* row = f.u.data() + static_cast<std::size_t>(j) * ns;
        for (std::size_t c = 0; c < ns; ++c) s += row[c];
        total += s * g.a_widths()[static_cast<std::size_t>(j)];
    }
    return total * g.cell_area();
}

/// Mass per a-cell (summed over space).
inline std::vector<double> a_marginal_mass(const Field& f, const Grid& g) {
    const std::size_t ns = g.n_space();
    std::vector<double> out(static_cast<std::size_t>(g.na()), 0.0);
    for (int j = 0; j < g.na(); ++j) {
        double s = 0.0;
        const double* row = f.u.data() + static_cast<std::size_t>(j) * ns;
        for (std::size_t c = 0; c < ns; ++c) s += row[c];
        out[static_cast<std::size_t>(j)] = s * g.a_widths()[static_cast<std::size_t>(j)] * g.cell_area();
    }
    return out;
}

/// Spatial marginal density int u da (1D: per x cell; 2D: per (x,y) cell).
inline std::vector<double> x_marginal(const Field& f, const Grid& g) {
    const std::size_t ns = g.n_space();
    std::vector<double> out(ns, 0.0);
    for (int j = 0; j < g.na(); ++j) {
        const double w = g.a_widths()[static_cast<std::size_t>(j)];
        const double* row = f.u.data() + static_cast<std::size_t>(j) * ns;
        for (std::size_t c = 0; c < ns; ++c) out[c] += w * row[c];
    }
    return out;
}

/// (sum u^p dx da)^{1/p}
inline double lp_norm(const Field& f, const Grid& g, double p) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
    const std::size_t ns = g.n_space();
    double total = 0.0;
    for (int j = 0; j < g.na(); ++j) {
        double s = 0.0;
        const double* row = f.u.data() + static_cast<std::size_t>(j) * ns;
        if (p == 1.0)
            for (std::size_t c = 0; c < ns; ++c) s += std::abs(row[c]);
        else if (p == 2.0)
            for (std::size_t c = 0; c < ns; ++c) s += row[c] * row[c];
        else
            for (std::size_t c = 0; c < ns; ++c) s += std::pow(std::abs(row[c]), p);
        total += s * g.a_widths()[static_cast<std::size_t>(j)];
    }
    return std::pow(total * g.cell_area(), 1.0 / p);
}

/// sum a_j^e u dx da, cell-center a_j.
inline double moment_a(const Field& f, const Grid& g, double exponent) {
    const auto marg = a_marginal_mass(f, g);
    double total = 0.0;
    for (std::size_t j = 0; j < marg.size(); ++j)
        total += (exponent == 0.0 ? 1.0 : std::pow(g.a_centers()[j], exponent)) * marg[j];
    return total;
}

inline double half_moment_psi(const Field& f, const Grid& g, const std::vector<double>& psi) {
    const std::size_t ns = g.n_space();
    double total = 0.0;
    for (int j = 0; j < g.na(); ++j) {
        double s = 0.0;
        const double* row = f.u.data() + static_cast<std::size_t>(j) * ns;
        for (std::size_t c = 0; c < ns; ++c) s += psi[c] * row[c];
        const auto jj = static_cast<std::size_t>(j);
        total += s * std::sqrt(g.a_centers()[jj]) * g.a_widths()[jj];
    }
    return total * g.cell_area();
}

inline double half_moment_psi(const Field& f, const Grid& g, const ProblemSpec& spec) {
    return half_moment_psi(f, g, psi_on_grid(g, spec.localization));
}

/// Spatial weight of the virial functional: (1 - |x|^2)^2 on the unit ball.
inline std::vector<double> virial_weight(const Grid& g) {
    std::vector<double> w(g.n_space(), 0.0);
    for (int k = 0; k < g.ny(); ++k)
        for (int i = 0; i < g.nx(); ++i) {
            const double x = g.x(i);
            const double r2 = g.dimension() == 2 ? x * x + g.y(k) * g.y(k) : x * x;
            const double v = r2 <= 1.0 ? (1.0 - r2) * (1.0 - r2) : 0.0;
            w[static_cast<std::size_t>(k) * static_cast<std::size_t>(g.nx()) + static_cast<std::size_t>(i)] = v;
        }
    return w;
}

inline double virial_y(const Field& f, const Grid& g, double m, const std::vector<double>& weight) {
    if (!(m > 0.0 && m < 1.0)) throw std::domain_error("virial_y: m must lie in (0,1)");
    const std::size_t ns = g.n_space();
    double total = 0.0;
    for (int j = 0; j < g.na(); ++j) {
        double s = 0.0;
        const double* row = f.u.data() + static_cast<std::size_t>(j) * ns;
        for (std::size_t c = 0; c < ns; ++c) s += weight[c] * row[c];
        const auto jj = static_cast<std::size_t>(j);
        total += s * std::pow(g.a_centers()[jj], -m) * g.a_widths()[jj];
    }
    return total * g.cell_area();
}

inline double virial_y(const Field& f, const Grid& g, double m) {
    return virial_y(f, g, m, virial_weight(g));
}

struct SupportBounds {
    double a_min = 0.0;
    double a_max = 0.0;
    bool empty = true;
};

/// Smallest lower face / largest upper face such that the mass outside is
/// below `threshold` on each side. Boundary mass counts as mass at a = 0.
/// Zero fields return the full range with empty = true.
inline SupportBounds support_bounds(const Field& f, const Grid& g, double threshold) {
    const auto marg = a_marginal_mass(f, g);
    SupportBounds b{0.0, g.a_max(), true};
    double total = f.boundary_mass;
    for (double m : marg) total += m;
    if (!(total > 0.0)) return b;
    b.empty = false;
    double below = f.boundary_mass;
    if (below >= threshold) {
        b.a_min = 0.0;
    } else {
        for (std::size_t j = 0; j < marg.size(); ++j) {
            below += marg[j];
            if (below >= threshold) {
                b.a_min = g.a_faces()[j];
                break;
            }
        }
    }
    double above = 0.0;
    for (std::size_t j = marg.size(); j-- > 0;) {
        above += marg[j];
        if (above >= threshold) {
            b.a_max = g.a_faces()[j + 1];
            return b;
        }
    }
    b.a_max = 0.0;
    return b;
}

/// max a_j^gamma u
inline double sup_weighted(const Field& f, const Grid& g, double gamma) {
    const std::size_t ns = g.n_space();
    double best = 0.0;
    for (int j = 0; j < g.na(); ++j) {
        const double w = gamma == 0.0 ? 1.0 : std::pow(g.a_centers()[static_cast<std::size_t>(j)], gamma);
        const double* row = f.u.data() + static_cast<std::size_t>(j) * ns;
        double s = 0.0;
        for (std::size_t c = 0; c < ns; ++c) s = std::max(s, row[c]);
        best = std::max(best, w * s);
    }
    return best;
}

/// Fraction of the total mass sitting at a = 0 or in cells whose upper face
/// is <= a_conc (the first cell always counts).
inline double concentrated_fraction(const Field& f, const Grid& g, double a_conc) {
    const auto marg = a_marginal_mass(f, g);
    double total = f.boundary_mass, conc = f.boundary_mass;
    for (std::size_t j = 0; j < marg.size(); ++j) {
        total += marg[j];
        if (j == 0 || g.a_faces()[j + 1] <= a_conc) conc += marg[j];
    }
    return total > 0.0 ? conc / total : 0.0;
}

// ---------------------------------------------------------------------------
// Series

struct DiagnosticsConfig {
    double p = 2.0;
    double m = std::numeric_limits<double>::quiet_NaN();  ///< NaN: default_virial_m(gamma)
    double virial_factor = 1e3;
    double lp_factor = 1e2;
    double support_threshold = 1e-12;  ///< relative to the initial mass
    double concentration_level = 1e-6;  ///< a_conc relative to a_max

    double virial_m(double gamma) const { return std::isnan(m) ? default_virial_m(gamma) : m; }
};

struct DiagnosticsSample {
    double t = 0.0;
    double mass = 0.0;
    double boundary_mass = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double lp = 0.0;
    double moment_1mg = 0.0;
    double half_moment = 0.0;
    double virial_y = 0.0;
    double support_min = 0.0;
    double support_max = 0.0;
    double sup_agamma = 0.0;
};

/// Cheap per-step record used by the detector and the monotonicity checks.
struct TracePoint {
    double t = 0.0;
    double dt = 0.0;
    double total_mass = 0.0;  ///< mass + boundary mass
    double virial_y = 0.0;
    double lp = 0.0;
    double sup_agamma = 0.0;
    double sup_agamma_interior = 0.0;  ///< over a-cells above the first one
    double concentrated = 0.0;
    double bottom_mass = 0.0;  ///< mass in the first a-cell plus boundary mass
};

struct DiagnosticsSeries {
    double p = 2.0;
    double m = 0.5;
    double gamma = 0.5;
    std::vector<DiagnosticsSample> samples;
    std::vector<TracePoint> trace;
};

/// Precomputed weights so that per-step diagnostics are single passes.
class DiagnosticsContext {
public:
    DiagnosticsContext(const ProblemSpec& spec, const Grid& grid, const DiagnosticsConfig& cfg)
        : spec_(spec), grid_(grid), cfg_(cfg), psi_(psi_on_grid(grid, spec.localization)),
          weight_(virial_weight(grid)), m_(cfg.virial_m(spec.drift.gamma)) {
        if (!(m_ > 0.0 && m_ < 1.0)) throw std::domain_error("virial exponent m must lie in (0,1)");
        if (!(cfg.p >= 1.0)) throw std::domain_error("p must be >= 1");
    }

    double m() const { return m_; }
    double p() const { return cfg_.p; }
    const std::vector<double>& psi() const { return psi_; }
    const DiagnosticsConfig& config() const { return cfg_; }

    DiagnosticsSample sample(const Field& f, double reference_mass) const {
        DiagnosticsSample s;
        const double gamma = spec_.drift.gamma;
        s.t = f.time;
        s.mass = mass(f, grid_);
        s.boundary_mass = f.boundary_mass;
        s.l1 = lp_norm(f, grid_, 1.0);
        s.l2 = lp_norm(f, grid_, 2.0);
        s.lp = lp_norm(f, grid_, cfg_.p);
        s.moment_1mg = moment_a(f, grid_, 1.0 - gamma);
        s.half_moment = half_moment_psi(f, grid_, psi_);
        s.virial_y = virial_y(f, grid_, m_, weight_);
        const auto sb = support_bounds(f, grid_, cfg_.support_threshold * reference_mass);
        s.support_min = sb.a_min;
        s.support_max = sb.a_max;
        s.sup_agamma = sup_weighted(f, grid_, gamma);
        return s;
    }

    TracePoint trace(const Field& f, double dt) const {
        TracePoint tp;
        tp.t = f.time;
        tp.dt = dt;
        const double gamma = spec_.drift.gamma;
        const std::size_t ns = grid_.n_space();
        const double area = grid_.cell_area();
        const double a_conc = cfg_.concentration_level * grid_.a_max();
        double total = 0.0, y = 0.0, lp = 0.0, sup = 0.0, sup_in = 0.0, conc = f.boundary_mass, bottom = 0.0;
        for (int j = 0; j < grid_.na(); ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const double* row = f.u.data() + jj * ns;
            double s = 0.0, sw = 0.0, sp = 0.0, mx = 0.0;
            for (std::size_t c = 0; c < ns; ++c) {
                const double v = row[c];
                s += v;
                sw += weight_[c] * v;
                sp += cfg_.p == 2.0 ? v * v : std::pow(std::abs(v), cfg_.p);
                mx = std::max(mx, v);
            }
            const double w = grid_.a_widths()[jj], a = grid_.a_centers()[jj];
            total += s * w;
            y += sw * std::pow(a, -m_) * w;
            lp += sp * w;
            const double wmx = (gamma == 0.0 ? 1.0 : std::pow(a, gamma)) * mx;
            sup = std::max(sup, wmx);
            if (j > 0) sup_in = std::max(sup_in, wmx);
            if (j == 0 || grid_.a_faces()[jj + 1] <= a_conc) conc += s * w * area;
            if (j == 0) bottom = s * w * area;
        }
        total *= area;
        tp.total_mass = total + f.boundary_mass;
        tp.virial_y = y * area;
        tp.lp = std::pow(lp * area, 1.0 / cfg_.p);
        tp.sup_agamma = sup;
        tp.sup_agamma_interior = sup_in;
        tp.concentrated = tp.total_mass > 0.0 ? conc / tp.total_mass : 0.0;
        tp.bottom_mass = bottom + f.boundary_mass;
        return tp;
    }

private:
    ProblemSpec spec_;
    const Grid& grid_;
    DiagnosticsConfig cfg_;
    std::vector<double> psi_;
    std::vector<double> weight_;
    double m_;
};

// ---------------------------------------------------------------------------
// Blow-up detection

enum class Verdict { global_up_to_horizon, blow_up };

inline const char* to_string(Verdict v) {
    return v == Verdict::blow_up ? "blow_up" : "global_up_to_horizon";
}

struct BlowupReport {
    Verdict verdict = Verdict::global_up_to_horizon;
    std::optional<double> t_detect;
    std::optional<double> t_star_estimate;
    std::string t_star_method;
    std::optional<double> theory_bound;
    std::string theory_name;  ///< "T_b" or "T_alpha"
    std::optional<double> comparison;  ///< t_star_estimate / theory_bound
    bool virial_fired = false;
    bool lp_fired = false;
    bool dt_collapse = false;
    double virial_growth = 0.0;
    double lp_growth = 0.0;
    double horizon = 0.0;
};

struct PowerFit {
    double t_star = std::numeric_limits<double>::quiet_NaN();
    std::size_t points = 0;
};

/// Fits y ~ c (T* - t)^{-1/theta} through the samples of the last decade of
/// growth (y >= y_last / 10) by linear regression of y^{-theta} on t.
inline PowerFit fit_blowup_time(const std::vector<double>& t, const std::vector<double>& y, double theta) {
    if (t.size() != y.size()) throw std::invalid_argument("fit_blowup_time: size mismatch");
    if (!(theta > 0.0)) throw std::invalid_argument("fit_blowup_time: theta must be positive");
    PowerFit fit;
    if (t.size() < 3) return fit;
    const double y_last = y.back();
    if (!(y_last > 0.0)) return fit;
    std::size_t start = t.size() - 1;
    while (start > 0 && y[start - 1] >= 0.1 * y_last && y[start - 1] <= y[start]) --start;
    const std::size_t n = t.size() - start;
    if (n < 3) return fit;
    double st = 0, sz = 0, stt = 0, stz = 0;
    for (std::size_t k = start; k < t.size(); ++k) {
        const double z = std::pow(y[k], -theta);
        st += t[k];
        sz += z;
        stt += t[k] * t[k];
        stz += t[k] * z;
    }
    const double dn = static_cast<double>(n);
    const double denom = dn * stt - st * st;
    if (denom == 0.0) return fit;
    const double slope = (dn * stz - st * sz) / denom;
    const double intercept = (sz - slope * st) / dn;
    if (!(slope < 0.0)) return fit;
    fit.t_star = -intercept / slope;
    fit.points = n;
    return fit;
}

/// Mean time for a unit of mass to reach the concentration region:
/// int_0^T (1 - F(t)) dt, trapezoidal over the trace.
inline std::optional<double> mean_concentration_time(const std::vector<TracePoint>& trace,
                                                     double completion = 0.99) {
    if (trace.size() < 2 || trace.back().concentrated < completion) return std::nullopt;
    double s = 0.0;
    for (std::size_t k = 1; k < trace.size(); ++k)
        s += 0.5 * ((1.0 - trace[k - 1].concentrated) + (1.0 - trace[k].concentrated)) *
             (trace[k].t - trace[k - 1].t);
    return s;
}

struct DetectorConfig {
    double virial_factor = 1e3;
    double lp_factor = 1e2;
};

/// Scans the trace for the first time both thresholds hold. dt collapse
/// (flagged by the stepper) also yields a blow-up verdict.
inline BlowupReport detect_blowup(const DiagnosticsSeries& series, const DetectorConfig& cfg,
                                  double theta, bool dt_collapse = false) {
    BlowupReport r;
    std::vector<double> ts, ys;
    if (!series.trace.empty()) {
        for (const auto& tp : series.trace) {
            ts.push_back(tp.t);
            ys.push_back(tp.virial_y);
        }
    } else {
        for (const auto& s : series.samples) {
            ts.push_back(s.t);
            ys.push_back(s.virial_y);
        }
    }
    if (ts.empty()) throw std::invalid_argument("detect_blowup: empty series");
    std::vector<double> lps;
    if (!series.trace.empty())
        for (const auto& tp : series.trace) lps.push_back(tp.lp);
    else
        for (const auto& s : series.samples) lps.push_back(s.lp);

    r.horizon = ts.back();
    const double y0 = ys.front(), l0 = lps.front();
    std::size_t fire = ts.size();
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const bool vy = y0 > 0.0 && ys[k] >= cfg.virial_factor * y0;
        const bool vl = l0 > 0.0 && lps[k] >= cfg.lp_factor * l0;
        r.virial_fired = r.virial_fired || vy;
        r.lp_fired = r.lp_fired || vl;
        if (y0 > 0.0) r.virial_growth = std::max(r.virial_growth, ys[k] / y0);
        if (l0 > 0.0) r.lp_growth = std::max(r.lp_growth, lps[k] / l0);
        if (vy && vl && fire == ts.size()) fire = k;
    }
    r.dt_collapse = dt_collapse;
    if (fire < ts.size()) {
        r.verdict = Verdict::blow_up;
        r.t_detect = ts[fire];
    } else if (dt_collapse) {
        r.verdict = Verdict::blow_up;
        r.t_detect = ts.back();
    }
    if (r.verdict == Verdict::blow_up) {
        const std::size_t end = fire < ts.size() ? fire + 1 : ts.size();
        std::vector<double> tt(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(end));
        std::vector<double> yy(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(end));
        const auto fit = fit_blowup_time(tt, yy, theta);
        if (std::isfinite(fit.t_star)) {
            r.t_star_estimate = fit.t_star;
            r.t_star_method = "virial_fit";
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Envelopes

enum class EnvelopeKind {
    acceleration,                ///< ||u(t)||_p^p <= ||u0||_p^p
    whole_line_subcritical,      ///< e^{gamma (1-p) A0^{gamma-1} t} as displayed
    whole_line_subcritical_growth,  ///< e^{gamma (p-1) A0^{gamma-1} t}
    interval_subcritical,        ///< e^{gamma (p-1) A0^{gamma-1} t / (2 delta)}
    uniform_in_delta             ///< e^{gamma^2 (p-1) t}, gamma > 3/2
};

struct EnvelopeResult {
    bool pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();  ///< min (bound - value) / bound
    double worst_time = 0.0;
};

/// Exponential rate of the envelope on ||u||_p^p.
inline double envelope_rate(EnvelopeKind kind, const ProblemSpec& spec, double p, double A0) {
    const double g = spec.drift.gamma;
    const auto& loc = spec.localization;
    const bool decel = spec.drift.sign == DriftSign::deceleration;
    switch (kind) {
    case EnvelopeKind::acceleration:
        if (decel) throw std::invalid_argument("acceleration envelope requires an acceleration drift");
        return 0.0;
    case EnvelopeKind::whole_line_subcritical:
    case EnvelopeKind::whole_line_subcritical_growth:
        if (!decel || g < 1.0 || loc.kind != LocalizationKind::whole_line)
            throw std::invalid_argument("whole-line subcritical envelope requires whole_line deceleration with gamma >= 1");
        return (kind == EnvelopeKind::whole_line_subcritical ? g * (1.0 - p) : g * (p - 1.0)) *
               std::pow(A0, g - 1.0);
    case EnvelopeKind::interval_subcritical:
        if (!decel || g < 1.0 || loc.kind != LocalizationKind::interval)
            throw std::invalid_argument("interval envelope requires interval deceleration with gamma >= 1");
        return g * (p - 1.0) * std::pow(A0, g - 1.0) / (2.0 * loc.delta);
    case EnvelopeKind::uniform_in_delta:
        if (!decel || !(g > 1.5) || loc.kind != LocalizationKind::interval)
            throw std::invalid_argument("uniform-in-delta envelope requires interval deceleration with gamma > 3/2");
        return g * g * (p - 1.0);
    }
    return 0.0;
}

/// Checks ||u(t)||_p^p <= (1 + slack) e^{rate t} ||u0||_p^p along (t, ||u||_p).
inline EnvelopeResult check_envelope(const std::vector<double>& t, const std::vector<double>& lp, double p,
                                     double rate, double slack = 0.05) {
    EnvelopeResult r;
    if (t.empty()) return r;
    const double base = std::pow(lp.front(), p);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double bound = (1.0 + slack) * std::exp(rate * (t[k] - t.front())) * base;
        const double value = std::pow(lp[k], p);
        const double margin = bound > 0.0 ? (bound - value) / bound : (value > 0.0 ? -1.0 : 0.0);
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            r.worst_time = t[k];
        }
    }
    r.pass = r.worst_margin >= 0.0;
    return r;
}

inline EnvelopeResult check_envelopes(const DiagnosticsSeries& series, const ProblemSpec& spec,
                                      EnvelopeKind kind, double A0, double slack = 0.05) {
    const double rate = envelope_rate(kind, spec, series.p, A0);
    std::vector<double> t, lp;
    if (!series.trace.empty()) {
        for (const auto& tp : series.trace) {
            t.push_back(tp.t);
            lp.push_back(tp.lp);
        }
    } else {
        for (const auto& s : series.samples) {
            t.push_back(s.t);
            lp.push_back(s.lp);
        }
    }
    return check_envelope(t, lp, series.p, rate, slack);
}

/// Largest relative one-step increase of sup a^gamma u over trace[begin, end).
/// With interior = true the first a-cell, which holds mass concentrated at
/// a = 0, is left out.
inline double max_relative_increase(const std::vector<TracePoint>& trace, std::size_t begin, std::size_t end,
                                    bool interior = false) {
    double worst = 0.0;
    for (std::size_t k = begin + 1; k < end && k < trace.size(); ++k) {
        const double prev = interior ? trace[k - 1].sup_agamma_interior : trace[k - 1].sup_agamma;
        const double cur = interior ? trace[k].sup_agamma_interior : trace[k].sup_agamma;
        if (prev > 0.0) worst = std::max(worst, (cur - prev) / prev);
    }
    return worst;
}

}  // namespace driftlab
