/// @file model.hpp
/// @brief Problem parameters, coefficient functions and closed-form oracles
///        for the structured drift-diffusion model
///
///   d_t u = a Lap_x u + d_a{ [psi(x) f(a) - lambda g(a)] u }
///
/// where a >= 0 is the structural variable (ingested lipid), which doubles as
/// the spatial diffusion coefficient.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftlab {

enum class DriftSign { deceleration, acceleration };

struct DriftSpec {
    DriftSign sign = DriftSign::deceleration;
    double gamma = 0.5;

    void validate() const {
        if (!(gamma >= 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument("gamma must be a finite nonnegative number");
    }
    bool supercritical() const { return sign == DriftSign::deceleration && gamma < 1.0; }
};

enum class LocalizationKind { whole_line, interval, smooth_bump, ball_2d };

/// Spatial localization psi of the lipid-rich region.
///
/// The smooth bump is stored as a table of samples on [-1,1] and evaluated by
/// linear interpolation; the table is normalized so that the integral of the
/// interpolant is exactly one.
struct LocalizationSpec {
    LocalizationKind kind = LocalizationKind::whole_line;
    double delta = 0.5;
    std::vector<double> bump_table;

    static LocalizationSpec whole_line() { return {}; }

    static LocalizationSpec interval(double delta) {
        LocalizationSpec s;
        s.kind = LocalizationKind::interval;
        s.delta = delta;
        return s;
    }

    static LocalizationSpec ball_2d() {
        LocalizationSpec s;
        s.kind = LocalizationKind::ball_2d;
        return s;
    }

    /// Standard mollifier exp(-1/(1-x^2)) tabulated on n points, normalized to
    /// unit integral.
    static LocalizationSpec smooth_bump(int n = 4001) {
        LocalizationSpec s;
        s.kind = LocalizationKind::smooth_bump;
        s.bump_table.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            const double x = -1.0 + 2.0 * k / (n - 1);
            s.bump_table[static_cast<std::size_t>(k)] =
                (std::abs(x) < 1.0) ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
        }
        s.normalize_table();
        return s;
    }

    static LocalizationSpec tabulated(std::vector<double> samples) {
        LocalizationSpec s;
        s.kind = LocalizationKind::smooth_bump;
        s.bump_table = std::move(samples);
        s.normalize_table();
        return s;
    }

    void validate() const {
        switch (kind) {
        case LocalizationKind::interval:
            if (!(delta > 0.0) || !std::isfinite(delta))
                throw std::invalid_argument("interval localization requires delta > 0");
            break;
        case LocalizationKind::smooth_bump: {
            if (bump_table.size() < 3)
                throw std::invalid_argument("smooth_bump table needs at least 3 samples");
            for (double v : bump_table)
                if (!(v >= 0.0) || v > 1.0 + 1e-12)
                    throw std::invalid_argument("smooth_bump samples must lie in [0,1]");
            break;
        }
        default:
            break;
        }
    }

    /// Pointwise value. For ball_2d, `x` is the radius |x|.
    double operator()(double x) const {
        switch (kind) {
        case LocalizationKind::whole_line:
            return 1.0;
        case LocalizationKind::interval:
            return (std::abs(x) <= delta) ? 0.5 / delta : 0.0;
        case LocalizationKind::ball_2d:
            return (std::abs(x) < 1.0) ? 1.0 : 0.0;
        case LocalizationKind::smooth_bump: {
            if (x <= -1.0 || x >= 1.0) return 0.0;
            const double s = (x + 1.0) * 0.5 * static_cast<double>(bump_table.size() - 1);
            const auto k = static_cast<std::size_t>(s);
            if (k + 1 >= bump_table.size()) return bump_table.back();
            const double w = s - static_cast<double>(k);
            return (1.0 - w) * bump_table[k] + w * bump_table[k + 1];
        }
        }
        return 0.0;
    }

    /// Exact integral of psi over [lo, hi] (1D kinds only).
    double integral(double lo, double hi) const {
        switch (kind) {
        case LocalizationKind::whole_line:
            return hi - lo;
        case LocalizationKind::interval: {
            const double l = std::max(lo, -delta), h = std::min(hi, delta);
            return (h > l) ? (h - l) * 0.5 / delta : 0.0;
        }
        case LocalizationKind::smooth_bump: {
            // piecewise-linear interpolant integrated exactly, segment by segment
            const double l = std::max(lo, -1.0), h = std::min(hi, 1.0);
            if (!(h > l)) return 0.0;
            const std::size_t n = bump_table.size();
            const double step = 2.0 / static_cast<double>(n - 1);
            double sum = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                const double x0 = -1.0 + step * static_cast<double>(k), x1 = x0 + step;
                const double a = std::max(l, x0), b = std::min(h, x1);
                if (!(b > a)) continue;
                auto lin = [&](double x) { return bump_table[k] + (bump_table[k + 1] - bump_table[k]) * (x - x0) / step; };
                sum += 0.5 * (lin(a) + lin(b)) * (b - a);
            }
            return sum;
        }
        case LocalizationKind::ball_2d:
            throw std::logic_error("ball_2d has no 1D integral");
        }
        return 0.0;
    }

private:
    void normalize_table() {
        const double step = 2.0 / static_cast<double>(bump_table.size() - 1);
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < bump_table.size(); ++k)
            sum += 0.5 * (bump_table[k] + bump_table[k + 1]) * step;
        if (!(sum > 0.0)) throw std::invalid_argument("smooth_bump table has zero integral");
        for (double& v : bump_table) v /= sum;
    }
};

/// Logistic recovery term lambda * g(a), g(a) = a (A* - a) on [0, A*].
struct LogisticSpec {
    double lambda = 0.0;
    double a_star_cap = 1.0;

    void validate() const {
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("lambda must be a finite nonnegative number");
        if (!(a_star_cap > 0.0) || !std::isfinite(a_star_cap))
            throw std::invalid_argument("a_star must be positive");
    }
    bool enabled() const { return lambda > 0.0; }
};

/// Largest admissible porous-medium exponent (exclusive) for a given gamma.
inline double porous_exponent_limit(double gamma) {
    return gamma > 0.0 ? 1.0 + 1.0 / gamma : std::numeric_limits<double>::infinity();
}

struct ProblemSpec {
    int dimension = 1;
    DriftSpec drift;
    LocalizationSpec localization;
    LogisticSpec logistic;
    double diffusion_exponent = 1.0;  ///< q; porous mode when q > 1
    double half_width = 20.0;          ///< L: x in [-L, L] (square in 2D)
    double a_max = 1.0;

    bool porous() const { return diffusion_exponent > 1.0; }

    void validate() const {
        if (dimension != 1 && dimension != 2)
            throw std::invalid_argument("dimension must be 1 or 2");
        drift.validate();
        localization.validate();
        logistic.validate();
        if (!(diffusion_exponent >= 1.0))
            throw std::invalid_argument("q must be >= 1");
        if (porous() && drift.gamma > 0.0 &&
            !(diffusion_exponent < porous_exponent_limit(drift.gamma)))
            throw std::invalid_argument("q must lie in [1, 1+1/gamma)");
        if (porous() && dimension != 1)
            throw std::invalid_argument("porous diffusion is only available in 1D");
        if (!(half_width > 0.0)) throw std::invalid_argument("L must be positive");
        if (!(a_max > 0.0)) throw std::invalid_argument("a_max must be positive");
        if (dimension == 2 && localization.kind != LocalizationKind::ball_2d &&
            localization.kind != LocalizationKind::whole_line)
            throw std::invalid_argument("2D runs support ball_2d or whole_line localization");
        if (dimension == 1 && localization.kind == LocalizationKind::ball_2d)
            throw std::invalid_argument("ball_2d localization requires dimension = 2");
    }
};

enum class ProfileKind { uniform, cosine_bump, gaussian };

/// One-dimensional nonnegative profile used to build initial data.
struct Profile {
    ProfileKind kind = ProfileKind::uniform;
    double center = 0.0;
    double half_width = 1.0;  ///< support half-width (uniform, bump) or std-dev (gaussian)

    double operator()(double s) const {
        const double z = (s - center) / half_width;
        switch (kind) {
        case ProfileKind::uniform:
            return std::abs(z) <= 1.0 ? 1.0 : 0.0;
        case ProfileKind::cosine_bump: {
            if (std::abs(z) >= 1.0) return 0.0;
            const double c = std::cos(0.5 * M_PI * z);
            return c * c;
        }
        case ProfileKind::gaussian:
            return std::exp(-0.5 * z * z);
        }
        return 0.0;
    }
};

/// Initial datum u0(x, a) = X(x) [X(y)] A(a), restricted to a in [a0, A0] and
/// normalized to total_mass.
struct InitialDataSpec {
    double a0 = 0.0;
    double A0 = 1.0;
    ProfileKind a_profile = ProfileKind::uniform;  ///< laid over [a0, A0]
    Profile x_profile{ProfileKind::gaussian, 0.0, 1.0};
    double total_mass = 1.0;

    void validate() const {
        if (!(a0 >= 0.0) || !(A0 > a0))
            throw std::invalid_argument("initial a-support requires 0 <= a0 < A0");
        if (!(total_mass > 0.0)) throw std::invalid_argument("total mass must be positive");
        if (!(x_profile.half_width > 0.0))
            throw std::invalid_argument("x profile width must be positive");
    }

    double a_weight(double a) const {
        if (a < a0 || a > A0) return 0.0;
        Profile p{a_profile, 0.5 * (a0 + A0), 0.5 * (A0 - a0)};
        if (a_profile == ProfileKind::gaussian) p.half_width = 0.25 * (A0 - a0);
        return p(a);
    }
};

// ---------------------------------------------------------------------------
// Coefficient functions

/// f(a) = +a^gamma (deceleration) or -a^gamma (acceleration); f(0) = +-1 when gamma = 0.
inline double drift_f(double a, const DriftSpec& spec) {
    if (!(a >= 0.0)) throw std::domain_error("drift_f: a must be nonnegative");
    const double s = spec.sign == DriftSign::deceleration ? 1.0 : -1.0;
    if (spec.gamma == 0.0) return s;
    if (a == 0.0) return 0.0;
    return s * std::pow(a, spec.gamma);
}

inline double logistic_g(double a, const LogisticSpec& spec) {
    if (a <= 0.0 || a >= spec.a_star_cap) return 0.0;
    return a * (spec.a_star_cap - a);
}

/// h(a) = lambda (A* - a) a - a^gamma on [0, A*].
inline double h_function(double a, double lambda, double a_star_cap, double gamma) {
    if (!(a >= 0.0 && a <= a_star_cap))
        throw std::domain_error("h_function: a must lie in [0, A*]");
    return lambda * (a_star_cap - a) * a - std::pow(a, gamma);
}

/// Smallest root of h in (0, A*): uniform scan on 10^4 intervals, then bisection
/// of the first sign-change bracket.
inline std::optional<double> find_root_h(double lambda, double a_star_cap, double gamma,
                                         double tol = 1e-12) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_root_h: tol must be positive");
    auto h = [&](double a) { return h_function(a, lambda, a_star_cap, gamma); };
    auto bisect = [&](double lo, double hi) {
        double hlo = h(lo);
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const double hm = h(mid);
            if (hm == 0.0) return mid;
            if ((hm < 0.0) == (hlo < 0.0)) {
                lo = mid;
                hlo = hm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    constexpr int n = 10000;
    const double step = a_star_cap / n;

    // sign of h just above 0
    double near_zero_sign;
    if (gamma < 1.0) near_zero_sign = -1.0;
    else if (gamma == 1.0) near_zero_sign = (lambda * a_star_cap - 1.0 >= 0.0) ? 1.0 : -1.0;
    else near_zero_sign = lambda > 0.0 ? 1.0 : -1.0;

    double prev_a = step;
    double prev_h = h(prev_a);
    if (prev_h == 0.0) return prev_a;
    if ((prev_h > 0.0) != (near_zero_sign > 0.0)) {
        // root below the first scan point
        double lo = prev_a;
        for (int k = 0; k < 1074 && lo > 0.0; ++k) {
            lo *= 0.5;
            const double hl = h(lo);
            if (hl == 0.0) return lo;
            if ((hl > 0.0) != (prev_h > 0.0)) return bisect(lo, prev_a);
        }
    }
    for (int k = 2; k < n; ++k) {
        const double a = step * k;
        const double ha = h(a);
        if (ha == 0.0) return a;
        if ((ha > 0.0) != (prev_h > 0.0)) return bisect(prev_a, a);
        prev_a = a;
        prev_h = ha;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Characteristics of a' = -a^gamma

/// Time at which the characteristic started at a0 reaches 0 (infinite for gamma >= 1).
inline double vanishing_time(double a0, double gamma) {
    if (!(a0 > 0.0)) throw std::domain_error("vanishing_time: a0 must be positive");
    if (gamma >= 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(a0, 1.0 - gamma) / (1.0 - gamma);
}

/// Closed-form solution of a' = -a^gamma, a(0) = a0.
inline double characteristic_a(double t, double a0, double gamma) {
    if (!(a0 > 0.0)) throw std::domain_error("characteristic_a: a0 must be positive");
    if (!(t >= 0.0)) throw std::domain_error("characteristic_a: t must be nonnegative");
    // positive for all t when gamma >= 1; clamp values below the double range
    if (gamma == 1.0) return std::max(a0 * std::exp(-t), std::numeric_limits<double>::denorm_min());
    if (gamma < 1.0 && t >= vanishing_time(a0, gamma)) return 0.0;
    const double base = std::pow(a0, 1.0 - gamma) - (1.0 - gamma) * t;
    if (base <= 0.0) return 0.0;
    const double a = std::pow(base, 1.0 / (1.0 - gamma));
    return gamma > 1.0 ? std::max(a, std::numeric_limits<double>::denorm_min()) : a;
}

/// Whole-line concentration time
///   T_b = int a^{1-gamma} u0 / ((1-gamma) int u0)
/// by midpoint quadrature of a tabulated a-marginal.
inline double blowup_time_Tb(const std::vector<double>& a_centers,
                             const std::vector<double>& a_widths,
                             const std::vector<double>& a_marginal, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::domain_error("blowup_time_Tb: gamma must lie in [0,1)");
    if (a_centers.size() != a_widths.size() || a_centers.size() != a_marginal.size())
        throw std::invalid_argument("blowup_time_Tb: table sizes differ");
    double mass = 0.0, moment = 0.0;
    for (std::size_t j = 0; j < a_centers.size(); ++j) {
        if (a_marginal[j] < 0.0) throw std::invalid_argument("blowup_time_Tb: negative datum");
        const double m = a_marginal[j] * a_widths[j];
        mass += m;
        moment += std::pow(a_centers[j], 1.0 - gamma) * m;
    }
    if (!(mass > 0.0)) throw std::invalid_argument("blowup_time_Tb: zero mass");
    return moment / ((1.0 - gamma) * mass);
}

/// Gronwall-type blow-up bound for y(t) >= y0 + int (C2 y^{1+theta} - C1).
struct GronwallBound {
    double alpha = 0.0;
    std::optional<double> T_alpha;
    double y0 = 0.0;
    double theta = 1.0;

    /// y0 (1 - t alpha theta / y0)^{-1/theta}; +inf past its pole.
    double lower_bound(double t) const {
        if (!(alpha > 0.0))
            throw std::logic_error("gronwall lower bound undefined for alpha <= 0");
        const double base = 1.0 - t * alpha * theta / y0;
        if (base <= 0.0) return std::numeric_limits<double>::infinity();
        return y0 * std::pow(base, -1.0 / theta);
    }
    /// Pole of lower_bound.
    double lower_bound_pole() const { return y0 / (alpha * theta); }
};

inline GronwallBound gronwall_T_alpha(double C1, double C2, double theta, double y0) {
    if (!(C1 > 0.0)) throw std::invalid_argument("gronwall_T_alpha: C1 must be positive");
    if (!(C2 > 0.0)) throw std::invalid_argument("gronwall_T_alpha: C2 must be positive");
    if (!(theta > 0.0)) throw std::invalid_argument("gronwall_T_alpha: theta must be positive");
    if (!(y0 > 0.0)) throw std::invalid_argument("gronwall_T_alpha: y0 must be positive");
    GronwallBound b;
    b.y0 = y0;
    b.theta = theta;
    b.alpha = C2 * std::pow(y0, 1.0 + theta) - C1;
    if (b.alpha > 0.0)
        b.T_alpha = std::pow(b.alpha, -theta / (1.0 + theta)) / theta *
                    std::pow(C1 / C2, 1.0 / (1.0 + theta));
    return b;
}

}  // namespace driftlab
