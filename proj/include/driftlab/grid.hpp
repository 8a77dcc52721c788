/// @file grid.hpp
/// @brief Structured (x[, y], a) grid with a graded a-mesh
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace driftlab {

enum class AMeshKind { graded, characteristic };

/// a-mesh request.
///
/// graded: grading_ratio = 1 gives a uniform mesh. Otherwise cells grow
/// geometrically from min_width at a = 0 until they reach the uniform width
/// of the remaining interval, and stay uniform from there on.
///
/// characteristic: the same geometric layer near 0, topped by cells of equal
/// transit time tau under a' = -a^align_gamma (midpoint velocity), i.e.
/// a_{j+1} - a_j = tau ((a_j + a_{j+1}) / 2)^align_gamma.
struct AMeshSpec {
    int na = 128;
    double a_max = 1.0;
    double grading_ratio = 1.0;
    double min_width = 0.0;
    AMeshKind kind = AMeshKind::graded;
    double align_gamma = 0.5;
};

namespace detail {

/// Next face of the equal-transit-time layer above `a`.
inline double transit_face(double a, double tau, double gamma) {
    double x = a + tau * std::pow(std::max(a, 1e-300), gamma);
    for (int it = 0; it < 200; ++it) {
        const double nx = a + tau * std::pow(0.5 * (a + x), gamma);
        if (std::abs(nx - x) <= 1e-16 * nx) return nx;
        x = nx;
    }
    return x;
}

/// Faces of the characteristic mesh, or empty when no geometric layer fits.
inline std::vector<double> characteristic_faces(const AMeshSpec& s) {
    const double r = s.grading_ratio, d = s.min_width, g = s.align_gamma;
    const double tol = 1e-9;
    for (int K = 1; K < s.na; ++K) {
        const double G = d * (std::pow(r, K) - 1.0) / (r - 1.0);
        if (G >= s.a_max) break;
        const int n = s.na - K;
        if (g < 1.0) {
            // skip layers whose first transit cell would be far wider than the last geometric one
            const double S = (std::pow(s.a_max, 1.0 - g) - std::pow(G, 1.0 - g)) / (1.0 - g);
            const double w_est = (S / n) * std::pow(G, g);
            if (w_est > 2.0 * r * d * std::pow(r, K - 1)) continue;
        }
        auto top = [&](double tau) {
            double a = G;
            for (int k = 0; k < n; ++k) a = transit_face(a, tau, g);
            return a;
        };
        double lo = 0.0, hi = (s.a_max - G) / n / std::pow(s.a_max, g) * 2.0 + 1e-300;
        while (top(hi) < s.a_max) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (top(mid) < s.a_max ? lo : hi) = mid;
        }
        const double tau = 0.5 * (lo + hi);
        std::vector<double> faces(static_cast<std::size_t>(s.na) + 1, 0.0);
        for (int k = 0; k < K; ++k) faces[static_cast<std::size_t>(k) + 1] = faces[static_cast<std::size_t>(k)] + d * std::pow(r, k);
        for (int k = K; k < s.na; ++k)
            faces[static_cast<std::size_t>(k) + 1] = transit_face(faces[static_cast<std::size_t>(k)], tau, g);
        faces.back() = s.a_max;
        bool ok = true;
        for (std::size_t j = 1; j + 1 < faces.size() && ok; ++j) {
            const double q = (faces[j + 1] - faces[j]) / (faces[j] - faces[j - 1]);
            ok = q >= 1.0 - tol && q <= r * (1.0 + tol);
        }
        if (ok) return faces;
    }
    return {};
}

}  // namespace detail

/// Face positions 0 = a_0 < a_1 < ... < a_na = a_max.
inline std::vector<double> make_a_faces(const AMeshSpec& s) {
    if (s.na < 1) throw std::invalid_argument("na must be positive");
    if (s.kind == AMeshKind::characteristic) {
        if (!(s.grading_ratio > 1.0) || !(s.min_width > 0.0) || !(s.align_gamma >= 0.0))
            throw std::invalid_argument("characteristic mesh needs grading_ratio > 1, min_width > 0, gamma >= 0");
        if (!(s.a_max > 0.0)) throw std::invalid_argument("a_max must be positive");
        auto faces = detail::characteristic_faces(s);
        if (faces.empty())
            throw std::invalid_argument("characteristic a-mesh cannot be built with this na, ratio and min_width");
        return faces;
    }
    if (!(s.a_max > 0.0)) throw std::invalid_argument("a_max must be positive");
    if (!(s.grading_ratio >= 1.0)) throw std::invalid_argument("grading ratio must be >= 1");
    const auto n = static_cast<std::size_t>(s.na);
    std::vector<double> widths(n, s.a_max / s.na);

    if (s.grading_ratio > 1.0 && s.min_width > 0.0 && s.min_width < s.a_max / s.na) {
        const double r = s.grading_ratio, d = s.min_width;
        // largest geometric prefix K whose last cell stays below the uniform tail width
        int K = 0;
        double G = 0.0;
        for (int k = 1; k < s.na; ++k) {
            const double Gk = G + d * std::pow(r, k - 1);
            const double hk = (s.a_max - Gk) / (s.na - k);
            if (Gk >= s.a_max || hk < d * std::pow(r, k - 1)) break;
            K = k;
            G = Gk;
        }
        if (K > 0) {
            const double h = (s.a_max - G) / (s.na - K);
            if (h > r * d * std::pow(r, K - 1) * (1.0 + 1e-9))
                throw std::invalid_argument(
                    "graded a-mesh cannot span a_max with this na, ratio and min_width");
            for (int k = 0; k < K; ++k) widths[static_cast<std::size_t>(k)] = d * std::pow(r, k);
            for (int k = K; k < s.na; ++k) widths[static_cast<std::size_t>(k)] = h;
        }
    }
    std::vector<double> faces(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) faces[j + 1] = faces[j] + widths[j];
    faces[n] = s.a_max;
    return faces;
}

class Grid {
public:
    static Grid make_1d(int nx, double half_width, const AMeshSpec& a) {
        return Grid(1, nx, 1, half_width, a);
    }
    static Grid make_2d(int nx, int ny, double half_width, const AMeshSpec& a) {
        return Grid(2, nx, ny, half_width, a);
    }

    int dimension() const { return dim_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int na() const { return static_cast<int>(a_centers_.size()); }
    double half_width() const { return L_; }
    double dx() const { return dx_; }
    double dy() const { return dim_ == 2 ? 2.0 * L_ / ny_ : 1.0; }
    /// Spatial cell measure (dx in 1D, dx*dy in 2D).
    double cell_area() const { return dx() * dy(); }
    /// Number of spatial cells (nx or nx*ny).
    std::size_t n_space() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
    std::size_t size() const { return n_space() * a_centers_.size(); }

    double x(int i) const { return -L_ + (i + 0.5) * dx_; }
    double y(int k) const { return -L_ + (k + 0.5) * dy(); }

    const std::vector<double>& a_faces() const { return a_faces_; }
    const std::vector<double>& a_centers() const { return a_centers_; }
    const std::vector<double>& a_widths() const { return a_widths_; }
    double a_max() const { return a_faces_.back(); }

    /// Flat index; x fastest, then y, then a.
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * n_space() + static_cast<std::size_t>(i);
    }
    std::size_t index(int i, int k, int j) const {
        return (static_cast<std::size_t>(j) * static_cast<std::size_t>(ny_) +
                static_cast<std::size_t>(k)) * static_cast<std::size_t>(nx_) +
               static_cast<std::size_t>(i);
    }

    /// Index of the a-cell containing a (clamped to the mesh).
    int a_cell(double a) const {
        if (a <= 0.0) return 0;
        if (a >= a_max()) return na() - 1;
        auto it = std::upper_bound(a_faces_.begin(), a_faces_.end(), a);
        return static_cast<int>(it - a_faces_.begin()) - 1;
    }
    int x_cell(double x) const {
        const int i = static_cast<int>(std::floor((x + L_) / dx_));
        return std::clamp(i, 0, nx_ - 1);
    }
    int y_cell(double y) const {
        const int k = static_cast<int>(std::floor((y + L_) / dy()));
        return std::clamp(k, 0, ny_ - 1);
    }

private:
    Grid(int dim, int nx, int ny, double L, const AMeshSpec& a) : dim_(dim), nx_(nx), ny_(ny), L_(L) {
        if (nx < 2 || ny < 1 || (dim == 2 && ny < 2))
            throw std::invalid_argument("grid needs at least two cells per spatial direction");
        if (!(L > 0.0)) throw std::invalid_argument("half width must be positive");
        dx_ = 2.0 * L / nx;
        a_faces_ = make_a_faces(a);
        const std::size_t n = a_faces_.size() - 1;
        a_centers_.resize(n);
        a_widths_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            a_widths_[j] = a_faces_[j + 1] - a_faces_[j];
            a_centers_[j] = 0.5 * (a_faces_[j] + a_faces_[j + 1]);
        }
    }

    int dim_ = 1;
    int nx_ = 0;
    int ny_ = 1;
    double L_ = 1.0;
    double dx_ = 1.0;
    std::vector<double> a_faces_;
    std::vector<double> a_centers_;
    std::vector<double> a_widths_;
};

}  // namespace driftlab
