/// @file io.hpp
/// @brief CSV and key = value writers for fields, diagnostics, reports and
///        particle summaries
#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "field.hpp"
#include "grid.hpp"
#include "particles.hpp"

namespace driftlab {

/// Shortest round-trip representation ("%.17g").
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// File name of a field dump at time t.
inline std::string field_filename(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "field_t%.6f.csv", t);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    return os;
}

/// Header x,a,u (x,y,a,u in 2D); rows by x, then y, then a; a final row with
/// a = -1 carries the boundary mass.
inline void write_field_csv(std::ostream& os, const Field& f, const Grid& g) {
    const bool two_d = g.dimension() == 2;
    os << (two_d ? "x,y,a,u\n" : "x,a,u\n");
    std::string line;
    for (int i = 0; i < g.nx(); ++i)
        for (int k = 0; k < g.ny(); ++k)
            for (int j = 0; j < g.na(); ++j) {
                line = fmt(g.x(i));
                if (two_d) line += "," + fmt(g.y(k));
                line += "," + fmt(g.a_centers()[static_cast<std::size_t>(j)]);
                line += "," + fmt(f.u[two_d ? g.index(i, k, j) : g.index(i, j)]);
                os << line << '\n';
            }
    os << (two_d ? "0,0,-1," : "0,-1,") << fmt(f.boundary_mass) << '\n';
}

inline void write_field_csv(const std::string& path, const Field& f, const Grid& g) {
    auto os = open_out(path);
    write_field_csv(os, f, g);
}

inline const char* kDiagnosticsHeader =
    "t,mass,boundary_mass,l1,l2,lp,moment_1mg,half_moment,virial_y,support_min,support_max,sup_agamma";

inline void write_diagnostics_csv(std::ostream& os, const DiagnosticsSeries& s) {
    os << kDiagnosticsHeader << '\n';
    for (const auto& d : s.samples)
        os << fmt(d.t) << ',' << fmt(d.mass) << ',' << fmt(d.boundary_mass) << ',' << fmt(d.l1) << ','
           << fmt(d.l2) << ',' << fmt(d.lp) << ',' << fmt(d.moment_1mg) << ',' << fmt(d.half_moment) << ','
           << fmt(d.virial_y) << ',' << fmt(d.support_min) << ',' << fmt(d.support_max) << ','
           << fmt(d.sup_agamma) << '\n';
}

inline void write_diagnostics_csv(const std::string& path, const DiagnosticsSeries& s) {
    auto os = open_out(path);
    write_diagnostics_csv(os, s);
}

inline void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& s) {
    os << "t,trapped_fraction,mean_a,var_x,mean_x\n";
    for (const auto& d : s)
        os << fmt(d.t) << ',' << fmt(d.trapped_fraction) << ',' << fmt(d.mean_a) << ',' << fmt(d.var_x) << ','
           << fmt(d.mean_x) << '\n';
}

inline void write_trajectory_csv(const std::string& path, const std::vector<TrajectorySample>& s) {
    auto os = open_out(path);
    write_trajectory_csv(os, s);
}

/// Per-particle dump: x,y,a,trapped,trap_time.
inline void write_particles_csv(const std::string& path, const Ensemble& e) {
    auto os = open_out(path);
    os << "x,y,a,trapped,trap_time\n";
    for (const auto& p : e.particles)
        os << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(p.a) << ',' << (p.trapped ? 1 : 0) << ','
           << (p.trap_time ? fmt(*p.trap_time) : std::string("nan")) << '\n';
}

/// Ordered key = value block.
class KeyValueReport {
public:
    void set(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
    void set(const std::string& key, double value) { set(key, fmt(value)); }
    void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    template <class T>
    void set(const std::string& key, const std::optional<T>& value) {
        if (value) set(key, *value);
        else set(key, std::string("none"));
    }
    void write(std::ostream& os) const {
        for (const auto& [k, v] : rows_) os << k << " = " << v << '\n';
    }
    void write(const std::string& path) const {
        auto os = open_out(path);
        write(os);
    }
    const std::vector<std::pair<std::string, std::string>>& rows() const { return rows_; }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

inline void add_report(KeyValueReport& kv, const BlowupReport& r) {
    kv.set("verdict", to_string(r.verdict));
    kv.set("t_detect", r.t_detect);
    kv.set("t_star_estimate", r.t_star_estimate);
    kv.set("t_star_method", r.t_star_method.empty() ? std::string("none") : r.t_star_method);
    kv.set("theory_name", r.theory_name.empty() ? std::string("none") : r.theory_name);
    kv.set("theory_bound", r.theory_bound);
    kv.set("comparison", r.comparison);
    kv.set("virial_fired", r.virial_fired);
    kv.set("lp_fired", r.lp_fired);
    kv.set("dt_collapse", r.dt_collapse);
    kv.set("virial_growth", r.virial_growth);
    kv.set("lp_growth", r.lp_growth);
    kv.set("horizon", r.horizon);
}

}  // namespace driftlab
