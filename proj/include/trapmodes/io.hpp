#pragma once

// Text artifacts: CSV tables, SVG meridional plots, and the line-oriented
// key-value documents used for structures and verification reports.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "trapmodes/errors.hpp"
#include "trapmodes/structure.hpp"
#include "trapmodes/verify.hpp"

namespace trapmodes {

inline std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Writes through a temporary sibling and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- CSV ----------------------------------------------------------------

inline constexpr double trace_plot_bound = 10.0;

inline std::string trace_csv(const std::vector<std::pair<double, double>>& trace, double bound = trace_plot_bound)
{
    std::string s = "rho,value,clipped\n";
    for (const auto& [r, v] : trace) s += fmt17(r) + "," + fmt17(v) + "," + (std::abs(v) > bound ? "1" : "0") + "\n";
    return s;
}

inline std::string curve_csv(const LevelCurve& c)
{
    std::string s = "rho,eta\n";
    for (const auto& p : c.points) s += fmt17(p.rho) + "," + fmt17(p.eta) + "\n";
    return s;
}

// ---- SVG ----------------------------------------------------------------

struct SvgCurve {
    std::vector<FieldPoint> points;
    bool bold = false;
    bool dashed = false;
    std::string color = "#1f4e79";
};

struct SvgFrame {
    double rho_max = 6.0;
    double depth = 3.0;
    double width = 720.0;
};

// Meridional plot with eta growing downwards, as in the usual figures.
inline std::string meridional_svg(const std::vector<SvgCurve>& curves, const SvgFrame& fr,
                                  const std::vector<std::vector<FieldPoint>>& outlines = {}, double ring = -1.0)
{
    const double sx = fr.width / fr.rho_max;
    const double height = fr.depth * sx;
    auto X = [&](double r) { return fmt17(std::round(r * sx * 100) / 100); };
    auto Y = [&](double e) { return fmt17(std::round(-e * sx * 100) / 100); };
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt17(fr.width) + "\" height=\"" +
         fmt17(std::round(height)) + "\" viewBox=\"0 " + fmt17(-0.05 * height) + " " + fmt17(fr.width) + " " +
         fmt17(std::round(1.05 * height)) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + fmt17(fr.width) + "\" height=\"" + fmt17(std::round(height)) +
         "\" fill=\"#f7fbff\" stroke=\"#999\"/>\n";
    s += "<line x1=\"0\" y1=\"0\" x2=\"" + fmt17(fr.width) + "\" y2=\"0\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    for (const auto& o : outlines) {
        s += "<polygon fill=\"#d9d9d9\" stroke=\"#555\" stroke-width=\"1\" points=\"";
        for (const auto& p : o) s += X(p.rho) + "," + Y(p.eta) + " ";
        s += "\"/>\n";
    }
    for (const auto& c : curves) {
        if (c.points.size() < 2) continue;
        s += "<polyline fill=\"none\" stroke=\"" + c.color + "\" stroke-width=\"" + (c.bold ? "2.5" : "1") + "\"";
        if (c.dashed) s += " stroke-dasharray=\"6,4\"";
        s += " points=\"";
        for (const auto& p : c.points)
            if (p.rho <= fr.rho_max * 1.5 && p.eta >= -fr.depth * 1.5) s += X(p.rho) + "," + Y(p.eta) + " ";
        s += "\"/>\n";
    }
    if (ring > 0.0) s += "<circle cx=\"" + X(ring) + "\" cy=\"0\" r=\"3\" fill=\"#c00\"/>\n";
    s += "</svg>\n";
    return s;
}

// Closed outline of a body: wetted curve plus the superstructure box above it.
inline std::vector<FieldPoint> body_outline(const BodySection& b)
{
    std::vector<FieldPoint> o = b.wetted.points;
    o.push_back({b.outer_radius, b.superstructure_height});
    o.push_back({b.inner_radius, b.superstructure_height});
    return o;
}

inline std::string structure_svg(const Structure& s)
{
    SvgFrame fr;
    double deepest = 0.0;
    for (const auto& b : s.bodies) {
        fr.rho_max = std::max(fr.rho_max, b.outer_radius + 1.0);
        deepest = std::min(deepest, lowest_point(b));
    }
    fr.depth = std::max(1.0, -2.0 * deepest);
    std::vector<std::vector<FieldPoint>> outlines;
    for (const auto& b : s.bodies) outlines.push_back(body_outline(b));
    return meridional_svg({}, fr, outlines, s.mode.rho_r);
}

// ---- key-value documents --------------------------------------------------

// Sections of "key = value" lines introduced by "[name]" headers; repeated
// keys keep their order.
class KvDocument {
public:
    using Entries = std::vector<std::pair<std::string, std::string>>;

    void add(const std::string& section, const std::string& key, const std::string& value)
    {
        auto it = std::find_if(sections_.begin(), sections_.end(), [&](const auto& x) { return x.first == section; });
        if (it == sections_.end()) {
            sections_.push_back({section, {}});
            it = std::prev(sections_.end());
        }
        it->second.push_back({key, value});
    }

    bool has(const std::string& section) const { return find(section) != nullptr; }

    const Entries& section(const std::string& name) const
    {
        if (const auto* e = find(name)) return *e;
        throw SchemaError("missing section [" + name + "]");
    }

    std::string get(const std::string& sec, const std::string& key) const
    {
        for (const auto& [k, v] : section(sec))
            if (k == key) return v;
        throw SchemaError("missing key '" + key + "' in [" + sec + "]");
    }

    double number(const std::string& sec, const std::string& key) const { return parse_number(get(sec, key), key); }

    std::vector<std::string> all(const std::string& sec, const std::string& key) const
    {
        std::vector<std::string> out;
        for (const auto& [k, v] : section(sec))
            if (k == key) out.push_back(v);
        return out;
    }

    static double parse_number(const std::string& s, const std::string& what)
    {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw SchemaError("not a number for '" + what + "': " + s);
        }
        if (s.find_first_not_of(" \t", pos) != std::string::npos) throw SchemaError("trailing text for '" + what + "'");
        return v;
    }

    static std::vector<double> parse_numbers(const std::string& s, std::size_t expect, const std::string& what)
    {
        std::istringstream in(s);
        std::vector<double> out;
        std::string tok;
        while (in >> tok) out.push_back(parse_number(tok, what));
        if (expect && out.size() != expect)
            throw SchemaError("'" + what + "' needs " + std::to_string(expect) + " numbers");
        return out;
    }

    std::string str() const
    {
        std::string s;
        for (const auto& [name, entries] : sections_) {
            s += "[" + name + "]\n";
            for (const auto& [k, v] : entries) s += k + " = " + v + "\n";
            s += "\n";
        }
        return s;
    }

    static KvDocument parse(const std::string& text)
    {
        KvDocument doc;
        std::istringstream in(text);
        std::string line, current;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            line = line.substr(first);
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
            if (line.front() == '[') {
                if (line.back() != ']') throw SchemaError("bad section header on line " + std::to_string(lineno));
                current = line.substr(1, line.size() - 2);
                if (!doc.has(current)) doc.sections_.push_back({current, {}});
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos || current.empty())
                throw SchemaError("expected 'key = value' on line " + std::to_string(lineno));
            auto trim = [](std::string x) {
                const auto a = x.find_first_not_of(" \t"), b = x.find_last_not_of(" \t");
                return a == std::string::npos ? std::string{} : x.substr(a, b - a + 1);
            };
            doc.add(current, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return doc;
    }

private:
    const Entries* find(const std::string& name) const
    {
        for (const auto& [n, e] : sections_)
            if (n == name) return &e;
        return nullptr;
    }

    std::vector<std::pair<std::string, Entries>> sections_;
};

inline std::string end_kind_name(EndKind k)
{
    switch (k) {
    case EndKind::FreeSurface: return "free_surface";
    case EndKind::Infinity: return "infinity";
    case EndKind::Axis: return "axis";
    }
    return "?";
}

inline std::string structure_document(const Structure& s)
{
    KvDocument d;
    d.add("structure", "format", "trapmodes-structure 1");
    d.add("structure", "bodies", std::to_string(s.bodies.size()));
    d.add("mode", "m", std::to_string(s.mode.m));
    d.add("mode", "omega", fmt17(s.mode.omega));
    d.add("mode", "gravity", fmt17(s.mode.g));
    d.add("mode", "nu", fmt17(s.mode.nu));
    d.add("mode", "rho_r", fmt17(s.mode.rho_r));
    d.add("mode", "h_max", fmt17(s.h_max));
    for (std::size_t k = 0; k < s.bodies.size(); ++k) {
        const auto& b = s.bodies[k];
        const std::string sec = "body " + std::to_string(k);
        d.add(sec, "H", fmt17(b.H));
        d.add(sec, "level", fmt17(b.wetted.level));
        d.add(sec, "inner_radius", fmt17(b.inner_radius));
        d.add(sec, "outer_radius", fmt17(b.outer_radius));
        d.add(sec, "superstructure_height", fmt17(b.superstructure_height));
        d.add(sec, "encloses_ring", b.wetted.encloses_ring ? "1" : "0");
        d.add(sec, "max_level_residual", fmt17(b.wetted.max_residual));
        d.add(sec + " ballast", "center_of_mass_eta", fmt17(b.ballast.center_of_mass_eta));
        for (const auto& l : b.ballast.layers)
            d.add(sec + " ballast", "layer", fmt17(l.eta_lo) + " " + fmt17(l.eta_hi) + " " + fmt17(l.density));
        for (const auto& p : b.wetted.points) d.add(sec + " geometry", "point", fmt17(p.rho) + " " + fmt17(p.eta));
        if (k < s.matrices.size()) {
            const auto& m = s.matrices[k];
            for (int i = 0; i < 6; ++i) {
                std::string e0, k0;
                for (int j = 0; j < 6; ++j) {
                    e0 += (j ? " " : "") + fmt17(m.E0(i, j));
                    k0 += (j ? " " : "") + fmt17(m.K0(i, j));
                }
                d.add(sec + " matrices", "E0", e0);
                d.add(sec + " matrices", "K0", k0);
            }
            d.add(sec + " matrices", "K_hat_eigenvalues",
                  fmt17(m.K_hat_eigenvalues[0]) + " " + fmt17(m.K_hat_eigenvalues[1]) + " " +
                      fmt17(m.K_hat_eigenvalues[2]));
        }
    }
    return d.str();
}

// Rebuilds a structure from its document; the matrices are recomputed from
// the stored geometry and ballast rather than trusted.
inline Structure parse_structure_document(const std::string& text)
{
    const auto d = KvDocument::parse(text);
    if (d.get("structure", "format") != "trapmodes-structure 1") throw SchemaError("unknown document format");
    const double nb = d.number("structure", "bodies");
    if (!(nb >= 2) || nb != std::floor(nb)) throw SchemaError("a structure needs at least two bodies");
    Structure s;
    const double m = d.number("mode", "m");
    if (!(m >= 1) || m != std::floor(m)) throw SchemaError("mode index must be a positive integer");
    s.mode = ModeParams::make(int(m), d.number("mode", "omega"), d.number("mode", "gravity"));
    s.h_max = d.number("mode", "h_max");
    for (int k = 0; k < int(nb); ++k) {
        const std::string sec = "body " + std::to_string(k);
        BodySection b;
        b.H = d.number(sec, "H");
        if (!(b.H >= 0.0)) throw SchemaError("heave amplitude must be >= 0");
        b.superstructure_height = d.number(sec, "superstructure_height");
        b.wetted.level = d.number(sec, "level");
        b.wetted.H = b.H;
        b.wetted.encloses_ring = d.get(sec, "encloses_ring") == "1";
        for (const auto& row : d.all(sec + " geometry", "point")) {
            const auto v = KvDocument::parse_numbers(row, 2, "point");
            b.wetted.points.push_back({v[0], v[1]});
        }
        if (b.wetted.points.size() < 7) throw SchemaError("body " + std::to_string(k) + " geometry is too short");
        const auto& pts = b.wetted.points;
        if (pts.front().eta != 0.0 || pts.back().eta != 0.0)
            throw SchemaError("wetted curve must start and end on the free surface");
        for (const auto& p : pts)
            if (!(p.rho >= 0.0) || !(p.eta <= 0.0) || !std::isfinite(p.rho) || !std::isfinite(p.eta))
                throw SchemaError("geometry point outside the lower quadrant");
        b.wetted.left_end = {EndKind::FreeSurface, pts.front().rho};
        b.wetted.right_end = {EndKind::FreeSurface, pts.back().rho};
        b.inner_radius = pts.front().rho;
        b.outer_radius = pts.back().rho;
        b.ballast.center_of_mass_eta = d.number(sec + " ballast", "center_of_mass_eta");
        for (const auto& row : d.all(sec + " ballast", "layer")) {
            const auto v = KvDocument::parse_numbers(row, 3, "layer");
            b.ballast.layers.push_back({v[0], v[1], v[2]});
        }
        if (b.ballast.layers.empty()) throw SchemaError("body " + std::to_string(k) + " has no ballast layers");
        s.bodies.push_back(std::move(b));
    }
    for (const auto& b : s.bodies) s.matrices.push_back(compute_matrices(b));
    return s;
}

inline std::string report_document(const VerificationReport& r, const ModeParams& mp)
{
    KvDocument d;
    d.add("report", "format", "trapmodes-report 1");
    d.add("report", "passed", r.passed ? "1" : "0");
    d.add("report", "far_field_exponent", fmt17(r.far_field_exponent));
    d.add("report", "guard_distance", fmt17(r.guard_distance));
    d.add("tolerances", "bc", fmt17(r.tol.bc));
    d.add("tolerances", "motion", fmt17(r.tol.motion));
    d.add("tolerances", "symmetry", fmt17(r.tol.symmetry));
    d.add("tolerances", "equipartition", fmt17(r.tol.equipartition));
    d.add("tolerances", "far_field", fmt17(r.tol.far_field));
    for (std::size_t k = 0; k < r.bc_residuals.size(); ++k) {
        const std::string sec = "body " + std::to_string(k);
        d.add(sec, "kinematic", fmt17(r.bc_residuals[k]));
        d.add(sec, "kinematic_ok", r.bc_residuals[k] <= r.tol.bc ? "1" : "0");
        std::string m;
        for (int i = 0; i < 6; ++i) m += (i ? " " : "") + fmt17(r.motion_eq_residuals[k][i]);
        d.add(sec, "motion", m);
        d.add(sec, "motion_refinement", fmt17(r.motion_refinement[k]));
    }
    for (const auto& e : r.equipartition)
        d.add("equipartition", "domain",
              fmt17(e.domain.b) + " " + fmt17(e.domain.d) + " " + fmt17(e.lhs) + " " + fmt17(e.rhs) + " " +
                  fmt17(e.gap));
    // the same run in physical units for the configured (omega, g)
    d.add("dimensional", "omega", fmt17(mp.omega));
    d.add("dimensional", "gravity", fmt17(mp.g));
    d.add("dimensional", "nu", fmt17(mp.nu));
    d.add("dimensional", "ring_radius", fmt17(mp.rho_r / mp.nu));
    for (const auto& e : r.equipartition)
        d.add("dimensional", "domain", fmt17(e.domain.b / mp.nu) + " " + fmt17(e.domain.d / mp.nu));
    return d.str();
}

inline std::string residual_csv(const VerificationReport& r)
{
    std::string s = "body,kinematic,heave,surge,sway,yaw,roll,pitch\n";
    for (std::size_t k = 0; k < r.bc_residuals.size(); ++k) {
        s += std::to_string(k) + "," + fmt17(r.bc_residuals[k]);
        for (int i = 0; i < 6; ++i) s += "," + fmt17(r.motion_eq_residuals[k][i]);
        s += "\n";
    }
    return s;
}

} // namespace trapmodes
