// trapmodes: command-line front end for trace tables, level-line plots,
// structure synthesis and verification.
//
// Exit codes: 0 success / verification passed, 1 verification or synthesis
// failure, 2 usage or schema error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trapmodes/trapmodes.hpp"

namespace fs = std::filesystem;
using namespace trapmodes;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s, const char* what)
{
    std::vector<double> out;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (tok.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad number in ") + what + ": '" + tok + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(what) + " is empty");
    return out;
}

struct Common {
    int m = 1;
    double omega = 1.0;
    double gravity = 1.0;
    std::string out = "out";

    ModeParams mode() const
    {
        if (m < 1) throw UsageError("--m must be >= 1");
        if (!(omega > 0.0) || !(gravity > 0.0)) throw UsageError("--omega and --gravity must be positive");
        return ModeParams::make(m, omega, gravity);
    }
};

int cmd_zeros(int n_max, const std::string& out)
{
    if (n_max < 1) throw UsageError("--n-max must be >= 1");
    std::string csv = "m,j1m,j0m,asymptote,y1_at_j1m,y1_asymptotic\n";
    std::printf("%4s %22s %22s %22s %22s %22s\n", "m", "j_{1,m}", "j_{0,m}", "pi(m+1/4)", "Y1(j_{1,m})",
                "(-1)^(m+1)sqrt(2/(pi^2 m))");
    for (int m = 1; m <= n_max; ++m) {
        const double j1 = bessel_zero({ZeroFamily::J1, m}), j0 = bessel_zero({ZeroFamily::J0, m});
        const double asym = std::numbers::pi * (m + 0.25);
        const double y1 = bessel(BesselKind::Y, 1, j1);
        const double y1a = (m % 2 == 1 ? 1.0 : -1.0) * std::sqrt(2.0 / (std::numbers::pi * std::numbers::pi * m));
        std::printf("%4d %22.15f %22.15f %22.15f %22.15f %22.15f\n", m, j1, j0, asym, y1, y1a);
        csv += std::to_string(m) + "," + fmt17(j1) + "," + fmt17(j0) + "," + fmt17(asym) + "," + fmt17(y1) + "," +
               fmt17(y1a) + "\n";
    }
    if (!out.empty()) write_atomic(out, csv);
    return 0;
}

int cmd_trace(const Common& c, double H, double rho_max, int samples)
{
    if (!(rho_max > 0.0)) throw UsageError("--rho-max must be positive");
    if (samples < 100) throw UsageError("--samples must be >= 100");
    if (!(H >= 0.0)) throw UsageError("--heave must be >= 0");
    const auto mp = c.mode();
    if (!(rho_max > mp.rho_r)) throw UsageError("--rho-max must exceed the ring radius " + fmt17(mp.rho_r));
    const auto tr = free_surface_trace(mp, H, rho_max, samples);
    fs::path out = c.out;
    if (out.extension() != ".csv") out /= "trace_m" + std::to_string(mp.m) + ".csv";
    write_atomic(out, trace_csv(tr));
    std::printf("wrote %zu samples to %s\n", tr.size(), out.string().c_str());
    return 0;
}

int cmd_curves(const Common& c, double H, const std::string& levels, double rho_max)
{
    if (!(H >= 0.0)) throw UsageError("--heave must be >= 0");
    const auto mp = c.mode();
    if (rho_max <= 0.0) rho_max = std::max(6.0, mp.rho_r + 3.0);
    if (!(rho_max > mp.rho_r)) throw UsageError("--rho-max must exceed the ring radius");

    std::optional<StagnationPoint> sp;
    try {
        sp = find_stagnation(mp, H);
    } catch (const NotFound&) {
    }
    std::vector<std::pair<std::string, double>> lv;
    {
        std::stringstream in(levels);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok == "critical") {
                if (!sp) throw UsageError("no stagnation point: 'critical' level unavailable");
                lv.push_back({tok, sp->level});
            } else {
                lv.push_back({tok, parse_list(tok, "--levels")[0]});
            }
        }
        if (lv.empty()) throw UsageError("--levels is empty");
    }
    std::vector<SvgCurve> svg;
    fs::path dir = c.out;
    int failures = 0;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        const double v = lv[i].second;
        std::vector<LevelCurve> curves;
        bool critical = false;
        try {
            if (sp && std::abs(v - sp->level) <= 5e-3 * std::max(1.0, std::abs(v))) {
                critical = true;
                curves = trace_critical_curves(mp, H, *sp);
            } else {
                curves = find_level_curves(mp, H, v, rho_max);
            }
            if (curves.empty()) throw NotFound("no level line meets the free surface in range");
        } catch (const Error& e) {
            std::fprintf(stderr, "level %s: %s\n", lv[i].first.c_str(), e.what());
            ++failures;
            continue;
        }
        for (std::size_t j = 0; j < curves.size(); ++j) {
            const auto name = "curve_" + std::to_string(i) + "_" + std::to_string(j) + ".csv";
            write_atomic(dir / name, curve_csv(curves[j]));
            SvgCurve sc;
            sc.points = curves[j].points;
            sc.bold = v == 0.0;
            sc.dashed = critical;
            if (critical) sc.color = "#b03a2e";
            svg.push_back(std::move(sc));
            std::printf("level %-12s curve %zu: %zu points, ends %s/%s%s\n", lv[i].first.c_str(), j,
                        curves[j].points.size(), end_kind_name(curves[j].left_end.kind).c_str(),
                        end_kind_name(curves[j].right_end.kind).c_str(), critical ? " (critical)" : "");
        }
    }
    SvgFrame fr;
    fr.rho_max = rho_max;
    fr.depth = 0.5 * rho_max;
    write_atomic(dir / "curves.svg", meridional_svg(svg, fr, {}, mp.rho_r));
    if (sp) std::printf("stagnation point (%.6f, %.6f) level %.6f\n", sp->location.rho, sp->location.eta, sp->level);
    return failures == int(lv.size()) ? 1 : 0;
}

int cmd_build(const Common& c, const std::string& heave)
{
    const auto h = parse_list(heave, "--heave");
    for (double x : h)
        if (!(x >= 0.0)) throw UsageError("heave amplitudes must be >= 0");
    if (h.size() < 2) throw UsageError("--heave needs at least two amplitudes");
    const auto mp = c.mode();
    auto s = synthesize(mp, h);
    s.h_max = estimate_h_max(mp, int(h.size()));
    fs::path dir = c.out;
    write_atomic(dir / "structure.txt", structure_document(s));
    write_atomic(dir / "structure.svg", structure_svg(s));
    for (std::size_t k = 0; k < s.bodies.size(); ++k) {
        const auto& b = s.bodies[k];
        std::printf("body %zu: H = %g, level = %.10g, waterline [%.6f, %.6f], lowest %.6f%s\n", k, b.H,
                    b.wetted.level, b.inner_radius, b.outer_radius, lowest_point(b),
                    b.wetted.encloses_ring ? ", encloses ring" : "");
    }
    std::printf("H_max(m=%d, N=%zu) ~ %.4g\nwrote %s\n", mp.m, h.size(), s.h_max,
                (dir / "structure.txt").string().c_str());
    return 0;
}

int cmd_verify(const std::string& doc, const Common& c, double tol_bc, double tol_motion)
{
    const auto s = parse_structure_document(read_file(doc));
    VerifyTolerances tol;
    tol.bc = tol_bc;
    tol.motion = tol_motion;
    const auto r = verify_structure(s, tol);
    fs::path dir = c.out;
    write_atomic(dir / "report.txt", report_document(r, s.mode));
    write_atomic(dir / "residuals.csv", residual_csv(r));
    for (std::size_t k = 0; k < r.bc_residuals.size(); ++k)
        std::printf("body %zu: kinematic %.3e%s, heave %.3e\n", k, r.bc_residuals[k],
                    r.bc_residuals[k] > tol.bc ? " [exceeds tolerance]" : "", r.motion_eq_residuals[k][0]);
    for (const auto& e : r.equipartition)
        std::printf("equipartition b=%g d=%g gap %.3e\n", e.domain.b, e.domain.d, e.gap);
    std::printf("far-field exponent %.3f\n%s\n", r.far_field_exponent, r.passed ? "PASSED" : "FAILED");
    return r.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Trapped modes in water waves: traces, level lines, structures and their verification"};
    app.set_config("--config", "", "key-value config file; command-line flags take precedence");
    app.require_subcommand(1);

    Common c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--m", c.m, "mode index m >= 1")->capture_default_str();
        sub->add_option("--omega", c.omega, "angular frequency")->capture_default_str();
        sub->add_option("--gravity", c.gravity, "gravitational acceleration")->capture_default_str();
        sub->add_option("--out", c.out, "output file or directory")->capture_default_str();
    };

    int n_max = 10;
    std::string zeros_out;
    auto* zeros = app.add_subcommand("zeros", "Bessel zeros j_{1,m}, j_{0,m} and their asymptotics");
    zeros->add_option("--n-max", n_max, "largest m")->capture_default_str();
    zeros->add_option("--out", zeros_out, "optional CSV file");

    double H = 0.0, rho_max = 0.0;
    int samples = 2000;
    auto* trace = app.add_subcommand("trace", "free-surface trace of psi^(H) as CSV");
    add_common(trace);
    trace->add_option("--heave", H, "heave amplitude H >= 0")->capture_default_str();
    trace->add_option("--rho-max", rho_max, "right end of the sampled range")->required();
    trace->add_option("--samples", samples, "number of samples")->capture_default_str();

    std::string levels;
    auto* curves = app.add_subcommand("curves", "level lines psi^(H) = v as CSV plus an SVG plot");
    add_common(curves);
    curves->add_option("--heave", H, "heave amplitude H >= 0")->capture_default_str();
    curves->add_option("--levels", levels, "comma-separated levels; 'critical' = stagnation level")->required();
    curves->add_option("--rho-max", rho_max, "plot range (default max(6, rho_r + 3))");

    std::string heave_list;
    auto* build = app.add_subcommand("build", "synthesize a trapping structure");
    add_common(build);
    build->add_option("--heave", heave_list, "comma-separated heave amplitudes, one per body")->required();

    std::string doc;
    double tol_bc = 1e-6, tol_motion = 1e-5;
    auto* verify = app.add_subcommand("verify", "verify a structure document");
    verify->add_option("--out", c.out, "output directory")->capture_default_str();
    verify->add_option("structure", doc, "structure document written by build")->required()->check(CLI::ExistingFile);
    verify->add_option("--tol-bc", tol_bc, "kinematic residual tolerance")->capture_default_str();
    verify->add_option("--tol-motion", tol_motion, "heave equation tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*zeros) return cmd_zeros(n_max, zeros_out);
        if (*trace) return cmd_trace(c, H, rho_max, samples);
        if (*curves) return cmd_curves(c, H, levels, rho_max);
        if (*build) return cmd_build(c, heave_list);
        if (*verify) return cmd_verify(doc, c, tol_bc, tol_motion);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 2;
    } catch (const InsufficientExtrema& e) {
        std::fprintf(stderr, "insufficient extrema: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
