// Command-line front end: construct the cylinder and cone families, run
// parameter sweeps, export CSV/JSON/OBJ artifacts, and run the verification
// suite. All output is deterministic; floating-point values are printed with
// 17 significant digits.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "willmore/cone.hpp"
#include "willmore/geometry.hpp"
#include "willmore/obj_io.hpp"
#include "willmore/profile.hpp"
#include "willmore/quadrature.hpp"
#include "willmore/roots.hpp"
#include "willmore/verify.hpp"

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

void error_record(const std::string& msg) {
    std::cerr << "{\"error\": \"" << json_escape(msg) << "\"}\n";
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

struct Grid {
    double lo = 0, hi = 0;
    int n = 0;
};

Grid parse_grid(const std::string& s) {
    Grid g;
    char extra;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &g.lo, &g.hi, &g.n, &extra) != 3 ||
        !(g.lo > 0) || !(g.hi > g.lo) || g.n < 2)
        throw std::runtime_error("bad --grid '" + s + "': want lo:hi:n with 0 < lo < hi, n >= 2");
    return g;
}

/// Arc length of one quarter arc of the profile, so a per-period sample count
/// can be turned into an arc-length step.
double quarter_arc_length(double C) {
    const auto r = willmore::quad::integrate_improper(
        [C](double w) {
            return 1.0 / (std::sqrt(2.0 * C * w) * std::pow(1.0 + w * w, 0.75));
        },
        0.0, willmore::quad::infinity, {.sqrt_singularity_lower = true}, 1e-12);
    return r.value;
}

/// Config file support: JSON keys are long option names without the leading
/// dashes. The values are injected as synthetic flags ahead of the real
/// command line, so explicit flags win and unknown keys fail option parsing.
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw std::runtime_error("--config needs a file path");
            path = args[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        } else {
            rest.push_back(a);
        }
    }
    if (path.empty()) return rest;
    if (rest.empty()) throw std::runtime_error("--config requires a command on the command line");

    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read config file: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("config file must hold a JSON object");

    std::vector<std::string> out;
    out.push_back(rest.front());  // the command
    for (const auto& [key, value] : j.items()) {
        out.push_back("--" + key);
        if (value.is_string())
            out.push_back(value.get<std::string>());
        else
            out.push_back(value.dump());
    }
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

int cmd_profile(double C, int periods, int samples, const std::string& out_path) {
    const double step = 4.0 * quarter_arc_length(C) / static_cast<double>(samples);
    const auto p = willmore::profile::assemble_profile(C, periods, step);
    auto os = open_out(out_path);
    willmore::profile::write_profile_csv(os, p);
    return 0;
}

int cmd_cone(double a, int periods, const std::string& out_path) {
    const double c = willmore::cone::compute_c(a);
    const auto sol = willmore::cone::solve_curvature(a, 4.0 * c * periods);
    auto os = open_out(out_path);
    os << "s,H,Hp\n";
    for (const auto& s : sol.samples())
        os << fmt17(s.s) << ',' << fmt17(s.H) << ',' << fmt17(s.Hp) << '\n';
    return 0;
}

int cmd_sweep(const std::string& grid_spec, const std::string& out_path) {
    const Grid g = parse_grid(grid_spec);
    const auto as = willmore::roots::log_grid(g.lo, g.hi, static_cast<std::size_t>(g.n));
    const auto rows = willmore::cone::sweep(as);
    auto os = open_out(out_path);
    willmore::cone::write_sweep_csv(os, rows);
    return 0;
}

int cmd_closed_cones(int m, const std::string& grid_spec, const std::string& out_path) {
    const Grid g = parse_grid(grid_spec);
    const auto cands = willmore::cone::find_closed_cones(m, g.lo, g.hi, g.n);
    std::ostringstream os;
    os << "{\n  \"m\": " << m << ",\n  \"candidates\": [\n";
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto& c = cands[i];
        os << "    {\"a\": " << fmt17(c.a_star) << ", \"c\": " << fmt17(c.c_star)
           << ", \"T\": " << fmt17(c.T_star) << ", \"length\": " << fmt17(c.length)
           << ", \"margin_over_2pi\": " << fmt17(c.margin_over_2pi) << "}"
           << (i + 1 < cands.size() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    if (out_path.empty())
        std::cout << os.str();
    else
        open_out(out_path) << os.str();
    return 0;
}

int cmd_verify(const std::string& suite, double tol_floor, const std::string& out_path) {
    if (suite != "all") throw std::runtime_error("unknown suite '" + suite + "' (only: all)");
    auto report = willmore::verify::run_suite();
    if (tol_floor > 0)
        for (auto& c : report.checks)
            if (c.tolerance > 0) {
                c.tolerance = std::max(c.tolerance, tol_floor);
                c.pass = c.measured <= c.tolerance;
            }
    if (out_path.empty())
        willmore::verify::write_report_json(std::cout, report);
    else {
        auto os = open_out(out_path);
        willmore::verify::write_report_json(os, report);
    }
    return report.all_pass() ? 0 : 1;
}

int cmd_mesh(const std::string& surface, double C, int periods, int samples, double y_extent,
             int ny, double a, double s_span, double r0, double r1, int nr,
             const std::string& out_path, std::string fields_path) {
    willmore::geom::Mesh mesh;
    if (surface == "cylinder") {
        const double step = 4.0 * quarter_arc_length(C) / static_cast<double>(samples);
        const auto p = willmore::profile::assemble_profile(C, periods, step);
        mesh = willmore::geom::build_cylinder_mesh(p, y_extent, static_cast<std::size_t>(ny));
    } else if (surface == "cone") {
        double span = s_span;
        if (span <= 0) span = willmore::cone::compute_c(a);
        const auto curve = willmore::cone::solve_sphere_curve(a, -span, span);
        mesh = willmore::geom::build_cone_mesh(curve, r0, r1, static_cast<std::size_t>(nr));
    } else {
        throw std::runtime_error("unknown --surface '" + surface + "' (cylinder or cone)");
    }
    willmore::io::write_obj(out_path, mesh);
    if (fields_path.empty()) fields_path = out_path + ".csv";
    willmore::io::write_curvature_csv(fields_path, mesh);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "willmore: flat Willmore cylinders and Willmore cones -- construction, "
        "parameter sweeps, mesh export, and verification.\n"
        "A JSON config file (--config FILE, keys = long option names) supplies "
        "defaults; explicit flags override it."};
    app.require_subcommand(1);

    // profile
    double pr_c = 1.0;
    int pr_periods = 1, pr_samples = 256;
    std::string pr_out;
    auto* sp = app.add_subcommand("profile", "Periodic cylinder profile curve as CSV");
    sp->add_option("--c", pr_c, "profile parameter C")->check(CLI::PositiveNumber);
    sp->add_option("--periods", pr_periods, "number of period cells")->check(CLI::PositiveNumber);
    sp->add_option("--samples", pr_samples, "sample points per period")
        ->check(CLI::Range(16, 1 << 20));
    sp->add_option("--out", pr_out, "output CSV path")->required();

    // cone
    double cn_a = 1.0;
    int cn_periods = 1;
    std::string cn_out;
    auto* sc = app.add_subcommand("cone", "Cone generator curvature samples as CSV");
    sc->add_option("--a", cn_a, "crest amplitude a")->check(CLI::PositiveNumber);
    sc->add_option("--periods", cn_periods, "number of curvature periods")
        ->check(CLI::PositiveNumber);
    sc->add_option("--out", cn_out, "output CSV path")->required();

    // sweep
    std::string sw_grid = "0.001:100:50", sw_out;
    auto* ss = app.add_subcommand("sweep", "Sweep a over a log grid: c, energy, T as CSV");
    ss->add_option("--grid", sw_grid, "log grid lo:hi:n");
    ss->add_option("--out", sw_out, "output CSV path")->required();

    // closed-cones
    int cc_m = 2;
    std::string cc_grid = "0.1:50:48", cc_out;
    auto* scc = app.add_subcommand("closed-cones",
                                   "Closed-generator candidates for m arcs as JSON");
    scc->add_option("--m", cc_m, "number of arcs (>= 2)")->check(CLI::Range(2, 64));
    scc->add_option("--grid", cc_grid, "log grid lo:hi:n to scan");
    scc->add_option("--out", cc_out, "output JSON path (default stdout)");

    // verify
    std::string vf_suite = "all", vf_out;
    double vf_tol = 0.0;
    auto* sv = app.add_subcommand("verify", "Run the verification suite, report as JSON");
    sv->add_option("--suite", vf_suite, "suite name (all)");
    sv->add_option("--tol", vf_tol, "floor applied to the positive tolerances");
    sv->add_option("--out", vf_out, "report path (default stdout)");

    // mesh
    std::string ms_surface, ms_out, ms_fields;
    double ms_c = 1.0, ms_yext = 2.0, ms_a = 1.0, ms_span = 0.0, ms_r0 = 0.5, ms_r1 = 2.0;
    int ms_periods = 1, ms_samples = 256, ms_ny = 17, ms_nr = 9;
    auto* sm = app.add_subcommand("mesh", "Triangulated surface as OBJ + curvature CSV");
    sm->add_option("--surface", ms_surface, "cylinder or cone")->required();
    sm->add_option("--c", ms_c, "cylinder: profile parameter C")->check(CLI::PositiveNumber);
    sm->add_option("--periods", ms_periods, "cylinder: period cells")->check(CLI::PositiveNumber);
    sm->add_option("--samples", ms_samples, "cylinder: samples per period")
        ->check(CLI::Range(16, 1 << 20));
    sm->add_option("--y-extent", ms_yext, "cylinder: extrusion length")
        ->check(CLI::PositiveNumber);
    sm->add_option("--ny", ms_ny, "cylinder: rings along the extrusion")->check(CLI::Range(2, 4096));
    sm->add_option("--a", ms_a, "cone: crest amplitude")->check(CLI::PositiveNumber);
    sm->add_option("--s-span", ms_span, "cone: generator runs [-span, span] (0: one half period)");
    sm->add_option("--r0", ms_r0, "cone: inner radius (> 0)")->check(CLI::PositiveNumber);
    sm->add_option("--r1", ms_r1, "cone: outer radius");
    sm->add_option("--nr", ms_nr, "cone: radial rings")->check(CLI::Range(2, 4096));
    sm->add_option("--out", ms_out, "output OBJ path")->required();
    sm->add_option("--fields-out", ms_fields, "curvature CSV path (default OBJ path + .csv)");

    // Config-file values are injected ahead of the explicit flags, so a
    // repeated option must resolve to the last (explicit) occurrence.
    for (auto* sub : app.get_subcommands(nullptr))
        for (auto* opt : sub->get_options())
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config(args);
        // CLI11 consumes reversed argument lists.
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);

        if (sp->parsed()) return cmd_profile(pr_c, pr_periods, pr_samples, pr_out);
        if (sc->parsed()) return cmd_cone(cn_a, cn_periods, cn_out);
        if (ss->parsed()) return cmd_sweep(sw_grid, sw_out);
        if (scc->parsed()) return cmd_closed_cones(cc_m, cc_grid, cc_out);
        if (sv->parsed()) return cmd_verify(vf_suite, vf_tol, vf_out);
        if (sm->parsed())
            return cmd_mesh(ms_surface, ms_c, ms_periods, ms_samples, ms_yext, ms_ny, ms_a,
                            ms_span, ms_r0, ms_r1, ms_nr, ms_out, ms_fields);
        throw std::runtime_error("no command given");
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        error_record(e.what());
        return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
    } catch (const std::exception& e) {
        error_record(e.what());
        return 1;
    }
}
