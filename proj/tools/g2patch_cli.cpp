#include "g2patch/parallel.hpp"
#include "g2patch/pde.hpp"
#include "g2patch/vertex.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace g2patch;

namespace {

constexpr int kOk = 0, kUsage = 1, kVerify = 2, kNumeric = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#ifndef G2PATCH_DEFAULT_DATA
#define G2PATCH_DEFAULT_DATA ""
#endif

// A path, or a fixture name looked up in $G2PATCH_DATA and the source tree.
std::string resolve_domain(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) return arg;
    std::vector<std::string> dirs;
    if (const char* env = std::getenv("G2PATCH_DATA")) dirs.emplace_back(env);
    dirs.emplace_back(G2PATCH_DEFAULT_DATA);
    for (const auto& d : dirs) {
        if (d.empty()) continue;
        for (const std::string& name : {arg, arg + ".json"}) {
            fs::path p = fs::path(d) / name;
            if (fs::exists(p)) return p.string();
        }
    }
    throw UsageError("domain not found: " + arg);
}

std::pair<int, int> parse_levels(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            int L = std::stoi(s);
            return {L, L};
        }
        int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
        if (a < 0 || b < a) throw UsageError("bad level range " + s);
        return {a, b};
    } catch (const std::logic_error&) {
        throw UsageError("bad level range " + s);
    }
}

BoundaryCondition parse_bc(const std::string& s) {
    if (s == "none") return BoundaryCondition::none;
    if (s == "order2") return BoundaryCondition::order2;
    throw UsageError("unknown boundary condition " + s);
}

struct Common {
    std::string domain;
    int d = 5;
    int L = -1;
    std::string levels;
    std::string bc = "none";
    int quad = -1;
    int threads = 0;
    std::string out;
    std::string amplitude = "1";
    std::string target = "trig";
    bool no_timing = false;
};

int threads_of(const Common& c) { return c.threads > 0 ? c.threads : default_threads(); }

void check_degree(int d) {
    if (d != 5 && d != 6) throw UsageError("degree must be 5 or 6");
}

std::pair<int, int> level_range(const Common& c) {
    if (!c.levels.empty()) return parse_levels(c.levels);
    if (c.L >= 0) return {c.L, c.L};
    throw UsageError("give -L or --levels");
}

std::ostream& output(const Common& c, std::ofstream& file) {
    if (c.out.empty()) return std::cout;
    file.open(c.out);
    if (!file) throw UsageError("cannot write " + c.out);
    return file;
}

nlohmann::json analysis_json(const SpaceAnalysis& an) {
    nlohmann::json j;
    j["d"] = an.d;
    j["k"] = an.k;
    j["n"] = an.n;
    j["bc"] = an.bc == BoundaryCondition::order2 ? "order2" : "none";
    j["merged"] = an.merged;
    j["total"] = an.total;
    j["patch"] = an.patch_dim;
    j["edge"] = an.edge_dim;
    j["vertex"] = an.merged ? an.xi_dim : an.vertex_dim;
    j["corner_blocks"] = an.xi_dim;
    if (an.closed_available)
        j["closed_form"] = {{"total", an.closed_total},
                            {"patch", an.closed_patch},
                            {"edge", an.closed_edge},
                            {"vertex", an.closed_vertex}};
    for (const auto& p : an.patches)
        j["patches"].push_back({{"patch", p.patch},
                                {"dim", p.cols.size()},
                                {"closed_form", p.closed_form},
                                {"r_gamma", p.r_gamma},
                                {"r_v", p.r_v}});
    for (const auto& e : an.edges)
        j["edges"].push_back({{"edge", e.edge},
                              {"a", e.a},
                              {"b", e.b},
                              {"dim", e.dim},
                              {"mu", e.mu},
                              {"dim_v0", e.dim_v0},
                              {"closed_form", e.closed_form}});
    for (const auto& v : an.vertices)
        j["vertices"].push_back({{"vertex", v.vertex}, {"dim", v.dim}, {"closed_form", v.closed_form}});
    j["notes"] = an.notes;
    return j;
}

int cmd_analyze(const Common& c, bool verify, const std::string& json_out, const std::string& dump) {
    check_degree(c.d);
    auto [l0, l1] = level_range(c);
    auto dom = load_domain_file(resolve_domain(c.domain));
    for (const auto& w : dom.warnings) std::cerr << "warning: " << w << '\n';
    int rc = kOk;
    nlohmann::json all = nlohmann::json::array();
    for (int L = l0; L <= l1; ++L) {
        SplineSpace sp(c.d, (1 << L) - 1);
        AnalysisOptions ao;
        ao.bc = parse_bc(c.bc);
        ao.threads = threads_of(c);
        auto an = analyze_space(dom, sp, ao);
        std::cout << "d=" << c.d << " L=" << L << " k=" << sp.k << " n=" << sp.n << " bc=" << c.bc << '\n';
        for (const auto& p : an.patches)
            std::cout << "  patch " << p.patch << ": " << p.cols.size() << " (closed form " << p.closed_form
                      << ", boundary sides " << p.r_gamma << ", boundary corners " << p.r_v << ")\n";
        for (const auto& e : an.edges) {
            std::cout << "  edge " << e.edge << " [" << e.a << "-" << e.b << "]: " << e.dim;
            if (e.closed_form >= 0) std::cout << " (closed form " << e.closed_form << ", mu " << e.mu << ")";
            std::cout << '\n';
        }
        if (!an.merged)
            for (const auto& v : an.vertices) {
                std::cout << "  vertex " << v.vertex << ": " << v.dim;
                if (v.closed_form >= 0) std::cout << " (closed form " << v.closed_form << ")";
                std::cout << '\n';
            }
        if (an.merged)
            std::cout << "  total " << an.total << " = " << an.patch_dim << " + " << an.edge_dim + an.xi_dim
                      << " (edge and vertex merged)\n";
        else
            std::cout << "  total " << an.total << " = " << an.patch_dim << " + " << an.edge_dim << " + "
                      << an.vertex_dim << '\n';
        if (an.closed_available)
            std::cout << "  closed form " << an.closed_total << " = " << an.closed_patch << " + " << an.closed_edge
                      << " + " << an.closed_vertex << '\n';
        for (const auto& n : an.notes) std::cout << "  note: " << n << '\n';
        if (verify) {
            long long nul = nullity_exact<Fp1>(dom, sp, ao.bc);
            bool ok = nul == an.total && (!an.closed_available || an.closed_total == an.total);
            std::cout << "  nullity(T) " << nul << (ok ? " verified" : " MISMATCH") << '\n';
            if (!ok) {
                std::cout << "  diff: blocks " << an.total - nul;
                if (an.closed_available)
                    std::cout << ", closed form patch " << an.closed_patch - an.patch_dim << " edge "
                              << an.closed_edge - an.edge_dim << " vertex " << an.closed_vertex - an.vertex_dim;
                std::cout << '\n';
                rc = kVerify;
            }
        }
        if (!dump.empty() && L == l1) write_matrix_market(assemble_T(dom, sp, ao.bc), dump);
        auto j = analysis_json(an);
        j["L"] = L;
        all.push_back(j);
    }
    if (!json_out.empty()) {
        std::ofstream f(json_out);
        if (!f) throw UsageError("cannot write " + json_out);
        f << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
    }
    return rc;
}

int cmd_basis(const Common& c, const std::string& header) {
    check_degree(c.d);
    if (c.L < 0) throw UsageError("give -L");
    auto dom = load_domain_file(resolve_domain(c.domain));
    auto bc = parse_bc(c.bc);
    auto B = build_basis(dom, c.d, c.L, {bc, threads_of(c)});
    SplineSpace sp(c.d, (1 << c.L) - 1);
    double res = basis_residual(B, assemble_T(dom, sp, bc));
    std::cout << "functions " << B.size() << " = " << B.count(Tag::patch) << " patch + " << B.count(Tag::edge)
              << " edge + " << B.count(Tag::vertex) << " vertex + " << B.count(Tag::merged) << " merged\n";
    std::cout << "max |T b| " << res << '\n';
    if (!c.out.empty()) export_basis_csv(B, c.out);
    if (!header.empty()) {
        std::ofstream f(header);
        if (!f) throw UsageError("cannot write " + header);
        f << basis_header_json(B) << '\n';
    }
    return res <= 1e-10 ? kOk : kVerify;
}

std::unique_ptr<ScalarField> make_target(const Common& c, const MultiPatchDomain& dom) {
    if (c.target == "trig") return std::make_unique<TrigField>();
    if (c.target == "manufactured")
        return std::make_unique<ManufacturedField>(manufactured_solution(dom, parse_rational(c.amplitude)));
    throw UsageError("unknown target " + c.target);
}

// Runs one problem over a level range, one CSV row per level; a failing level ends the table
// with a marker row.
int run_levels(const Common& c, bool triharmonic) {
    check_degree(c.d);
    auto [l0, l1] = level_range(c);
    auto dom = load_domain_file(resolve_domain(c.domain));
    PdeOptions opt;
    opt.quad = c.quad;
    opt.threads = threads_of(c);
    std::ofstream file;
    std::ostream& os = output(c, file);
    os << csv_header() << '\n';
    std::vector<RunReport> rows;
    int rc = kOk;
    auto m = manufactured_solution(dom, parse_rational(c.amplitude));
    for (int L = l0; L <= l1; ++L) {
        try {
            if (triharmonic) {
                ManufacturedField u(m);
                ManufacturedRhs f(m);
                rows.push_back(solve_triharmonic(dom, c.d, L, u, f, opt));
            } else {
                auto t = make_target(c, dom);
                rows.push_back(solve_l2(dom, c.d, L, *t, opt));
            }
        } catch (const NumericalError& e) {
            os << "# failed at level " << L << ": " << e.what() << '\n';
            rc = kNumeric;
            break;
        }
        fill_rates(rows);
        if (c.no_timing) rows.back().seconds = 0;
        os << csv_row(rows.back()) << '\n' << std::flush;
    }
    return rc;
}

int cmd_condition(const Common& c) {
    check_degree(c.d);
    auto [l0, l1] = level_range(c);
    auto dom = load_domain_file(resolve_domain(c.domain));
    auto bc = parse_bc(c.bc);
    PdeOptions opt;
    opt.quad = c.quad;
    opt.threads = threads_of(c);
    std::ofstream file;
    std::ostream& os = output(c, file);
    os << "level,d,total,cond,ratio\n";
    double prev = 0;
    for (int L = l0; L <= l1; ++L) {
        SplineSpace sp(c.d, (1 << L) - 1);
        auto B = build_basis(dom, c.d, L, {bc, opt.threads});
        double k;
        try {
            k = scaled_condition(assemble_mass(dom, sp, B, opt));
        } catch (const NumericalError& e) {
            os << "# failed at level " << L << ": " << e.what() << '\n';
            return kNumeric;
        }
        char buf[128];
        if (prev > 0)
            std::snprintf(buf, sizeof buf, "%d,%d,%d,%.16g,%.16g", L, c.d, B.size(), k, k / prev);
        else
            std::snprintf(buf, sizeof buf, "%d,%d,%d,%.16g,nan", L, c.d, B.size(), k);
        os << buf << '\n' << std::flush;
        prev = k;
    }
    return kOk;
}

struct VertexCheckConfig {
    int random = 20;
    int nu = 0, rho = -1;
    bool boundary = false, both = false, identities = false;
    int d = 5, k = 3;
    unsigned long long seed = 0;
};

int cmd_vertex_check(const VertexCheckConfig& v) {
    std::vector<FanSpec> classes;
    const std::vector<std::pair<int, int>> all{{3, 0}, {4, 0}, {5, 0}, {6, 0}, {5, 1}, {6, 1},
                                               {4, 2}, {5, 2}, {6, 2}, {7, 2}, {4, 4}};
    for (auto [nu, rho] : all) {
        if (v.nu > 0 && nu != v.nu) continue;
        if (v.rho >= 0 && rho != v.rho) continue;
        for (bool b : {false, true}) {
            if (!v.both && b != v.boundary) continue;
            if (fan_admissible(nu, rho, b)) classes.push_back({nu, rho, b});
        }
    }
    if (v.nu > 0 && v.rho >= 0 && classes.empty() && !fan_admissible(v.nu, v.rho, v.boundary))
        throw UsageError("inadmissible class (" + std::to_string(v.nu) + ", " + std::to_string(v.rho) + ")");
    if (classes.empty()) throw UsageError("no vertex class selected");
    std::mt19937_64 rng(v.seed);
    int rc = kOk;
    for (const auto& s : classes) {
        const int cf = closed_form_vertex_dim(s.nu, s.rho, s.boundary);
        int match = 0;
        for (int i = 0; i < v.random; ++i) {
            auto f = random_fan(s, rng);
            int num = numeric_vertex_dim(f, v.d, v.k);
            if (num == cf) ++match;
            else
                std::cout << "  mismatch: numeric " << num << " on fan " << i << '\n';
        }
        std::cout << "valency " << s.nu << " type " << s.rho << (s.boundary ? " boundary" : " inner") << ": "
                  << match << "/" << v.random << " match closed form " << cf << '\n';
        if (match != v.random) rc = kVerify;
    }
    if (v.identities) {
        struct Special {
            int nu, rho;
            bool zero_p;
        };
        for (auto sp : {Special{4, 2, false}, Special{4, 2, true}, Special{5, 2, false}, Special{4, 4, false},
                        Special{4, 4, true}}) {
            auto f = random_special_fan(sp.nu, sp.rho, sp.zero_p, rng);
            for (const auto& c : check_appendix_identities(f, v.d, v.k))
                std::cout << "  " << (c.pass ? "ok   " : "FAIL ") << c.name << " residual " << c.residual
                          << (c.detail.empty() ? "" : "  " + c.detail) << '\n';
        }
        std::mt19937_64 rng2(v.seed + 1);
        for (int nu = 4; nu <= 8; ++nu) {
            auto f = random_fan({nu, 0, false}, rng2);
            bool ok = det_A0(f) == det_A0_closed(f);
            for (int j = 1; j <= nu; ++j) ok = ok && det_Dj(f, j) == det_Dj_closed(f, j);
            std::cout << "  " << (ok ? "ok   " : "FAIL ") << "determinants at valency " << nu << '\n';
        }
    }
    return rc;
}

int cmd_dump(const Common& c) {
    check_degree(c.d);
    if (c.L < 0) throw UsageError("give -L");
    if (c.out.empty()) throw UsageError("give -o");
    auto dom = load_domain_file(resolve_domain(c.domain));
    SplineSpace sp(c.d, (1 << c.L) - 1);
    auto sys = assemble_T(dom, sp, parse_bc(c.bc));
    write_matrix_market(sys, c.out);
    std::cout << sys.T.rows() << " x " << sys.T.cols() << ", " << sys.T.nonZeros() << " nonzeros\n";
    return kOk;
}

void add_common(CLI::App* app, Common& c, bool levels, bool out = true) {
    app->add_option("domain", c.domain, "domain JSON file or fixture name")->required();
    app->add_option("-d,--degree", c.d, "spline degree (5 or 6)");
    app->add_option("-L,--level", c.L, "refinement level, k = 2^L - 1");
    if (levels) app->add_option("--levels", c.levels, "level range a..b");
    app->add_option("--bc", c.bc, "boundary condition: none or order2");
    app->add_option("--threads", c.threads, "worker threads (default G2PATCH_THREADS or 1)");
    if (out) app->add_option("-o,--output", c.out, "output file");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"C2 isogeometric spaces on bilinear multi-patch domains"};
    app.require_subcommand(1);
    Common c;
    bool verify = false;
    std::string json_out, header, dump_path;
    VertexCheckConfig vc;
    std::string problem = "fit";

    auto* analyze = app.add_subcommand("analyze", "dimension report");
    add_common(analyze, c, true, false);
    analyze->add_flag("--verify-nullspace", verify, "compare with the nullity of the full system");
    analyze->add_option("--json", json_out, "write the report as JSON");
    analyze->add_option("--dump-matrix", dump_path, "write T of the last level (Matrix Market)");

    auto* basis = app.add_subcommand("basis", "build and export a basis");
    add_common(basis, c, false);
    basis->add_option("--header", header, "JSON header file");

    auto* fit = app.add_subcommand("fit", "L2 approximation");
    add_common(fit, c, true);
    fit->add_option("--target", c.target, "trig or manufactured");
    fit->add_option("--amplitude", c.amplitude, "manufactured amplitude (rational)");
    fit->add_option("--quad", c.quad, "Gauss points per direction");
    fit->add_flag("--no-timing", c.no_timing, "write 0 in the seconds column");

    auto* tri = app.add_subcommand("triharmonic", "triharmonic problem with a manufactured solution");
    add_common(tri, c, true);
    tri->add_option("--amplitude", c.amplitude, "manufactured amplitude (rational)");
    tri->add_option("--quad", c.quad, "Gauss points per direction");
    tri->add_flag("--no-timing", c.no_timing, "write 0 in the seconds column");

    auto* conv = app.add_subcommand("convergence", "fit or triharmonic over a level range");
    add_common(conv, c, true);
    conv->add_option("--problem", problem, "fit or triharmonic");
    conv->add_option("--target", c.target, "trig or manufactured");
    conv->add_option("--amplitude", c.amplitude, "manufactured amplitude (rational)");
    conv->add_option("--quad", c.quad, "Gauss points per direction");
    conv->add_flag("--no-timing", c.no_timing, "write 0 in the seconds column");

    auto* cond = app.add_subcommand("condition", "condition numbers of the scaled mass matrices");
    add_common(cond, c, true);
    cond->add_option("--quad", c.quad, "Gauss points per direction");

    auto* vcheck = app.add_subcommand("vertex-check", "vertex dimensions on random fans");
    vcheck->add_option("--random", vc.random, "fans per class");
    vcheck->add_option("--valency", vc.nu, "valency (default all)");
    vcheck->add_option("--type", vc.rho, "number of collinear windows (default all)");
    vcheck->add_flag("--boundary", vc.boundary, "boundary vertices");
    vcheck->add_flag("--all-kinds", vc.both, "inner and boundary vertices");
    vcheck->add_flag("--identities", vc.identities, "also evaluate the dependency identities");
    vcheck->add_option("-d,--degree", vc.d, "degree of the numeric check");
    vcheck->add_option("-k", vc.k, "inner knots of the numeric check");
    vcheck->add_option("--seed", vc.seed, "random seed");

    auto* dump = app.add_subcommand("dump-matrix", "write the constraint matrix (Matrix Market)");
    add_common(dump, c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    try {
        if (*analyze) return cmd_analyze(c, verify, json_out, dump_path);
        if (*basis) return cmd_basis(c, header);
        if (*fit) return run_levels(c, false);
        if (*tri) {
            if (c.bc != "none" && c.bc != "order2") throw UsageError("unknown boundary condition " + c.bc);
            return run_levels(c, true);
        }
        if (*conv) {
            if (problem != "fit" && problem != "triharmonic") throw UsageError("unknown problem " + problem);
            return run_levels(c, problem == "triharmonic");
        }
        if (*cond) return cmd_condition(c);
        if (*vcheck) return cmd_vertex_check(vc);
        if (*dump) return cmd_dump(c);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
