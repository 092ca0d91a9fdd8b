// Acceptance checks 1-9; one PASS/FAIL line per criterion, details above it.
#include "g2patch/pde.hpp"
#include "g2patch/vertex.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace g2patch;

namespace {

std::string data_dir;

MultiPatchDomain fixture(const std::string& name) { return load_domain_file(data_dir + "/" + name + ".json"); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Result {
    int id;
    std::string what;
    bool pass;
    std::string summary;
};
std::vector<Result> results;

void report(int id, const std::string& what, bool pass, const std::string& summary) {
    std::printf("[%s] criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), summary.c_str());
    std::fflush(stdout);
    results.push_back({id, what, pass, summary});
}

// patch, edge, vertex; edge < 0 marks a merged edge+vertex cell
struct Row {
    long long total, patch, edge, vertex;
};

const std::map<std::pair<std::string, int>, std::vector<Row>> kTable1 = {
    {{"threepatch_fig9", 5},
     {{52, 27, -1, 25}, {145, 108, -1, 37}, {493, 432, 15, 46}, {1837, 1728, 63, 46}, {7117, 6912, 159, 46}}},
    {{"threepatch_fig9", 6},
     {{82, 48, -1, 34}, {247, 192, 9, 46}, {865, 768, 51, 46}, {3253, 3072, 135, 46}, {12637, 12288, 303, 46}}},
    {{"fivepatch_fig9", 5},
     {{81, 45, -1, 36}, {236, 180, -1, 56}, {816, 720, 25, 71}, {3056, 2880, 105, 71}, {11856, 11520, 265, 71}}},
    {{"fivepatch_fig9", 6},
     {{131, 80, -1, 51}, {406, 320, 15, 71}, {1436, 1280, 85, 71}, {5416, 5120, 225, 71}, {21056, 20480, 505, 71}}},
};

const std::map<std::pair<std::string, int>, Row> kTable2 = {
    {{"threepatch_fig9", 5}, {1399, 1336, 63, 13}},
    {{"threepatch_fig9", 6}, {2671, 2523, 135, 13}},
    {{"fivepatch_fig9", 5}, {2326, 2205, 121, 16}},
    {{"fivepatch_fig9", 6}, {4446, 4205, 225, 16}},
};

const std::map<std::pair<std::string, int>, std::array<double, 4>> kTable2Errors = {
    {{"threepatch_fig9", 5}, {3.21e-5, 4.3e-5, 2.01e-4, 2.39e-3}},
    {{"threepatch_fig9", 6}, {9.01e-7, 1.77e-6, 1.45e-5, 2.23e-4}},
    {{"fivepatch_fig9", 5}, {4.33e-5, 4.6e-5, 2.43e-4, 2.47e-3}},
    {{"fivepatch_fig9", 6}, {4.13e-7, 9.34e-7, 1.08e-5, 1.71e-4}},
};

const std::vector<std::string> kFixtures{"threepatch_fig9", "fivepatch_fig9"};

void criterion1() {
    int ok = 0, cases = 0;
    double worst = 0;
    for (const auto& [key, rows] : kTable1) {
        auto dom = fixture(key.first);
        for (int L = 0; L < 5; ++L) {
            auto t0 = std::chrono::steady_clock::now();
            SplineSpace sp(key.second, (1 << L) - 1);
            auto an = analyze_space(dom, sp);
            long long nul = nullity_exact<Fp1>(dom, sp, BoundaryCondition::none);
            double s = seconds_since(t0);
            worst = std::max(worst, s);
            const Row& want = rows[L];
            bool good = an.total == want.total && nul == want.total && an.patch_dim == want.patch && s < 120;
            if (want.edge < 0)
                good = good && an.total - an.patch_dim == want.vertex;
            else
                good = good && !an.merged && an.edge_dim == want.edge && an.vertex_dim == want.vertex;
            ++cases;
            ok += good;
            std::printf("  %s d=%d L=%d: %lld = %lld + %s (nullity %lld, %.2fs)%s\n", key.first.c_str(), key.second, L,
                        an.total, an.patch_dim,
                        an.merged ? (std::to_string(an.total - an.patch_dim) + " merged").c_str()
                                  : (std::to_string(an.edge_dim) + " + " + std::to_string(an.vertex_dim)).c_str(),
                        nul, s, good ? "" : "  MISMATCH");
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d levels match totals and splits, slowest %.2fs", ok, cases, worst);
    report(1, "dimension table", ok == cases, buf);
}

void criterion2() {
    int totals_ok = 0, splits_ok = 0, inconsistent = 0;
    std::string notes;
    for (const auto& [key, want] : kTable2) {
        auto dom = fixture(key.first);
        SplineSpace sp(key.second, 7);
        AnalysisOptions ao;
        ao.bc = BoundaryCondition::order2;
        auto an = analyze_space(dom, sp, ao);
        long long nul = nullity_exact<Fp1>(dom, sp, ao.bc);
        bool total_ok = an.total == want.total && nul == want.total;
        totals_ok += total_ok;
        bool printed_consistent = want.patch + want.edge + want.vertex == want.total;
        bool split_ok = an.patch_dim == want.patch && an.edge_dim == want.edge && an.vertex_dim == want.vertex;
        std::printf("  %s d=%d L=3: %lld = %lld + %lld + %lld, nullity %lld; printed %lld = %lld + %lld + %lld\n",
                    key.first.c_str(), key.second, an.total, an.patch_dim, an.edge_dim, an.vertex_dim, nul, want.total,
                    want.patch, want.edge, want.vertex);
        if (!printed_consistent) {
            ++inconsistent;
            std::printf("    printed split sums to %lld, not %lld: no split with the oracle total can match it\n",
                        want.patch + want.edge + want.vertex, want.total);
            notes += " " + key.first + " d=" + std::to_string(key.second);
        }
        splits_ok += split_ok;
    }
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "%d/4 totals match table and nullity; %d/4 splits match the printed ones (%d printed rows do not add up:%s)",
                  totals_ok, splits_ok, inconsistent, notes.c_str());
    report(2, "boundary-condition counts", totals_ok == 4 && splits_ok == 4, buf);
}

void criterion3() {
    std::mt19937_64 rng(0);
    int ok = 0;
    std::set<std::tuple<int, int, bool>> classes;
    const int N = 50;
    for (int i = 0; i < N; ++i) {
        auto dom = random_domain(i, rng);
        const int d = 5 + (i % 2);
        const int k = (7 - d) + (i / 2) % (3 - (7 - d) + 1);
        SplineSpace sp(d, k);
        auto an = analyze_space(dom, sp);
        long long nul = nullity_exact<Fp1>(dom, sp, BoundaryCondition::none);
        bool good = an.closed_available && an.closed_total == nul;
        ok += good;
        for (const auto& f : dom.fans) classes.insert({f.valency, f.type, f.boundary});
        if (!good)
            std::printf("  domain %d (P=%d, d=%d, k=%d): closed form %lld, nullity %lld\n", i, dom.num_patches(), d, k,
                        an.closed_total, nul);
    }
    std::printf("  vertex classes covered: %zu\n", classes.size());
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d random domains, %zu vertex classes", ok, N, classes.size());
    report(3, "closed-form total equals nullity", ok == N, buf);
}

void criterion4() {
    const std::vector<std::pair<int, int>> all{{3, 0}, {4, 0}, {5, 0}, {6, 0}, {5, 1}, {6, 1},
                                               {4, 2}, {5, 2}, {6, 2}, {7, 2}, {4, 4}};
    std::mt19937_64 rng(0);
    int total = 0, ok = 0, classes = 0;
    for (auto [nu, rho] : all)
        for (bool b : {false, true}) {
            if (!fan_admissible(nu, rho, b)) continue;
            ++classes;
            const int cf = closed_form_vertex_dim(nu, rho, b);
            int match = 0;
            for (int i = 0; i < 200; ++i) match += numeric_vertex_dim(random_fan({nu, rho, b}, rng), 5, 3) == cf;
            std::printf("  valency %d type %d %s: %d/200 (closed form %d)\n", nu, rho, b ? "boundary" : "inner", match,
                        cf);
            total += 200;
            ok += match;
        }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d fans in %d classes", ok, total, classes);
    report(4, "vertex dimensions", ok == total, buf);
}

void criterion5() {
    std::mt19937_64 rng(0);
    std::map<std::string, std::pair<int, int>> tally; // stated identity -> (pass, runs)
    std::map<std::string, double> worst;
    auto add = [&](const std::string& name, bool pass, double res) {
        auto& t = tally[name];
        t.first += pass;
        ++t.second;
        worst[name] = std::max(worst[name], res);
    };
    for (int i = 0; i < 100; ++i) {
        auto f = random_fan({4 + i % 5, 0, false}, rng);
        bool dj = true;
        for (int j = 1; j <= f.nu(); ++j) dj = dj && det_Dj(f, j) == det_Dj_closed(f, j);
        add("D_j product formula", dj, 0);
        add("A_0 determinant formula", det_A0(f) == det_A0_closed(f), 0);
    }
    struct Special {
        int nu, rho;
        bool zero_p;
    };
    for (auto s : {Special{4, 2, false}, Special{4, 2, true}, Special{5, 2, false}, Special{4, 4, false},
                   Special{4, 4, true}})
        for (int i = 0; i < 100; ++i) {
            auto f = random_special_fan(s.nu, s.rho, s.zero_p, rng);
            for (const auto& c : check_appendix_identities(f))
                if (c.detail != "diagnostic") add(c.name, c.pass, c.residual);
        }
    int good = 0;
    for (const auto& [name, t] : tally) {
        std::printf("  %-45s %3d/%d  max residual %.3g\n", name.c_str(), t.first, t.second, worst[name]);
        good += t.first == t.second;
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%zu identities hold on every fan", good, tally.size());
    report(5, "dependency identities", good == static_cast<int>(tally.size()), buf);
}

// Criterion 6 and 8 share the runs.
std::map<std::pair<std::string, int>, std::vector<RunReport>> fits;

void criterion6() {
    TrigField z;
    int ok = 0;
    double slowest = 0;
    for (const auto& name : kFixtures) {
        auto dom = fixture(name);
        for (int d : {5, 6}) {
            auto t0 = std::chrono::steady_clock::now();
            std::vector<RunReport> rows;
            for (int L = 0; L <= 4; ++L) rows.push_back(solve_l2(dom, d, L, z));
            fill_rates(rows);
            double s = seconds_since(t0);
            slowest = std::max(slowest, s);
            for (const auto& r : rows) std::printf("  %s %s\n", name.c_str(), csv_row(r).c_str());
            bool good = rows.back().rate0 >= d + 0.7 && s <= 600;
            ok += good;
            std::printf("  %s d=%d: last rate %.3f (needs %.1f), %.1fs\n", name.c_str(), d, rows.back().rate0, d + 0.7, s);
            fits[{name, d}] = rows;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/4 (domain, d) reach rate d+0.7, slowest %.0fs", ok, slowest);
    report(6, "L2 convergence", ok == 4, buf);
}

void criterion7() {
    int ok = 0;
    for (const auto& name : kFixtures) {
        auto dom = fixture(name);
        auto m = manufactured_solution(dom, Rational(1));
        ManufacturedField u(m);
        ManufacturedRhs f(m);
        PdeOptions opt;
        opt.condition = false;
        for (int d : {5, 6}) {
            std::vector<RunReport> rows;
            for (int L = 1; L <= 3; ++L) rows.push_back(solve_triharmonic(dom, d, L, u, f, opt));
            bool decreasing = true;
            for (std::size_t i = 1; i < rows.size(); ++i)
                for (int j = 0; j < 4; ++j) decreasing = decreasing && rows[i].err[j] < rows[i - 1].err[j];
            const auto& paper = kTable2Errors.at({name, d});
            bool close = true;
            for (int j = 0; j < 4; ++j) {
                double r = rows.back().err[j] / paper[j];
                close = close && r >= 0.01 && r <= 100;
            }
            for (const auto& r : rows) std::printf("  %s %s\n", name.c_str(), csv_row(r).c_str());
            std::printf("  %s d=%d L=3: %.3g %.3g %.3g %.3g vs table %.3g %.3g %.3g %.3g%s%s\n", name.c_str(), d,
                        rows.back().err[0], rows.back().err[1], rows.back().err[2], rows.back().err[3], paper[0],
                        paper[1], paper[2], paper[3], decreasing ? "" : "  NOT DECREASING", close ? "" : "  OFF");
            ok += decreasing && close;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/4 decreasing and within x100 of the table at L=3", ok);
    report(7, "triharmonic errors", ok == 4, buf);
}

void criterion8() {
    int ok = 0, pairs = 0;
    double worst = 0;
    for (const auto& [key, rows] : fits)
        for (std::size_t i = 1; i < rows.size(); ++i) {
            double r = rows[i].cond / rows[i - 1].cond;
            worst = std::max(worst, r);
            ++pairs;
            ok += r <= 8;
            std::printf("  %s d=%d L=%d->%d: %.4g / %.4g = %.3f%s\n", key.first.c_str(), key.second, rows[i - 1].level,
                        rows[i].level, rows[i].cond, rows[i - 1].cond, r, r <= 8 ? "" : "  > 8");
        }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d level pairs with ratio <= 8, worst %.2f", ok, pairs, worst);
    report(8, "conditioning growth", pairs == 16 && ok == pairs, buf);
}

void criterion9() {
    std::mt19937_64 rng(0);
    int ok = 0, total = 0;
    double worst = 0;
    for (const auto& name : kFixtures) {
        auto dom = fixture(name);
        for (int d : {5, 6}) {
            const int L = 2;
            SplineSpace sp(d, (1 << L) - 1);
            auto B = build_basis(dom, d, L);
            std::vector<int> ids(B.size());
            std::iota(ids.begin(), ids.end(), 0);
            std::shuffle(ids.begin(), ids.end(), rng);
            ids.resize(20);
            for (int f : ids) {
                std::uniform_real_distribution<double> U(0, 1);
                std::uniform_int_distribution<int> E(0, static_cast<int>(dom.interfaces.size()) - 1);
                // physical partials on both sides, order by order
                std::vector<std::array<Jet3, 2>> jets;
                for (int p = 0; p < 20; ++p) {
                    const auto& e = dom.interfaces[E(rng)];
                    const double t = U(rng);
                    std::array<Jet3, 2> pair;
                    int side = 0;
                    for (auto [l, V, u0] : {std::tuple{e.l, e.vl, 1}, std::tuple{e.lp, e.vr, 0}}) {
                        auto xi = V.own_point(u0, t);
                        auto par = evaluate_member(B, sp, f, l, xi[0], xi[1], 2);
                        Jet3 q{};
                        std::copy(par.begin(), par.end(), q.begin());
                        pair[side++] = pushforward_derivatives(dom, l, xi[0], xi[1], q);
                    }
                    jets.push_back(pair);
                }
                std::array<double, 3> scale{}, jump{};
                for (const auto& pr : jets)
                    for (int m = 0; m <= 2; ++m)
                        for (int i = m * (m + 1) / 2; i < (m + 1) * (m + 2) / 2; ++i) {
                            scale[m] = std::max({scale[m], std::abs(pr[0][i]), std::abs(pr[1][i])});
                            jump[m] = std::max(jump[m], std::abs(pr[0][i] - pr[1][i]));
                        }
                double rel = 0;
                for (int m = 0; m <= 2; ++m)
                    if (scale[m] > 0) rel = std::max(rel, jump[m] / scale[m]);
                worst = std::max(worst, rel);
                ++total;
                ok += rel <= 1e-7;
            }
            std::printf("  %s d=%d L=%d: worst relative jump so far %.3g\n", name.c_str(), d, L, worst);
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d functions with jumps <= 1e-7, worst %.3g", ok, total, worst);
    report(9, "C2 smoothness across interfaces", ok == total, buf);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    data_dir = G2PATCH_TEST_DATA;
    std::vector<int> only;
    app.add_option("--data", data_dir, "fixture directory");
    app.add_option("--only", only, "run selected criteria");
    CLI11_PARSE(app, argc, argv);
    const std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                 criterion6, criterion7, criterion8, criterion9};
    for (int i = 1; i <= 9; ++i) {
        if (!only.empty() && std::find(only.begin(), only.end(), i) == only.end()) continue;
        if (i == 8 && fits.empty() && (only.empty() || std::find(only.begin(), only.end(), 6) == only.end()))
            criterion6();
        auto t0 = std::chrono::steady_clock::now();
        try {
            all[i - 1]();
        } catch (const std::exception& e) {
            report(i, "exception", false, e.what());
        }
        std::printf("  (%.1fs)\n", seconds_since(t0));
    }
    std::printf("\nsummary\n");
    int failed = 0;
    for (const auto& r : results) {
        std::printf("%s %d %s\n", r.pass ? "PASS" : "FAIL", r.id, r.what.c_str());
        failed += !r.pass;
    }
    return failed == 0 ? 0 : 1;
}
