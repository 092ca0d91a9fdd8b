#include "g2patch/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace g2patch {

namespace {

using Edge = std::pair<int, int>;
Edge key(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::runtime_error geometry_error(const std::string& msg) { return std::runtime_error("invalid domain: " + msg); }

// the two corners adjacent to i other than j
int other_adjacent(int i, int j) {
    int c1 = (i + 1) % 4, c2 = (i + 3) % 4;
    return c1 != j ? c1 : c2;
}

View make_view(const std::array<int, 4>& patch, int A, int B, bool left) {
    int ia = static_cast<int>(std::find(patch.begin(), patch.end(), A) - patch.begin());
    int ib = static_cast<int>(std::find(patch.begin(), patch.end(), B) - patch.begin());
    auto pA = kCornerParam[ia], pB = kCornerParam[ib];
    auto qA = kCornerParam[other_adjacent(ia, ib)], qB = kCornerParam[other_adjacent(ib, ia)];
    View V;
    std::array<int, 2> col0, col1;
    if (left) {
        V.c = qA;
        col0 = {pA[0] - qA[0], pA[1] - qA[1]};
        col1 = {qB[0] - qA[0], qB[1] - qA[1]};
    } else {
        V.c = pA;
        col0 = {qA[0] - pA[0], qA[1] - pA[1]};
        col1 = {pB[0] - pA[0], pB[1] - pA[1]};
    }
    V.M = {{{col0[0], col1[0]}, {col0[1], col1[1]}}};
    return V;
}

int orientation(const MultiPatchDomain& d, const std::array<int, 4>& p) {
    int sgn = 0;
    for (int i = 0; i < 4; ++i) {
        auto e1 = d.vq[p[(i + 1) % 4]] - d.vq[p[i]];
        auto e2 = d.vq[p[(i + 2) % 4]] - d.vq[p[(i + 1) % 4]];
        Rational c = cross(e1, e2);
        int s = c > 0 ? 1 : (c < 0 ? -1 : 0);
        if (s == 0 || (sgn != 0 && s != sgn)) return 0;
        sgn = s;
    }
    return sgn;
}

bool inside_closed(const MultiPatchDomain& d, const std::array<int, 4>& p, int orient, const Vec2q& x) {
    for (int i = 0; i < 4; ++i) {
        Rational c = cross(d.vq[p[(i + 1) % 4]] - d.vq[p[i]], x - d.vq[p[i]]);
        if (orient * c < 0) return false;
    }
    return true;
}

} // namespace

double MultiPatchDomain::scale() const {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : v) {
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, p.y());
        ymax = std::max(ymax, p.y());
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

MultiPatchDomain MultiPatchDomain::build(std::vector<Vec2q> vertices, std::vector<std::array<int, 4>> patches,
                                         DomainOptions opt) {
    MultiPatchDomain d;
    d.vq = std::move(vertices);
    d.patches = std::move(patches);
    const int nv = static_cast<int>(d.vq.size());
    for (const auto& q : d.vq) d.v.emplace_back(to_double(q.x), to_double(q.y));
    if (d.patches.empty()) throw geometry_error("no patches");

    std::vector<int> orient(d.patches.size());
    std::vector<int> used(nv, 0);
    for (std::size_t l = 0; l < d.patches.size(); ++l) {
        const auto& p = d.patches[l];
        std::set<int> distinct(p.begin(), p.end());
        for (int i : p)
            if (i < 0 || i >= nv) throw geometry_error("patch " + std::to_string(l) + " references missing vertex");
        if (distinct.size() != 4) throw geometry_error("patch " + std::to_string(l) + " repeats a vertex");
        orient[l] = orientation(d, p);
        if (orient[l] == 0) throw geometry_error("patch " + std::to_string(l) + " is not strictly convex");
        if (opt.require_ccw && orient[l] < 0)
            throw geometry_error("patch " + std::to_string(l) + " is not counterclockwise");
        for (int i : p) used[i]++;
    }
    for (int i = 0; i < nv; ++i)
        if (!used[i]) throw geometry_error("dangling vertex " + std::to_string(i));

    // pairwise intersections: nothing but a vertex or a whole edge
    for (std::size_t l = 0; l < d.patches.size(); ++l) {
        for (int i = 0; i < nv; ++i) {
            const auto& p = d.patches[l];
            if (std::find(p.begin(), p.end(), i) != p.end()) continue;
            if (inside_closed(d, p, orient[l], d.vq[i]))
                throw geometry_error("vertex " + std::to_string(i) + " lies on patch " + std::to_string(l));
        }
        for (std::size_t m = l + 1; m < d.patches.size(); ++m) {
            std::vector<int> common;
            for (int i : d.patches[l])
                if (std::find(d.patches[m].begin(), d.patches[m].end(), i) != d.patches[m].end())
                    common.push_back(i);
            if (common.size() > 2)
                throw geometry_error("patches " + std::to_string(l) + " and " + std::to_string(m) +
                                     " share more than one edge");
            if (common.size() == 2) {
                auto adjacent = [&](const std::array<int, 4>& p) {
                    int ia = static_cast<int>(std::find(p.begin(), p.end(), common[0]) - p.begin());
                    int ib = static_cast<int>(std::find(p.begin(), p.end(), common[1]) - p.begin());
                    return (ia - ib + 4) % 4 == 1 || (ib - ia + 4) % 4 == 1;
                };
                if (!adjacent(d.patches[l]) || !adjacent(d.patches[m]))
                    throw geometry_error("patches " + std::to_string(l) + " and " + std::to_string(m) +
                                         " share two vertices but no edge");
            }
        }
    }

    std::map<Edge, std::vector<std::pair<int, int>>> edges; // -> (patch, side)
    for (int l = 0; l < d.num_patches(); ++l)
        for (int s = 0; s < 4; ++s) edges[key(d.patches[l][s], d.patches[l][(s + 1) % 4])].push_back({l, s});

    d.valency.assign(nv, 0);
    d.on_boundary.assign(nv, false);
    for (const auto& [e, inc] : edges) {
        if (inc.size() > 2) throw geometry_error("non-manifold edge with more than two patches");
        d.valency[e.first]++;
        d.valency[e.second]++;
        if (inc.size() == 1) {
            auto [l, s] = inc[0];
            d.boundary.push_back({l, s, d.patches[l][s], d.patches[l][(s + 1) % 4]});
            d.on_boundary[e.first] = d.on_boundary[e.second] = true;
        } else {
            Interface I;
            I.id = static_cast<int>(d.interfaces.size());
            auto [l, s] = inc[0];
            I.l = l;
            I.lp = inc[1].first;
            I.a = d.patches[l][s];
            I.b = d.patches[l][(s + 1) % 4];
            I.vl = make_view(d.patches[I.l], I.a, I.b, true);
            I.vr = make_view(d.patches[I.lp], I.a, I.b, false);
            d.interfaces.push_back(I);
        }
    }
    for (int i = 0; i < nv; ++i)
        if (!d.on_boundary[i] && d.valency[i] < 3)
            throw geometry_error("interior vertex " + std::to_string(i) + " of valency " +
                                 std::to_string(d.valency[i]));

    d.fan_of.assign(nv, -1);
    for (int i = 0; i < nv; ++i) {
        if (d.valency[i] < 3) continue;
        d.fan_of[i] = static_cast<int>(d.fans.size());
        d.fans.push_back(classify_vertex(d, i));
    }
    // deleting a vertex must not split the domain: incident patches form one fan
    for (int i = 0; i < nv; ++i) {
        std::vector<int> inc;
        for (int l = 0; l < d.num_patches(); ++l)
            if (std::find(d.patches[l].begin(), d.patches[l].end(), i) != d.patches[l].end()) inc.push_back(l);
        std::vector<int> seen{inc[0]};
        for (std::size_t it = 0; it < seen.size(); ++it)
            for (const auto& I : d.interfaces) {
                if (I.a != i && I.b != i) continue;
                int nb = I.l == seen[it] ? I.lp : (I.lp == seen[it] ? I.l : -1);
                if (nb >= 0 && std::find(seen.begin(), seen.end(), nb) == seen.end()) seen.push_back(nb);
            }
        if (seen.size() != inc.size())
            d.warnings.push_back("removing vertex " + std::to_string(i) + " disconnects the domain");
    }
    return d;
}

VertexFan classify_vertex(const MultiPatchDomain& dom, int r) {
    VertexFan f;
    f.center = r;
    f.valency = dom.valency[r];
    if (f.valency < 3) throw std::invalid_argument("vertex of valency below 3 has no fan");
    f.boundary = dom.on_boundary[r];
    f.valency_eff = f.boundary ? f.valency - 1 : f.valency;

    struct Local {
        int patch, next, opp, prev;
    };
    std::vector<Local> inc;
    for (int l = 0; l < dom.num_patches(); ++l) {
        const auto& p = dom.patches[l];
        auto it = std::find(p.begin(), p.end(), r);
        if (it == p.end()) continue;
        int i = static_cast<int>(it - p.begin());
        bool ccw = cross(dom.vq[p[1]] - dom.vq[p[0]], dom.vq[p[2]] - dom.vq[p[1]]) > 0;
        int nx = ccw ? p[(i + 1) % 4] : p[(i + 3) % 4];
        int pv = ccw ? p[(i + 3) % 4] : p[(i + 1) % 4];
        inc.push_back({l, nx, p[(i + 2) % 4], pv});
    }
    // chain: patch j has prev = v^(j+1) = next of patch j+1
    std::size_t start = 0;
    if (f.boundary) {
        start = inc.size();
        for (std::size_t a = 0; a < inc.size(); ++a) {
            bool has_before = false;
            for (std::size_t b = 0; b < inc.size(); ++b)
                if (inc[b].prev == inc[a].next) has_before = true;
            if (!has_before) start = a;
        }
        if (start == inc.size()) throw geometry_error("boundary fan without a start edge");
    }
    std::vector<bool> taken(inc.size(), false);
    std::size_t cur = start;
    for (std::size_t cnt = 0; cnt < inc.size(); ++cnt) {
        taken[cur] = true;
        f.patches.push_back(inc[cur].patch);
        f.nbr.push_back(inc[cur].next);
        f.opposite.push_back(inc[cur].opp);
        std::size_t nxt = inc.size();
        for (std::size_t b = 0; b < inc.size(); ++b)
            if (!taken[b] && inc[b].next == inc[cur].prev) nxt = b;
        if (nxt == inc.size()) {
            if (cnt + 1 != inc.size()) throw geometry_error("vertex " + std::to_string(r) + " has a broken fan");
            if (f.boundary) f.nbr.push_back(inc[cur].prev);
            break;
        }
        cur = nxt;
    }
    if (static_cast<int>(f.nbr.size()) != f.valency) throw geometry_error("fan size mismatch at vertex " + std::to_string(r));

    const auto& c = dom.vq[r];
    for (int x : f.nbr) f.p.push_back(dom.vq[x] - c);
    for (int x : f.opposite) f.pt.push_back(dom.vq[x] - c);
    for (int x : f.nbr) {
        int id = -1;
        for (const auto& I : dom.interfaces)
            if ((I.a == r && I.b == x) || (I.b == r && I.a == x)) id = I.id;
        f.edges.push_back(id);
    }

    const int nu = f.valency;
    auto P = [&](int i) -> const Vec2q& { return f.p[((i - 1) % nu + nu) % nu]; };
    double tol = 1e-12 * dom.scale() * dom.scale();
    auto zero = [&](const Rational& x) {
        return dom.rational_input ? x == 0 : std::abs(to_double(x)) <= tol;
    };
    int jlo = f.boundary ? 2 : 1, jhi = f.boundary ? nu - 1 : nu;
    for (int j = jlo; j <= jhi; ++j)
        if (zero(cross(P(j + 1), P(j - 1)))) f.type++;

    if (!f.boundary) {
        if (f.type == 4 && nu != 4) f.consistent = false;
        if (f.type > 2 && f.type != 4) f.consistent = false;
        if (f.type >= 1 && nu == 3) f.consistent = false;
        if (f.type == 1 && nu == 4) f.consistent = false;
    } else if (f.type > 2 || nu < 2 + f.type) {
        f.consistent = false;
    }
    if (!f.consistent)
        f.note = "vertex " + std::to_string(r) + ": valency " + std::to_string(nu) + " with type " +
                 std::to_string(f.type) + " is outside the admissible classes";
    return f;
}

EdgePolys alpha_beta_gamma(const MultiPatchDomain& dom, const Interface& e) {
    auto Pl = patch_corners<Rational>(dom, e.l), Pr = patch_corners<Rational>(dom, e.lp);
    std::array<Rational, 3> ts{Rational(0), Rational(1, 2), Rational(1)};
    std::array<std::array<Rational, 3>, 3> val;
    for (int i = 0; i < 3; ++i) {
        auto g = alpha_beta_gamma_at<Rational>(Pl, Pr, e, ts[i]);
        val[0][i] = g.alpha;
        val[1][i] = g.beta;
        val[2][i] = g.gamma;
    }
    // interpolate through t = 0, 1/2, 1
    auto fit = [](const std::array<Rational, 3>& f) {
        Rational c0 = f[0];
        Rational c2 = 2 * f[2] - 4 * f[1] + 2 * f[0];
        Rational c1 = f[2] - f[0] - c2;
        return std::array<Rational, 3>{c0, c1, c2};
    };
    EdgePolys out{fit(val[0]), fit(val[1]), fit(val[2])};
    for (int i = 0; i <= 8; ++i) {
        Rational t(i, 8);
        if (out.gamma[0] + out.gamma[1] * t + out.gamma[2] * t * t == 0)
            throw std::runtime_error("degenerate interface: gamma vanishes");
    }
    return out;
}

std::array<Vec2q, 6> shape_points(const MultiPatchDomain& dom, const Interface& e) {
    auto far = [&](int l, int at, int other) {
        const auto& p = dom.patches[l];
        int ia = static_cast<int>(std::find(p.begin(), p.end(), at) - p.begin());
        int io = static_cast<int>(std::find(p.begin(), p.end(), other) - p.begin());
        return dom.vq[p[other_adjacent(ia, io)]];
    };
    return {dom.vq[e.a], dom.vq[e.b], far(e.l, e.a, e.b), far(e.l, e.b, e.a), far(e.lp, e.a, e.b),
            far(e.lp, e.b, e.a)};
}

int edge_mu(const MultiPatchDomain& dom, const Interface& e, int k) {
    auto pol = alpha_beta_gamma(dom, e);
    const auto& a = pol.alpha;
    if (a[0] == 0 && a[1] == 0 && a[2] == 0) return k + 2;
    int mu = 0;
    for (int i = 0; i <= k + 1; ++i) {
        Rational t(i, k + 1);
        if (a[0] + a[1] * t + a[2] * t * t == 0) ++mu;
    }
    if (mu > 2) throw std::runtime_error("collinear triplet count outside {0,1,2,k+2}");
    return mu;
}

PatchMap patch_map(const MultiPatchDomain& dom, int l, double x, double y) {
    const auto& p = dom.patches[l];
    const auto &P0 = dom.v[p[0]], &P1 = dom.v[p[1]], &P2 = dom.v[p[2]], &P3 = dom.v[p[3]];
    PatchMap m;
    m.x = (1 - x) * (1 - y) * P0 + x * (1 - y) * P1 + x * y * P2 + (1 - x) * y * P3;
    m.J.col(0) = (1 - y) * (P1 - P0) + y * (P2 - P3);
    m.J.col(1) = (1 - x) * (P3 - P0) + x * (P2 - P1);
    m.Gxy = P0 - P1 + P2 - P3;
    return m;
}

PatchSides patch_sides(const MultiPatchDomain& dom, int l) {
    PatchSides ps;
    for (const auto& b : dom.boundary)
        if (b.patch == l) ps.boundary[b.side] = true;
    for (int s = 0; s < 4; ++s) {
        ps.r_gamma += ps.boundary[s];
        ps.r_v += ps.boundary[s] && ps.boundary[(s + 1) % 4];
    }
    return ps;
}

namespace {
Rational json_coord(const nlohmann::json& j, bool& rational) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(BigInt(j.get<long long>()));
    if (j.is_number()) {
        rational = false;
        return Rational(j.get<double>());
    }
    throw geometry_error("coordinate must be a number or a \"p/q\" string");
}
} // namespace

MultiPatchDomain load_domain(const std::string& json_text, DomainOptions opt) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& ex) {
        throw geometry_error(std::string("malformed JSON: ") + ex.what());
    }
    if (!j.contains("vertices") || !j.contains("patches")) throw geometry_error("missing vertices or patches");
    bool rational = true;
    std::vector<Vec2q> V;
    for (const auto& p : j["vertices"]) {
        if (!p.is_array() || p.size() != 2) throw geometry_error("vertex must be [x, y]");
        V.push_back({json_coord(p[0], rational), json_coord(p[1], rational)});
    }
    std::vector<std::array<int, 4>> P;
    for (const auto& p : j["patches"]) {
        if (!p.is_array() || p.size() != 4) throw geometry_error("patch must list four vertex indices");
        P.push_back({p[0].get<int>(), p[1].get<int>(), p[2].get<int>(), p[3].get<int>()});
    }
    auto d = MultiPatchDomain::build(std::move(V), std::move(P), opt);
    if (!rational) {
        d.rational_input = false;
        for (auto& f : d.fans) f = classify_vertex(d, f.center);
    }
    return d;
}

MultiPatchDomain load_domain_file(const std::string& path, DomainOptions opt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open domain file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_domain(ss.str(), opt);
}

std::string domain_to_json(const MultiPatchDomain& dom) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& q : dom.vq) j["vertices"].push_back({to_string(q.x), to_string(q.y)});
    j["patches"] = dom.patches;
    return j.dump();
}

} // namespace g2patch
