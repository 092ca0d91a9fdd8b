#include "g2patch/vertex.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>

namespace g2patch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinGap = 0.25, kMaxGap = kPi - 0.2;

Rational round_to(double x, int den) { return Rational(BigInt(static_cast<long long>(std::llround(x * den))), BigInt(den)); }

struct Sampler {
    std::mt19937_64& rng;
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int den() { return std::uniform_int_distribution<int>(64, 256)(rng); }
    Rational rational(double a, double b) { return round_to(uniform(a, b), den()); }
    Vec2q point(double theta, double radius) {
        int D = den();
        return {round_to(radius * std::cos(theta), D), round_to(radius * std::sin(theta), D)};
    }
};

bool gap_ok(double a) { return a > kMinGap && a < kMaxGap; }

// Windows (1-based) that are collinear for the requested class.
std::set<int> choose_windows(const FanSpec& s, Sampler& S) {
    std::set<int> W;
    const int lo = s.boundary ? 2 : 1, hi = s.boundary ? s.nu - 1 : s.nu;
    const int span = hi - lo + 1;
    auto pick = [&](int count) { return lo + static_cast<int>(S.uniform(0, 1) * (span - count + 1)) % (span - count + 1); };
    if (s.rho == 0) return W;
    if (s.rho == 4) {
        for (int j = 1; j <= 4; ++j) W.insert(j);
        return W;
    }
    if (s.rho == 1) {
        W.insert(pick(1));
        return W;
    }
    if (s.rho == 2) {
        if (!s.boundary && s.nu == 4) {
            int j = 1 + static_cast<int>(S.uniform(0, 2));
            W = {j, j + 2};
        } else if (!s.boundary) {
            int j = 1 + static_cast<int>(S.uniform(0, s.nu)) % s.nu;
            W = {j, j % s.nu + 1};
        } else {
            int j = pick(2);
            W = {j, j + 1};
        }
        return W;
    }
    throw std::invalid_argument("unsupported fan type");
}

// Patch angles a_1..a_P (patch j between v^(j) and v^(j+1)) with a_{j-1} + a_j = pi on windows.
std::optional<std::vector<double>> sample_gaps(const FanSpec& s, const std::set<int>& W, Sampler& S) {
    const int P = s.boundary ? s.nu - 1 : s.nu;
    auto idx = [&](int j) { return ((j - 1) % P + P) % P; }; // patch j -> slot
    std::vector<double> a(P, -1);
    // windows fix pairs; walk each chain from a seed value
    for (int w : W) {
        int pa = idx(w - 1), pb = idx(w);
        if (a[pa] < 0 && a[pb] < 0) a[pa] = S.uniform(kMinGap + 0.05, kPi - kMinGap - 0.05);
        bool changed = true;
        while (changed) {
            changed = false;
            for (int u : W) {
                int x = idx(u - 1), y = idx(u);
                if (a[x] >= 0 && a[y] < 0) a[y] = kPi - a[x], changed = true;
                if (a[y] >= 0 && a[x] < 0) a[x] = kPi - a[y], changed = true;
            }
        }
    }
    std::vector<int> freeslots;
    double fixed = 0;
    for (int i = 0; i < P; ++i) {
        if (a[i] < 0)
            freeslots.push_back(i);
        else
            fixed += a[i];
    }
    for (int u : W)
        if (std::abs(a[idx(u - 1)] + a[idx(u)] - kPi) > 1e-12) return std::nullopt;
    if (!s.boundary) {
        double rest = 2 * kPi - fixed;
        if (freeslots.empty()) {
            if (std::abs(rest) > 1e-9) return std::nullopt;
        } else {
            double sum = 0;
            for (std::size_t i = 0; i + 1 < freeslots.size(); ++i) sum += a[freeslots[i]] = S.uniform(kMinGap, kMaxGap);
            a[freeslots.back()] = rest - sum;
        }
    } else {
        for (int i : freeslots) a[i] = S.uniform(kMinGap, kMaxGap);
        double total = 0;
        for (double x : a) total += x;
        if (total > 2 * kPi - 0.6) return std::nullopt;
    }
    for (double x : a)
        if (!gap_ok(x)) return std::nullopt;
    return a;
}

// Neighbours from angles; window partners set exactly as v^(j+1) = -lambda v^(j-1).
std::vector<Vec2q> place(const FanSpec& s, const std::set<int>& W, const std::vector<double>& theta,
                         const std::vector<double>& radius, int first, Sampler& S) {
    const int nu = s.nu;
    auto idx = [&](int j) { return ((j - 1) % nu + nu) % nu; };
    std::vector<std::optional<Vec2q>> v(nu);
    int remaining = nu;
    auto set_from_angle = [&](int i) {
        v[i] = S.point(theta[i], radius[i]);
        --remaining;
    };
    while (remaining > 0) {
        bool progress = false;
        for (int t = 0; t < nu; ++t) {
            int i = (first + t) % nu;
            if (v[i]) continue;
            bool determined = false;
            for (int w : W) {
                if (idx(w + 1) == i) {
                    determined = true;
                    if (v[idx(w - 1)]) {
                        Rational lam = S.rational(0.5, 2.0);
                        v[i] = Vec2q{-lam * v[idx(w - 1)]->x, -lam * v[idx(w - 1)]->y};
                        --remaining;
                        progress = true;
                        break;
                    }
                }
            }
            if (!determined && !v[i]) {
                set_from_angle(i);
                progress = true;
            }
        }
        if (!progress) // cycle of windows: break it at the first unset index
            for (int t = 0; t < nu; ++t)
                if (!v[(first + t) % nu]) {
                    set_from_angle((first + t) % nu);
                    break;
                }
    }
    std::vector<Vec2q> out;
    for (auto& x : v) out.push_back(*x);
    return out;
}

void add_opposites(Fan& f, Sampler& S) {
    const int P = f.boundary ? f.nu() - 1 : f.nu();
    f.vt.clear();
    for (int j = 0; j < P; ++j) {
        const auto &a = f.v[j], &b = f.v[(j + 1) % f.nu()];
        Rational s, t;
        do {
            s = S.rational(0.45, 1.2);
            t = S.rational(0.45, 1.2);
        } while (s + t <= Rational(21, 20));
        f.vt.push_back({s * a.x + t * b.x, s * a.y + t * b.y});
    }
}

bool valid(const Fan& f, int rho) {
    if (fan_type(f) != rho) return false;
    for (int j = 1; j <= f.patches(); ++j)
        if (psi(f, j, j + 1) <= 0) return false;
    try {
        (void)fan_domain(f);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

} // namespace

Fan random_fan(const FanSpec& s, std::mt19937_64& rng) {
    if (!fan_admissible(s.nu, s.rho, s.boundary))
        throw std::invalid_argument("inadmissible fan class (" + std::to_string(s.nu) + ", " + std::to_string(s.rho) +
                                    ")");
    Sampler S{rng};
    for (int attempt = 0; attempt < 10000; ++attempt) {
        auto W = choose_windows(s, S);
        auto gaps = sample_gaps(s, W, S);
        if (!gaps) continue;
        std::vector<double> theta(s.nu), radius(s.nu);
        theta[0] = S.uniform(0, 2 * kPi);
        for (int j = 1; j < s.nu; ++j) theta[j] = theta[j - 1] + (*gaps)[j - 1];
        for (auto& r : radius) r = S.uniform(0.6, 1.6);
        Fan f;
        f.boundary = s.boundary;
        f.v = place(s, W, theta, radius, 0, S);
        add_opposites(f, S);
        if (valid(f, s.rho)) return f;
    }
    throw std::runtime_error("could not sample a fan of the requested class");
}

Fan random_special_fan(int nu, int rho, bool zero_p, std::mt19937_64& rng) {
    Sampler S{rng};
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Fan f;
        if (nu == 4 && rho == 4) {
            // v4 = (1, 0), v2 = (p2, 0), v3 = -mu v1
            double th = zero_p ? kPi / 2 : S.uniform(0.35, kPi - 0.35);
            Vec2q v1 = zero_p ? Vec2q{Rational(0), S.rational(0.6, 1.6)} : S.point(th, S.uniform(0.6, 1.6));
            Rational mu = S.rational(0.5, 2.0), p2 = -S.rational(0.5, 2.0);
            f.v = {v1, {p2, Rational(0)}, {-mu * v1.x, -mu * v1.y}, {Rational(1), Rational(0)}};
            if (!zero_p && v1.x == 0) continue;
        } else if (nu == 4 && rho == 2) {
            // psi_{2,4} = 0 with v2 vertical when zero_p
            FanSpec s{4, 2, false};
            std::set<int> W{1, 3};
            auto gaps = sample_gaps(s, W, S);
            if (!gaps) continue;
            std::vector<double> theta(4), radius(4);
            theta[1] = zero_p ? kPi / 2 : S.uniform(0, 2 * kPi);
            theta[2] = theta[1] + (*gaps)[1];
            theta[3] = theta[2] + (*gaps)[2];
            theta[0] = theta[1] - (*gaps)[0];
            for (auto& r : radius) r = S.uniform(0.6, 1.6);
            f.v = place(s, W, theta, radius, 1, S);
            if (zero_p != (f.v[1].x == 0)) continue;
        } else if (nu == 5 && rho == 2) {
            // psi_{1,3} = psi_{2,5} = 0
            FanSpec s{5, 2, false};
            std::set<int> W{1, 2};
            auto gaps = sample_gaps(s, W, S);
            if (!gaps) continue;
            std::vector<double> theta(5), radius(5);
            theta[0] = S.uniform(0, 2 * kPi);
            for (int j = 1; j < 5; ++j) theta[j] = theta[j - 1] + (*gaps)[j - 1];
            for (auto& r : radius) r = S.uniform(0.6, 1.6);
            f.v = place(s, W, theta, radius, 0, S);
        } else {
            throw std::invalid_argument("no special fan of valency " + std::to_string(nu) + " and type " +
                                        std::to_string(rho));
        }
        add_opposites(f, S);
        if (valid(f, rho)) return f;
    }
    throw std::runtime_error("could not sample a special fan");
}

namespace {

std::vector<FanSpec> small_fan_classes() {
    std::vector<FanSpec> out;
    const std::pair<int, int> classes[] = {{3, 0}, {4, 0}, {5, 0}, {6, 0}, {5, 1}, {6, 1},
                                           {4, 2}, {5, 2}, {6, 2}, {7, 2}, {4, 4}};
    for (auto [nu, rho] : classes)
        for (bool b : {false, true})
            if (fan_admissible(nu, rho, b) && (b ? nu - 1 : nu) <= 6) out.push_back({nu, rho, b});
    return out;
}

MultiPatchDomain jittered_grid(int nx, int ny, bool drop_corner, std::mt19937_64& rng) {
    Sampler S{rng};
    std::vector<Vec2q> pts;
    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            pts.push_back({Rational(i) + S.rational(-0.2, 0.2), Rational(j) + S.rational(-0.2, 0.2)});
    std::vector<std::array<int, 4>> patches;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (drop_corner && i == nx - 1 && j == ny - 1) continue;
            patches.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    if (drop_corner) {
        // renumber without the unused corner
        const int gone = id(nx, ny);
        pts.erase(pts.begin() + gone);
        for (auto& p : patches)
            for (int& c : p)
                if (c > gone) --c;
    }
    return MultiPatchDomain::build(pts, patches);
}

} // namespace

int num_random_domain_templates() { return static_cast<int>(small_fan_classes().size()) + 4; }

MultiPatchDomain random_domain(int variant, std::mt19937_64& rng) {
    auto fans = small_fan_classes();
    const int nf = static_cast<int>(fans.size());
    const int t = ((variant % (nf + 4)) + nf + 4) % (nf + 4);
    if (t < nf) return fan_domain(random_fan(fans[t], rng));
    switch (t - nf) {
    case 0: return jittered_grid(2, 2, false, rng);
    case 1: return jittered_grid(3, 2, false, rng);
    case 2: return jittered_grid(3, 1, false, rng);
    default: return jittered_grid(2, 2, true, rng);
    }
}

} // namespace g2patch
