#include "rkistab/region.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace rkistab {

namespace {

using std::size_t;

double excess(const Poly& P, cplx z) { return std::abs(eval(P, z)) - 1.0; }

// z_in inside, z_out outside; bisection on |P| - 1 along the segment
cplx bisect_edge(const Poly& P, cplx z_in, cplx z_out) {
    for (int it = 0; it < 200; ++it) {
        cplx mid = 0.5 * (z_in + z_out);
        if (mid == z_in || mid == z_out) break;
        double g = excess(P, mid);
        if (g <= 0.0)
            z_in = mid;
        else
            z_out = mid;
        if (std::abs(g) < 1e-13) return mid;
    }
    return std::abs(excess(P, z_in)) <= std::abs(excess(P, z_out)) ? z_in : z_out;
}

double bisect_axis(const Poly& P, double y_in, double y_out) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (y_in + y_out);
        if (mid == y_in || mid == y_out) break;
        double g = excess(P, cplx(0.0, mid));
        if (g <= 0.0)
            y_in = mid;
        else
            y_out = mid;
        if (std::abs(g) < 1e-13) return mid;
    }
    return y_in;
}

struct Grid {
    int n = 0;  // points per side
    double R = 0.0, h = 0.0;
    cplx centre;
    std::vector<double> f;  // |P|^2 - 1
    cplx at(int i, int j) const { return centre + cplx(-R + i * h, -R + j * h); }
    double val(int i, int j) const { return f[static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(i)]; }
    bool inside(int i, int j) const { return val(i, j) <= 0.0; }
};

// with centre 0 the middle grid point is the origin, which is forced inside
Grid sample(const Poly& P, cplx centre, double R, int resolution) {
    Grid g;
    g.n = resolution + 1;
    g.R = R;
    g.h = 2.0 * R / resolution;
    g.centre = centre;
    g.f.assign(static_cast<size_t>(g.n) * static_cast<size_t>(g.n), 0.0);
    const bool at_origin = centre == cplx(0.0);
    parallel_for(g.n, [&](int j) {
        for (int i = 0; i < g.n; ++i) {
            cplx z = g.at(i, j);
            if (at_origin && i == resolution / 2 && j == resolution / 2) z = 0.0;  // exact origin
            g.f[static_cast<size_t>(j) * static_cast<size_t>(g.n) + static_cast<size_t>(i)] = std::norm(eval(P, z)) - 1.0;
        }
    });
    if (at_origin) {
        // z = 0 always belongs to the region of a consistent method
        double& v = g.f[static_cast<size_t>(resolution / 2) * static_cast<size_t>(g.n) + static_cast<size_t>(resolution / 2)];
        v = std::min(v, 0.0);
    }
    return g;
}

// labels grid points connected (4-neighbour) to the origin through inside points
std::vector<std::uint8_t> origin_labels(const Grid& g) {
    std::vector<std::uint8_t> lab(g.f.size(), 0);
    if (g.centre != cplx(0.0)) return lab;
    int c = (g.n - 1) / 2;
    std::deque<std::pair<int, int>> q;
    auto push = [&](int i, int j) {
        if (i < 0 || j < 0 || i >= g.n || j >= g.n) return;
        size_t k = static_cast<size_t>(j) * static_cast<size_t>(g.n) + static_cast<size_t>(i);
        if (lab[k] || !g.inside(i, j)) return;
        lab[k] = 1;
        q.emplace_back(i, j);
    };
    // the origin usually sits on the boundary; seed its whole neighbourhood
    for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) push(c + di, c + dj);
    while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop_front();
        push(i + 1, j);
        push(i - 1, j);
        push(i, j + 1);
        push(i, j - 1);
    }
    return lab;
}

struct Traced {
    std::vector<std::vector<cplx>> lines;
    std::vector<bool> origin;
};

Traced march(const Poly& P, const Grid& g) {
    const int n = g.n;
    const size_t nn = static_cast<size_t>(n) * static_cast<size_t>(n);
    auto hkey = [&](int i, int j) { return 2 * (static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(i)); };
    auto vkey = [&](int i, int j) { return 2 * (static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(i)) + 1; };

    std::vector<std::int32_t> node_of(2 * nn, -1);
    std::vector<size_t> node_key;
    std::vector<std::array<std::int32_t, 2>> adj;
    std::vector<std::uint8_t> node_origin;
    std::vector<std::uint8_t> lab = origin_labels(g);

    auto node = [&](size_t key) {
        if (node_of[key] < 0) {
            node_of[key] = static_cast<std::int32_t>(node_key.size());
            node_key.push_back(key);
            adj.push_back({-1, -1});
            node_origin.push_back(0);
        }
        return node_of[key];
    };
    auto link = [&](size_t ka, size_t kb, bool org) {
        std::int32_t a = node(ka), b = node(kb);
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
            auto& slot = adj[static_cast<size_t>(x)];
            if (slot[0] < 0)
                slot[0] = y;
            else
                slot[1] = y;
            if (org) node_origin[static_cast<size_t>(x)] = 1;
        }
    };

    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            bool c0 = g.inside(i, j), c1 = g.inside(i + 1, j), c2 = g.inside(i + 1, j + 1), c3 = g.inside(i, j + 1);
            if (c0 == c1 && c1 == c2 && c2 == c3) continue;
            auto labd = [&](int a, int b) {
                return lab[static_cast<size_t>(b) * static_cast<size_t>(n) + static_cast<size_t>(a)] != 0;
            };
            bool org = labd(i, j) || labd(i + 1, j) || labd(i + 1, j + 1) || labd(i, j + 1);
            size_t e0 = hkey(i, j), e1 = vkey(i + 1, j), e2 = hkey(i, j + 1), e3 = vkey(i, j);
            std::vector<size_t> cut;
            if (c0 != c1) cut.push_back(e0);
            if (c1 != c2) cut.push_back(e1);
            if (c2 != c3) cut.push_back(e2);
            if (c3 != c0) cut.push_back(e3);
            if (cut.size() == 2) {
                link(cut[0], cut[1], org);
            } else {
                // saddle: decide with the cell centre
                cplx zc = g.at(i, j) + cplx(0.5 * g.h, 0.5 * g.h);
                bool cc = std::norm(eval(P, zc)) - 1.0 <= 0.0;
                if (cc == c0) {
                    link(e0, e1, org);
                    link(e2, e3, org);
                } else {
                    link(e3, e0, org);
                    link(e1, e2, org);
                }
            }
        }
    }

    // locate crossings
    std::vector<cplx> pts(node_key.size());
    parallel_for(static_cast<int>(node_key.size()), [&](int k) {
        size_t key = node_key[static_cast<size_t>(k)];
        size_t cell = key / 2;
        int i = static_cast<int>(cell % static_cast<size_t>(n)), j = static_cast<int>(cell / static_cast<size_t>(n));
        int i2 = (key % 2 == 0) ? i + 1 : i, j2 = (key % 2 == 0) ? j : j + 1;
        cplx za = g.at(i, j), zb = g.at(i2, j2);
        if (!g.inside(i, j)) std::swap(za, zb);
        pts[static_cast<size_t>(k)] = bisect_edge(P, za, zb);
    });

    Traced out;
    std::vector<std::uint8_t> used(node_key.size(), 0);
    for (size_t start = 0; start < node_key.size(); ++start) {
        if (used[start]) continue;
        std::vector<cplx> line;
        bool org = false;
        std::int32_t prev = -1, cur = static_cast<std::int32_t>(start);
        while (cur >= 0 && !used[static_cast<size_t>(cur)]) {
            used[static_cast<size_t>(cur)] = 1;
            line.push_back(pts[static_cast<size_t>(cur)]);
            org = org || node_origin[static_cast<size_t>(cur)];
            const auto& nb = adj[static_cast<size_t>(cur)];
            std::int32_t nxt = (nb[0] != prev && nb[0] >= 0 && !used[static_cast<size_t>(nb[0])]) ? nb[0] : nb[1];
            if (nxt >= 0 && used[static_cast<size_t>(nxt)]) nxt = -1;
            prev = cur;
            cur = nxt;
        }
        if (!line.empty()) {
            out.lines.push_back(std::move(line));
            out.origin.push_back(org);
        }
    }
    return out;
}

std::vector<std::pair<double, double>> axis_scan(const Poly& P, double R) {
    const int m = 4096;  // even, so y = 0 is a scan point
    std::vector<std::pair<double, double>> segs;
    auto y_at = [&](int k) { return -R + 2.0 * R * k / m; };
    auto inside = [&](double y) { return y == 0.0 || excess(P, cplx(0.0, y)) <= 0.0; };
    bool in_prev = inside(y_at(0));
    double lo = y_at(0);
    for (int k = 1; k <= m; ++k) {
        double y = y_at(k);
        bool in = inside(y);
        if (in && !in_prev) lo = bisect_axis(P, y, y_at(k - 1));
        if (!in && in_prev) segs.emplace_back(lo, bisect_axis(P, y_at(k - 1), y));
        in_prev = in;
    }
    if (in_prev) segs.emplace_back(lo, R);
    return segs;
}

// winding number of a closed polyline around z
int winding(const std::vector<cplx>& line, cplx z) {
    double total = 0.0;
    for (size_t k = 0; k < line.size(); ++k) {
        cplx a = line[k] - z, b = line[(k + 1) % line.size()] - z;
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace

std::vector<cplx> poly_roots(const Poly& P0) {
    Poly P = trimmed(P0, 0.0);
    int d = P.degree();
    if (d < 1) return {};
    // scale z = sigma w so the companion matrix is balanced
    double sigma = std::pow(std::abs(P.c[0]) / std::abs(P.c[static_cast<size_t>(d)]), 1.0 / d);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) sigma = 1.0;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    double lead = P.c[static_cast<size_t>(d)] * std::pow(sigma, d);
    for (int k = 0; k < d; ++k) C(0, d - 1 - k) = -P.c[static_cast<size_t>(k)] * std::pow(sigma, k) / lead;
    for (int k = 1; k < d; ++k) C(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cplx> out;
    for (int k = 0; k < d; ++k) {
        cplx z = es.eigenvalues()(k) * sigma;
        // Newton polish
        for (int it = 0; it < 20; ++it) {
            cplx p, dp;
            eval_with_derivative(P, z, p, dp);
            if (dp == cplx(0.0)) break;
            cplx step = p / dp;
            z -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
        }
        out.push_back(z);
    }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

std::size_t StabilityRegion::point_count() const {
    std::size_t k = 0;
    for (const auto& l : boundary) k += l.size();
    return k;
}

double region_radius_bound(const Poly& P0) {
    Poly P = trimmed(P0, 0.0);
    int d = P.degree();
    if (d < 1) throw DegenerateP("stability polynomial is constant");
    double lead = std::abs(P.c[static_cast<size_t>(d)]);
    double r = 0.0;
    for (int k = 0; k < d; ++k) {
        double a = std::abs(P.c[static_cast<size_t>(k)]) + (k == 0 ? 1.0 : 0.0);
        if (a == 0.0) continue;
        r = std::max(r, std::pow(a / lead, 1.0 / (d - k)));
    }
    return 2.0 * r;
}

StabilityRegion trace_region(const Poly& P0, int resolution) {
    if (resolution < 64) throw std::invalid_argument("resolution must be at least 64");
    if (resolution % 2) ++resolution;
    Poly P = trimmed(P0, 0.0);
    if (P.degree() < 1) throw DegenerateP("stability polynomial is constant");
    if (std::abs(eval(P, cplx(0.0)) - 1.0) > 1e-12) throw std::invalid_argument("P(0) must equal 1");

    // every component of {|P| <= 1} holds a root of P (minimum modulus)
    std::vector<cplx> roots = poly_roots(P);
    double root_r = 0.0;
    for (cplx r : roots) root_r = std::max(root_r, std::abs(r));

    double R = region_radius_bound(P) * 1.01;
    Traced tr;
    Grid g;
    // second pass on a box fitted to the first trace
    for (int pass = 0; pass < 2; ++pass) {
        g = sample(P, cplx(0.0), R, resolution);
        tr = march(P, g);
        double mr = root_r;
        for (const auto& l : tr.lines)
            for (cplx z : l) mr = std::max(mr, std::abs(z));
        double fitted = 1.05 * mr + 4.0 * g.h;
        if (pass == 0 && fitted < 0.8 * R)
            R = fitted;
        else
            break;
    }

    // components smaller than the grid step: trace them on a local grid around their root
    for (cplx r : roots) {
        int cover = 0;
        for (const auto& l : tr.lines)
            if (winding(l, r) != 0) ++cover;
        if (cover % 2 == 1) continue;
        cplx p, dp;
        eval_with_derivative(P, r, p, dp);
        double w = std::abs(dp) > 0.0 ? 4.0 / std::abs(dp) : g.h;
        w = std::min(std::max(w, 1e-6 * (1.0 + std::abs(r))), g.h);
        for (int grow = 0; grow < 40; ++grow) {
            Grid lg = sample(P, r, w, 128);
            bool closed = true;
            for (int k = 0; k < lg.n && closed; ++k)
                closed = !lg.inside(k, 0) && !lg.inside(k, lg.n - 1) && !lg.inside(0, k) && !lg.inside(lg.n - 1, k);
            if (closed || grow == 39) {
                Traced loc = march(P, lg);
                for (auto& l : loc.lines) {
                    if (winding(l, r) == 0) continue;
                    tr.lines.push_back(std::move(l));
                    tr.origin.push_back(false);
                }
                break;
            }
            w *= 2.0;
        }
    }

    double mr = 0.0;
    for (const auto& l : tr.lines)
        for (cplx z : l) mr = std::max(mr, std::abs(z));
    R = std::max(R, 1.01 * mr);

    StabilityRegion reg;
    reg.P = P;
    reg.boundary = std::move(tr.lines);
    reg.origin_component = std::move(tr.origin);
    reg.bbox_radius = R;
    reg.grid_step = g.h;
    reg.resolution = resolution;
    reg.axis_segments = axis_scan(P, R);
    return reg;
}

bool contains(const Poly& P, cplx z) { return std::abs(eval(P, z)) <= 1.0 + 1e-12; }

cplx project_to_boundary(const Poly& P, cplx z) {
    for (int it = 0; it < 50; ++it) {
        cplx p, dp;
        eval_with_derivative(P, z, p, dp);
        double g = std::norm(p) - 1.0;
        if (std::abs(g) < 1e-15) break;
        cplx grad = 2.0 * std::conj(std::conj(p) * dp);
        double gn = std::norm(grad);
        if (gn == 0.0) break;
        z -= g * grad / gn;
    }
    return z;
}

namespace {

cplx unit_tangent(const Poly& P, cplx z) {
    cplx p, dp;
    eval_with_derivative(P, z, p, dp);
    cplx grad = std::conj(std::conj(p) * dp);
    double a = std::abs(grad);
    if (a == 0.0) return cplx(0.0, 1.0);
    return cplx(0.0, 1.0) * grad / a;
}

template <class Fn>
std::pair<double, double> golden_max(double lo, double hi, Fn f) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

std::pair<double, cplx> refine_on_boundary(const Poly& P, cplx z0, double half_width,
                                           const std::function<double(cplx)>& objective, bool half_plane) {
    const double neg = -std::numeric_limits<double>::infinity();
    cplx t0 = unit_tangent(P, z0);
    auto point = [&](double t) { return project_to_boundary(P, z0 + t * t0); };
    auto f = [&](double t) {
        cplx z = point(t);
        if (half_plane && z.real() > 0.0) return neg;
        if (std::abs(std::abs(eval(P, z)) - 1.0) > 1e-9) return neg;
        return objective(z);
    };
    double base = (half_plane && z0.real() > 0.0) ? neg : objective(z0);
    auto [t, v] = golden_max(-half_width, half_width, f);
    if (v > base) return {v, point(t)};
    return {base, z0};
}

std::pair<double, cplx> refine_on_axis(double y0, double lo, double hi, double half_width,
                                       const std::function<double(cplx)>& objective) {
    double a = std::max(lo, y0 - half_width), b = std::min(hi, y0 + half_width);
    double base = objective(cplx(0.0, y0));
    if (b <= a) return {base, cplx(0.0, y0)};
    auto [y, v] = golden_max(a, b, [&](double yy) { return objective(cplx(0.0, yy)); });
    if (v > base) return {v, cplx(0.0, y)};
    return {base, cplx(0.0, y0)};
}

std::vector<std::size_t> local_maxima(const std::vector<double>& values) {
    std::vector<std::size_t> out;
    std::size_t n = values.size();
    if (n == 0) return out;
    if (n < 3) {
        out.push_back(static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin()));
        return out;
    }
    for (std::size_t k = 0; k < n; ++k) {
        double a = values[(k + n - 1) % n], b = values[k], c = values[(k + 1) % n];
        if (b >= a && b >= c && b > -std::numeric_limits<double>::infinity()) out.push_back(k);
    }
    return out;
}

RadiusResult max_abs_z(const StabilityRegion& region, bool half_plane_only) {
    auto obj = [](cplx z) { return std::abs(z); };
    RadiusResult best{0.0, cplx(0.0)};
    auto consider = [&](double v, cplx z) {
        if (v > best.radius || (v == best.radius && std::arg(z) < std::arg(best.point))) best = {v, z};
    };
    const double neg = -std::numeric_limits<double>::infinity();
    for (const auto& line : region.boundary) {
        std::vector<double> vals(line.size());
        for (std::size_t k = 0; k < line.size(); ++k)
            vals[k] = (half_plane_only && line[k].real() > 0.0) ? neg : obj(line[k]);
        for (std::size_t k : local_maxima(vals)) {
            auto [v, z] = refine_on_boundary(region.P, line[k], 1.5 * region.grid_step, obj, half_plane_only);
            consider(v, z);
        }
    }
    if (half_plane_only) {
        for (auto [lo, hi] : region.axis_segments) {
            consider(std::abs(lo), cplx(0.0, lo));
            consider(std::abs(hi), cplx(0.0, hi));
        }
    }
    return best;
}

}  // namespace rkistab
