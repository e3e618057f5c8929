#include "rkistab/amplification.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace rkistab {

namespace {

constexpr int kCandidatesPerStage = 5;
constexpr double kNeg = -std::numeric_limits<double>::infinity();

struct Candidate {
    double value;
    cplx z;
    bool on_axis;
    double lo, hi;  // axis segment limits
};

bool better(double v, int j, cplx z, const AmpValue& best) {
    if (v != best.value) return v > best.value;
    if (j != best.where.stage) return j < best.where.stage;
    return std::arg(z) < std::arg(best.where.z);
}

// polyline index of the boundary point nearest to z
std::size_t nearest_line(const StabilityRegion& region, cplx z) {
    std::size_t best = 0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < region.boundary.size(); ++l)
        for (cplx w : region.boundary[l])
            if (std::abs(w - z) < d) {
                d = std::abs(w - z);
                best = l;
            }
    return best;
}

}  // namespace

AmpValue amplification_factor(const InternalStabilitySet& iss, const StabilityRegion& region, bool half,
                              RegionScope scope) {
    if (region.boundary.empty() || relative_coeff_distance(trimmed(iss.P), region.P) > 1e-9)
        throw UntracedRegion("region was not traced from this stability polynomial");

    std::vector<std::size_t> lines;
    for (std::size_t l = 0; l < region.boundary.size(); ++l)
        if (scope == RegionScope::whole || region.origin_component[l]) lines.push_back(l);

    std::vector<std::pair<double, double>> segs;
    if (half) {
        for (auto seg : region.axis_segments) {
            if (scope == RegionScope::origin_component) {
                bool has0 = seg.first <= 0.0 && seg.second >= 0.0;
                if (!has0 && !region.origin_component[nearest_line(region, cplx(0.0, seg.first))]) continue;
            }
            segs.push_back(seg);
        }
    }
    const double h = region.grid_step;

    const int s = iss.stages();
    std::vector<AmpValue> per_stage(static_cast<std::size_t>(std::max(0, s)));
    parallel_for(s - 1, [&](int jj) {
        const int j = jj + 1;  // 0-based stage index, skipping stage 1
        const Poly& Q = iss.Q[static_cast<std::size_t>(j)];
        auto obj = [&](cplx z) { return std::abs(eval(Q, z)); };
        std::vector<Candidate> cands;
        for (std::size_t l : lines) {
            const auto& line = region.boundary[l];
            std::vector<double> vals(line.size());
            for (std::size_t k = 0; k < line.size(); ++k)
                vals[k] = (half && line[k].real() > 0.0) ? kNeg : obj(line[k]);
            for (std::size_t k : local_maxima(vals))
                if (vals[k] > kNeg) cands.push_back({vals[k], line[k], false, 0, 0});
        }
        for (auto [lo, hi] : segs) {
            int m = std::max(2, static_cast<int>(std::ceil((hi - lo) / (0.5 * h))));
            std::vector<double> vals(static_cast<std::size_t>(m) + 1);
            for (int k = 0; k <= m; ++k) vals[static_cast<std::size_t>(k)] = obj(cplx(0.0, lo + (hi - lo) * k / m));
            for (int k = 0; k <= m; ++k) {
                double v = vals[static_cast<std::size_t>(k)];
                bool lm = (k == 0 || v >= vals[static_cast<std::size_t>(k - 1)]) &&
                          (k == m || v >= vals[static_cast<std::size_t>(k + 1)]);
                if (lm) cands.push_back({v, cplx(0.0, lo + (hi - lo) * k / m), true, lo, hi});
            }
        }

        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.value != b.value) return a.value > b.value;
            return std::arg(a.z) < std::arg(b.z);
        });
        if (cands.size() > kCandidatesPerStage) cands.resize(kCandidatesPerStage);

        AmpValue best{kNeg, {j + 1, cplx(0.0)}};
        for (const auto& c : cands) {
            double v;
            cplx z;
            if (c.on_axis)
                std::tie(v, z) = refine_on_axis(c.z.imag(), c.lo, c.hi, 0.5 * h, obj);
            else
                std::tie(v, z) = refine_on_boundary(region.P, c.z, 1.5 * h, obj, half);
            if (better(v, j + 1, z, best)) best = {v, {j + 1, z}};
        }
        per_stage[static_cast<std::size_t>(j)] = best;
    });

    AmpValue best{kNeg, {0, cplx(0.0)}};
    for (int j = 1; j < s; ++j) {
        const auto& c = per_stage[static_cast<std::size_t>(j)];
        if (better(c.value, c.where.stage, c.where.z, best)) best = c;
    }
    if (s <= 1) best = {0.0, {0, cplx(0.0)}};
    return best;
}

double amplification_at_zero(const InternalStabilitySet& iss) {
    double m = 0.0;
    for (std::size_t j = 1; j < iss.Q.size(); ++j) m = std::max(m, std::abs(iss.Q[j].coeff(0)));
    return m;
}

std::optional<Rational> amplification_at_zero_exact(const InternalStabilitySet& iss) {
    if (!iss.Q_exact) return std::nullopt;
    Rational m = 0;
    for (std::size_t j = 1; j < iss.Q_exact->size(); ++j) {
        Rational a = abs((*iss.Q_exact)[j].coeff(0));
        if (a > m) m = a;
    }
    return m;
}

AmplificationReport analyze(const InternalStabilitySet& iss, const StabilityRegion& region, std::string id,
                            RegionScope scope) {
    AmplificationReport r;
    r.method_id = std::move(id);
    AmpValue full = amplification_factor(iss, region, false, scope);
    AmpValue half = amplification_factor(iss, region, true, scope);
    r.m_full = full.value;
    r.argmax_full = full.where;
    r.m_half = half.value;
    r.argmax_half = half.where;
    r.m_zero = amplification_at_zero(iss);
    return r;
}

double disk_amplification(const InternalStabilitySet& iss, double C, int samples) {
    // Q(-C + C w) on rings |w| <= 1; the shift is done exactly when we can, since the
    // monomial form loses everything to cancellation for large C and degree
    std::vector<Poly> local;
    for (std::size_t j = 1; j < iss.Q.size(); ++j) {
        if (iss.Q_exact) {
            Rational c(C);
            RatPoly acc;
            const RatPoly& q = iss.Q_exact->at(j);
            for (auto it = q.c.rbegin(); it != q.c.rend(); ++it) {
                RatPoly next = RatPoly::constant(*it);
                next.add_linear_times(-c, c, acc);
                acc = std::move(next);
            }
            local.push_back(to_double(acc));
        } else {
            Poly acc;
            const Poly& q = iss.Q[j];
            for (auto it = q.c.rbegin(); it != q.c.rend(); ++it) {
                Poly next = Poly::constant(*it);
                next.add_linear_times(-C, C, acc);
                acc = std::move(next);
            }
            local.push_back(acc);
        }
    }
    double m = 0.0;
    const int rings = 4;
    int per_ring = std::max(8, samples / rings);
    for (int ring = 1; ring <= rings; ++ring) {
        double rad = double(ring) / rings;
        for (int k = 0; k < per_ring; ++k) {
            double th = 2.0 * std::numbers::pi * k / per_ring;
            cplx w = rad * cplx(std::cos(th), std::sin(th));
            for (const Poly& q : local) m = std::max(m, std::abs(eval(q, w)));
        }
    }
    return m;
}

double ssp3_mu_minus(int n, double rho) {
    double dn = n;
    double a = std::pow(rho, (dn - 1) * (dn - 1));
    double b = std::pow(rho, 2 * dn - 1);
    return -1.0 - dn * a * (1.0 - (1.0 - 1.0 / dn) * b) / (2 * dn - 1);
}

Ssp3Analysis ssp3_analytic(int n) {
    if (n < 2) throw std::invalid_argument("ssp3 needs n >= 2");
    if (n > 400) throw std::invalid_argument("ssp3 analysis is capped at n = 400");
    Ssp3Analysis r;
    r.n = n;
    double dn = n;
    r.rho_n = std::pow(1.0 + 1.0 / (dn - 1.0), 1.0 / (2 * dn - 1));
    double lo = r.rho_n, hi = r.rho_n;
    double step = hi - 1.0;
    while (ssp3_mu_minus(n, hi) <= 0.0) {
        hi = 1.0 + 2.0 * (hi - 1.0 + step);
        step *= 2.0;
    }
    // mu is negative at lo and positive at hi
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (ssp3_mu_minus(n, mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * hi) break;
    }
    r.nu_star = 0.5 * (lo + hi);
    r.mu_at_root = ssp3_mu_minus(n, r.nu_star);
    double ln = std::log(r.nu_star);
    r.first_branch = (dn - 1) / (2 * dn - 1) * std::exp((dn * dn + 3 * dn - 4) / 2 * ln);
    r.second_branch = std::exp((dn * dn - dn) / 2 * ln);
    r.m_value = std::max(r.first_branch, r.second_branch);

    if (n >= 9) {
        double L = std::log(dn), LL = std::log(std::log(dn)), e = (dn * dn - dn) / 2;
        r.chain[0] = 0.9 * std::sqrt(dn / L);
        r.chain[1] = std::pow(1.0 + L / (dn * dn) - LL / (dn * dn), e);
        r.chain[2] = std::pow(1.0 + L / (dn * dn) - LL / (8 * dn * dn), e);
        r.chain[3] = std::sqrt(dn) / std::pow(L, 1.0 / 16);
        r.chain_applicable = true;
        r.chain_holds = r.chain[0] < r.chain[1] && r.chain[1] < r.m_value && r.m_value < r.chain[2] &&
                        r.chain[2] < r.chain[3];
    }
    return r;
}

Rational ee_zero_closed_form(int p) {
    if (p < 1) throw std::invalid_argument("order must be >= 1");
    Rational best = 0;
    for (int m = 1; m <= p; ++m) {
        Rational v = pow(Rational(m), p) / (factorial(p - m) * factorial(m));
        if (v > best) best = v;
    }
    return best;
}

Rational em_zero_closed_form(int p) {
    if (p < 2 || p % 2) throw std::invalid_argument("midpoint extrapolation needs an even order >= 2");
    int r = p / 2;
    Rational best = 0;
    for (int m = 1; m <= r; ++m) {
        Rational v = Rational(2) * pow(Rational(m), 2 * r) / (factorial(r - m) * factorial(r + m));
        if (v > best) best = v;
    }
    return best;
}

namespace {

BoundCheck upper(std::string name, double value, double bound) {
    BoundCheck b;
    b.name = std::move(name);
    b.value = value;
    b.bound = bound;
    b.margin = bound - value;
    b.satisfied = value <= bound;
    return b;
}

BoundCheck lower(std::string name, double value, double bound) {
    BoundCheck b;
    b.name = std::move(name);
    b.value = value;
    b.bound = bound;
    b.margin = value - bound;
    b.satisfied = value >= bound;
    return b;
}

BoundCheck skipped(std::string name, std::string reason) {
    BoundCheck b;
    b.name = std::move(name);
    b.applicable = false;
    b.reason = std::move(reason);
    return b;
}

}  // namespace

std::vector<BoundCheck> verify_bounds(const AmplificationReport& rep, const MethodSpec& spec,
                                      const InternalStabilitySet* iss) {
    std::vector<BoundCheck> out;
    const double pi = std::numbers::pi;
    const int q = spec.parameter;
    auto disk = [&](double C) {
        if (!iss)
            out.push_back(skipped("SSP disk bound M(D_C) <= 1", "internal stability set not supplied"));
        else
            out.push_back(upper("SSP disk bound M(D_C) <= 1", disk_amplification(*iss, C), 1.0 + 1e-9));
    };
    switch (spec.family) {
        case Family::ssp2:
            disk(q - 1.0);
            out.push_back(upper("SSP2 bound M <= (s+1)/s", rep.m_full, (q + 1.0) / q));
            break;
        case Family::ssp3: {
            disk(double(q) * q - q);
            Ssp3Analysis a = ssp3_analytic(q);
            if (a.chain_applicable) {
                out.push_back(lower("SSP3 lower bound (9/10) sqrt(n/ln n)", a.m_value, a.chain[0]));
                out.push_back(lower("SSP3 inner lower bound", a.m_value, a.chain[1]));
                out.push_back(upper("SSP3 inner upper bound", a.m_value, a.chain[2]));
                out.push_back(upper("SSP3 upper bound sqrt(n)/(ln n)^(1/16)", a.m_value, a.chain[3]));
            } else {
                out.push_back(skipped("SSP3 inequality chain", "proved for n >= 9 only"));
            }
            break;
        }
        case Family::ee_extrap:
            out.push_back(skipped("SSP disk bound M(D_C) <= 1", "not an SSP family"));
            if (q == 2) {
                out.push_back(upper("EE full-region bound 5.42 (p = 2)", rep.m_full, 5.42));
            } else if (q >= 3) {
                double sq = std::sqrt(q - 1.0);
                out.push_back(upper("EE full-region bound 9.34^p/(5.2 pi sqrt(p-1))", rep.m_full, std::pow(9.34, q) / (5.2 * pi * sq)));
                out.push_back(upper("EE half-plane bound 7.01^p/(3.9 pi sqrt(p-1))", rep.m_half, std::pow(7.01, q) / (3.9 * pi * sq)));
                out.push_back(upper("EE origin bound 3.592^p/(2 pi sqrt(p-1))", rep.m_zero, std::pow(3.592, q) / (2 * pi * sq)));
            }
            if (q >= 4)
                out.push_back(lower("EE origin lower bound 0.117*3.577^p/p", rep.m_zero, 0.117 * std::pow(3.577, q) / q));
            else
                out.push_back(skipped("EE origin lower bound 0.117*3.577^p/p", "proved for p >= 4 only"));
            break;
        case Family::em_extrap: {
            out.push_back(skipped("SSP disk bound M(D_C) <= 1", "not an SSP family"));
            int r = q / 2;
            if (r <= 8)
                out.push_back(upper("EM full-region bound sqrt(2/pi)*4.74^p/sqrt(p)", rep.m_full,
                                    std::sqrt(2.0 / pi) * std::pow(4.74, q) / std::sqrt(double(q))));
            else
                out.push_back(upper("EM full-region bound 4.986^p/(pi sqrt(p-1))", rep.m_full,
                                    std::pow(4.986, q) / (pi * std::sqrt(q - 1.0))));
            if (q >= 12)
                out.push_back(upper("EM half-plane bound 3.423^p/(pi sqrt(p-1))", rep.m_half,
                                    std::pow(3.423, q) / (pi * std::sqrt(q - 1.0))));
            else
                out.push_back(skipped("EM half-plane bound 3.423^p/(pi sqrt(p-1))", "proved for p >= 12 only"));
            break;
        }
        case Family::classic:
        case Family::taylor:
            out.push_back(skipped("family bounds", "no proved bound for this family"));
            break;
    }
    return out;
}

}  // namespace rkistab
