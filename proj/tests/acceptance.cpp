// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero when any criterion fails.

#include "helpers.hpp"

#include "rkistab/amplification.hpp"
#include "rkistab/region.hpp"
#include "rkistab/sim.hpp"
#include "rkistab/stab_poly.hpp"
#include "rkistab/tables.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace rkistab;
using testing::sample_forms;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;

    [[gnu::format(printf, 2, 3)]] void note(const char* f, ...) {
        va_list ap;
        va_start(ap, f);
        lines.push_back(vformat(f, ap));
        va_end(ap);
    }
    // record a sub-check; failing ones are marked
    [[gnu::format(printf, 3, 4)]] void check(bool ok, const char* f, ...) {
        va_list ap;
        va_start(ap, f);
        lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + vformat(f, ap));
        va_end(ap);
        pass = pass && ok;
    }

private:
    static std::string vformat(const char* f, va_list ap) {
        char buf[1024];
        std::vsnprintf(buf, sizeof buf, f, ap);
        return buf;
    }
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

AmplificationReport report(const ShuOsherForm& so, RegionScope scope = RegionScope::whole) {
    InternalStabilitySet iss = derive_internal_stability(so);
    return analyze(iss, trace_region(iss.P), so.name, scope);
}

Outcome classic_table() {
    Outcome o;
    const std::vector<std::pair<std::string, double>> ref = {
        {"ssp33", 1.7},    {"heun3", 3.2},      {"rk4", 1.7},          {"merson43", 5.6},
        {"fehlberg54", 5.4}, {"bogacki_shampine54", 7.0}, {"prince_dormand8", 138.8}, {"ssp104", 2.4}};
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& [name, m] : ref) {
        AmplificationReport r = classic_report(name);
        o.check(rel(r.m_full, m) <= 0.02, "%-20s M = %.4f  (ref %.1f, rel err %.2f%%)", name.c_str(), r.m_full, m,
                100 * rel(r.m_full, m));
        if (name == "ssp104")
            o.check(rel(r.m_zero, 0.6) <= 0.02, "%-20s M0 = %.4f (ref 0.6)", name.c_str(), r.m_zero);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < 60, "runtime %.1f s (limit 60 s)", secs);
    return o;
}

Outcome ee12_forms() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    ShuOsherForm nat = build_ee_extrapolation(12);
    AmplificationReport n = report(nat);
    AmplificationReport b = report(butcher_to_shu_osher(shu_osher_to_butcher(nat)));
    InternalStabilitySet bi = derive_internal_stability_butcher(shu_osher_to_butcher(nat));
    // the values are taken over the left half plane; the whole region is printed for reference
    o.check(rel(n.m_half, 3.4e5) <= 0.05, "natural M = %.6g (ref 3.4e5, rel err %.2f%%; whole region %.4g)", n.m_half,
            100 * rel(n.m_half, 3.4e5), n.m_full);
    o.check(rel(n.m_zero, 1.3e5) <= 0.05, "natural M0 = %.6g (ref 1.3e5, rel err %.2f%%)", n.m_zero,
            100 * rel(n.m_zero, 1.3e5));
    o.check(rel(b.m_half, 1.7e5) <= 0.05, "butcher M = %.6g (ref 1.7e5, rel err %.2f%%; whole region %.4g)", b.m_half,
            100 * rel(b.m_half, 1.7e5), b.m_full);
    auto z = amplification_at_zero_exact(bi);
    o.check(z && *z == 0, "butcher M0 = %s exactly", z ? to_string(*z).c_str() : "?");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < 300, "runtime %.1f s (limit 300 s)", secs);
    return o;
}

Outcome ssp3_values() {
    Outcome o;
    const double table[] = {1.575, 1.794, 1.956, 2.091, 2.209, 2.314, 2.411, 2.501, 2.585};
    for (int n = 2; n <= 10; ++n) {
        Ssp3Analysis a = ssp3_analytic(n);
        double up = std::ceil(a.m_value * 1000 - 1e-9) / 1000;
        o.check(std::abs(up - table[n - 2]) < 1e-9, "n = %2d  M = %.6f -> %.3f (ref %.3f)", n, a.m_value, up,
                table[n - 2]);
    }
    for (int n : {2, 3}) {
        double got = report(build_ssp3(n)).m_full, want = ssp3_analytic(n).m_value;
        o.check(rel(got, want) <= 0.005, "n = %d boundary search %.6f vs root %.6f", n, got, want);
    }
    return o;
}

Outcome ssp3_chain() {
    Outcome o;
    for (int n = 9; n <= 12; ++n) {
        Ssp3Analysis a = ssp3_analytic(n);
        bool ok = a.chain_applicable && a.chain[0] <= a.chain[1] && a.chain[1] < a.m_value && a.m_value < a.chain[2] &&
                  a.chain[2] <= a.chain[3];
        o.check(ok, "n = %2d  %.4f <= %.4f < M = %.4f < %.4f <= %.4f", n, a.chain[0], a.chain[1], a.m_value, a.chain[2],
                a.chain[3]);
    }
    return o;
}

Outcome taylor_radii() {
    Outcome o;
    const double full[] = {2.198, 2.539, 2.961, 3.447, 3.990, 4.582, 5.218, 5.888, 6.585, 7.302,
                           8.035, 8.780, 9.535, 10.298, 11.069, 11.846, 12.628, 13.417, 14.210};
    const double half[] = {2.198, 2.539, 2.961, 3.396, 3.581, 3.961, 4.367, 4.800, 5.262, 5.451,
                           5.825, 6.231, 6.657, 7.108, 7.325, 7.700, 8.092, 8.513, 8.955};
    for (int p = 2; p <= 20; ++p) {
        StabilityRegion reg = trace_region(to_double(taylor_exp(p)));
        double f = max_abs_z(reg, false).radius, h = max_abs_z(reg, true).radius;
        double worst_full = 0, worst_half = 0;
        for (const auto& line : reg.boundary)
            for (cplx z : line) {
                worst_full = std::max(worst_full, std::abs(z) / p);
                if (z.real() <= 0) worst_half = std::max(worst_half, std::abs(z) / p);
            }
        bool ok = rel(f, full[p - 2]) <= 0.005 && rel(h, half[p - 2]) <= 0.005 && worst_full <= 1.6 &&
                  (p < 3 || worst_half <= 0.95);
        o.check(ok, "p = %2d  |z| %.5f (ref %.3f)  half %.5f (ref %.3f)  max|z|/p %.3f, half %.3f", p, f, full[p - 2],
                h, half[p - 2], worst_full, worst_half);
    }
    return o;
}

Outcome ee_values() {
    Outcome o;
    const double full[] = {2.198, 6.192, 25.614, 115.313, 524.610, 2427.838, 11431.562,
                           61597.788, 340968.029, 1.871e6, 1.020e7, 5.520e7, 3.168e8};
    const double half[] = {2.198, 6.192, 25.5, 96.305, 190.163, 631.328, 2549.961,
                           11631.367, 46860.486, 98425.587, 336910.368, 1.444e6, 6.561e6};
    auto t0 = std::chrono::steady_clock::now();
    for (int p = 2; p <= 14; ++p) {
        ExtrapolationRow r = ee_row(p);
        double tol = p <= 8 ? 0.005 : 0.05;
        o.check(rel(r.report.m_full, full[p - 2]) <= tol && rel(r.report.m_half, half[p - 2]) <= tol,
                "p = %2d  M %.6g (ref %.6g)  half plane %.6g (ref %.6g)  band %.1f%%", p, r.report.m_full,
                full[p - 2], r.report.m_half, half[p - 2], 100 * tol);
        if (p == 4)
            o.check(std::abs(r.report.m_half - 25.5) <= 1e-10, "p = 4 half plane equals 51/2 (diff %.2e)",
                    std::abs(r.report.m_half - 25.5));
    }
    o.note("runtime %.1f s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return o;
}

Outcome ee_zero() {
    Outcome o;
    const char* want[] = {"9/2", "27/2", "128/3", "3125/24", "1944/5", "5832/5"};
    for (int p = 3; p <= 8; ++p) {
        auto z = amplification_at_zero_exact(derive_internal_stability(build_ee_extrapolation(p)));
        Rational w = parse_rational(want[p - 3]);
        o.check(z && *z == w && ee_zero_closed_form(p) == w, "p = %d  M0 = %s (ref %s)", p,
                z ? to_string(*z).c_str() : "?", want[p - 3]);
    }
    return o;
}

Outcome em_values() {
    Outcome o;
    const double half[] = {2.198, 7.332, 25.378, 88.755};
    for (int p = 2; p <= 8; p += 2) {
        ExtrapolationRow r = em_row(p);
        o.check(rel(r.report.m_half, half[p / 2 - 1]) <= 0.005, "p = %d  half plane M %.6g (ref %.3f)", p,
                r.report.m_half, half[p / 2 - 1]);
        o.check(rel(r.report.m_full, r.report.m_half) <= 0.005, "p = %d  whole region %.6g equals half plane", p,
                r.report.m_full);
    }
    const char* want[] = {"1", "4/3", "81/40", "1024/315", "16384/2835"};
    for (int p = 2; p <= 10; p += 2) {
        Rational w = parse_rational(want[p / 2 - 1]);
        Rational closed = em_zero_closed_form(p);
        auto z = amplification_at_zero_exact(derive_internal_stability(build_em_extrapolation(p)));
        // at p = 2 the built form folds the only midpoint stage into the update, so its
        // stage value at 0 is not the chain value; the closed form is compared instead
        bool ok = closed == w && (p == 2 || (z && *z == w));
        o.check(ok, "p = %2d  M0 closed form %s, built form %s (ref %s)", p, to_string(closed).c_str(),
                z ? to_string(*z).c_str() : "?", want[p / 2 - 1]);
    }
    return o;
}

RatPoly chain_sum_ee(int p) {
    RatVec w = ee_weights(p).weights;
    RatPoly sum;
    for (int m = 1; m <= p; ++m) sum += binomial_power(1, Rational(1, m), m) * w[static_cast<std::size_t>(m - 1)];
    sum.trim_exact();
    return sum;
}

RatPoly chain_sum_em(int p) {
    int r = p / 2;
    RatVec w = em_weights(p).weights;
    RatPoly sum;
    for (int m = 1; m <= r; ++m) {
        RatPoly a = RatPoly::constant(1), b = binomial_power(1, Rational(1, 2 * m), 1);
        for (int k = 1; k < 2 * m; ++k) {
            RatPoly c = a;
            c.add_linear_times(0, Rational(1, m), b);
            a = b;
            b = c;
        }
        sum += b * w[static_cast<std::size_t>(m - 1)];
    }
    sum.trim_exact();
    return sum;
}

Outcome identities() {
    Outcome o;
    int bad = 0;
    for (int p = 1; p <= 12; ++p) {
        RatPoly t = taylor_exp(p);
        bool ok = *derive_internal_stability(build_ee_extrapolation(p)).P_exact == t && chain_sum_ee(p) == t;
        if (!ok) o.check(false, "ee p = %d", p), ++bad;
    }
    o.check(bad == 0, "ee p = 1..12: built P and sum of weighted Euler chains equal the Taylor polynomial");
    bad = 0;
    for (int p = 2; p <= 12; p += 2) {
        RatPoly t = taylor_exp(p);
        bool ok = *derive_internal_stability(build_em_extrapolation(p)).P_exact == t && chain_sum_em(p) == t;
        if (!ok) o.check(false, "em p = %d", p), ++bad;
    }
    o.check(bad == 0, "em p = 2..12: built P and sum of weighted midpoint chains equal the Taylor polynomial");
    return o;
}

Outcome closed_forms() {
    Outcome o;
    auto run = [&](Family f, int lo, int hi, int stepq, const char* label) {
        double worst = 0;
        for (int q = lo; q <= hi; q += stepq) {
            MethodSpec s;
            s.family = f;
            s.parameter = q;
            InternalStabilitySet closed = internal_stability_closed_form(s);
            InternalStabilitySet derived = derive_internal_stability(build(s));
            worst = std::max(worst, relative_coeff_distance(closed.P, derived.P));
            if (closed.Q.size() != derived.Q.size()) worst = INFINITY;
            else
                for (std::size_t j = 0; j < closed.Q.size(); ++j)
                    worst = std::max(worst, relative_coeff_distance(closed.Q[j], derived.Q[j]));
        }
        o.check(worst <= 1e-11, "%-5s %2d..%-2d largest relative coefficient difference %.2e", label, lo, hi, worst);
    };
    run(Family::ssp2, 2, 12, 1, "ssp2");
    run(Family::ssp3, 2, 6, 1, "ssp3");
    run(Family::ee_extrap, 1, 12, 1, "ee");
    run(Family::em_extrap, 2, 12, 2, "em");
    return o;
}

IvpProblem scalar(double lambda) { return linear_problem({{lambda}}, {1.0}); }

StateResidualVector zeros(const ShuOsherForm& so, std::size_t m) {
    return StateResidualVector(static_cast<std::size_t>(so.s) + 1, Vec(m, 0.0));
}

Outcome properties() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1, 1);

    double disk = 0;
    for (int s = 2; s <= 12; ++s) disk = std::max(disk, disk_amplification(derive_internal_stability(build_ssp2(s)), s - 1.0));
    for (int n = 2; n <= 6; ++n)
        disk = std::max(disk, disk_amplification(derive_internal_stability(build_ssp3(n)), double(n) * n - n));
    o.check(disk <= 1 + 1e-9, "SSP disk bound: max |Q_j| on |z + C| <= C is %.12f (ssp2 s <= 12, ssp3 n <= 6)", disk);

    double worst = -INFINITY;
    for (int s = 2; s <= 12; ++s) {
        double m = report(build_ssp2(s)).m_full;
        worst = std::max(worst, m - (s + 1.0) / s);
    }
    o.check(worst <= 0, "SSP2 bound M <= (s+1)/s for s = 2..12 (largest M - bound %.3e)", worst);

    int held = 0, total = 0;
    {
        ShuOsherForm so = build_ssp2(4);
        IvpProblem p = scalar(-1.0);
        for (int k = 0; k < 100; ++k, ++total) {
            StateResidualVector r = zeros(so, 1);
            for (std::size_t j = 1; j < r.size(); ++j) r[j][0] = 1e-3 * u(rng);
            held += contractivity_experiment(so, p, 3 * 1.9, {u(rng)}, {1e-3 * u(rng)}, r).holds();
        }
        ShuOsherForm s3 = build_ssp3(3);
        IvpProblem cubic;
        cubic.dim = 1;
        cubic.u0 = {1.0};
        cubic.F = [](double, const Vec& x, Vec& f) { f = {-x[0] * x[0] * x[0]}; };
        for (int k = 0; k < 100; ++k, ++total) {
            StateResidualVector r = zeros(s3, 1);
            for (std::size_t j = 1; j < r.size(); ++j) r[j][0] = 1e-4 * u(rng);
            held += contractivity_experiment(s3, cubic, 3.0, {0.5 * u(rng)}, {1e-3 * u(rng)}, r).holds();
        }
    }
    o.check(held == total, "contractivity inequality held in %d of %d random draws", held, total);

    double one_step = 0;
    for (const auto& so : sample_forms()) {
        InternalStabilitySet iss = derive_internal_stability(so);
        ShuOsherStepper st(so);
        for (int k = 0; k < 50; ++k) {
            double lambda = -2.0 + 2.5 * u(rng), tau = 0.5 * (1.0 + u(rng)) + 1e-3, U = u(rng);
            StateResidualVector r = zeros(so, 1);
            for (std::size_t j = 1; j < r.size(); ++j) r[j][0] = 1e-3 * u(rng);
            double got = st.step(scalar(lambda), 0.0, {U}, tau, r).u[0];
            double z = tau * lambda;
            double want = eval(iss.P, z) * U + r.back()[0];
            double scale = std::abs(eval(iss.P, z) * U) + std::abs(r.back()[0]);
            for (int j = 0; j < so.s; ++j) {
                double term = eval(iss.Q[static_cast<std::size_t>(j)], z) * r[static_cast<std::size_t>(j)][0];
                want += term;
                scale += std::abs(term);
            }
            one_step = std::max(one_step, std::abs(got - want) / std::max(1.0, scale));
        }
    }
    o.check(one_step <= 1e-12, "one-step error formula: largest relative deviation %.2e", one_step);

    double pdist = 0, prod = 0;
    for (const auto& so : sample_forms()) {
        InternalStabilitySet a = derive_internal_stability(so);
        ButcherTableau bt = shu_osher_to_butcher(so);
        InternalStabilitySet b = derive_internal_stability_butcher(bt);
        pdist = std::max(pdist, relative_coeff_distance(a.P, b.P));
        auto n = static_cast<std::size_t>(so.s) + 1;
        ResidualVector r(n, 0.0);
        for (std::size_t k = 1; k < n; ++k) r[k] = u(rng);
        ResidualVector rb = residual_butcher_from_shu_osher(so, r);
        for (int t = 0; t < 20; ++t) {
            cplx z(2 * u(rng), 2 * u(rng));
            cplx ea = r[n - 1], eb = rb[n - 1];
            double scale = std::abs(r[n - 1]);
            for (std::size_t j = 0; j + 1 < n; ++j) {
                ea += eval(a.Q[j], z) * r[j];
                eb += eval(b.Q[j], z) * rb[j];
                scale += std::abs(eval(a.Q[j], z) * r[j]);
            }
            prod = std::max(prod, std::abs(ea - eb) / std::max(1.0, scale));
        }
    }
    o.check(pdist <= 1e-12, "P is the same in both forms (largest coefficient distance %.2e)", pdist);
    o.check(prod <= 1e-11, "error products agree after the residual transformation (largest %.2e)", prod);

    // the same method run from either form, no residuals
    double scal = 0, traj = 0;
    IvpProblem d2 = kepler_d2();
    for (const auto& so : sample_forms()) {
        ShuOsherStepper a(so), b(butcher_to_shu_osher(shu_osher_to_butcher(so)));
        for (int k = 0; k < 20; ++k) {
            double lambda = -3.0 + 3.5 * (u(rng) + 1) / 2, tau = 0.05 + 0.5 * (u(rng) + 1) / 2;
            double ya = a.step(scalar(lambda), 0.0, {1.0}, tau, zeros(so, 1)).u[0];
            double yb = b.step(scalar(lambda), 0.0, {1.0}, tau, zeros(so, 1)).u[0];
            // relative to the larger of |U0| = 1 and |U1|
            scal = std::max(scal, std::abs(ya - yb) / std::max(1.0, std::abs(ya)));
        }
        Vec ua = d2.u0, ub = d2.u0;
        for (int n = 0; n < 100; ++n) {
            ua = a.step(d2, 0.05 * n, ua, 0.05, zeros(so, 4)).u;
            ub = b.step(d2, 0.05 * n, ub, 0.05, zeros(so, 4)).u;
        }
        double sc = 0, d = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            sc = std::max(sc, std::abs(ua[k]));
            d = std::max(d, std::abs(ua[k] - ub[k]));
        }
        traj = std::max(traj, d / sc);
    }
    o.check(scal <= 1e-13, "one step on U' = lambda U agrees across forms (largest relative difference %.2e)", scal);
    o.check(traj <= 1e-10, "100 Kepler steps agree across forms (largest relative difference %.2e)", traj);

    double rt = 0;
    for (const auto& so : {build_ssp2(6), build_ssp3(3), build_ee_extrapolation(5), build_em_extrapolation(4)}) {
        InternalStabilitySet nat = derive_internal_stability(so);
        ButcherTableau bt = shu_osher_to_butcher(so);
        InternalStabilitySet got = derive_internal_stability(retarget_implementation(bt, nat.Q));
        for (int j = 0; j < so.s; ++j)
            rt = std::max(rt, relative_coeff_distance(got.Q[static_cast<std::size_t>(j)], nat.Q[static_cast<std::size_t>(j)]));
    }
    o.check(rt <= 1e-10, "retargeting round trip: largest coefficient distance %.2e", rt);

    ShuOsherForm re = ee12_retargeted();
    InternalStabilitySet ri = derive_internal_stability(re);
    AmplificationReport rr = analyze(ri, trace_region(ri.P), re.name);
    auto z = amplification_at_zero_exact(ri);
    o.check(z && *z == 0, "ee12 retarget M0 = %s", z ? to_string(*z).c_str() : "?");
    o.check(rel(rr.m_half, 8.3e4) <= 0.10, "ee12 retarget M = %.6g (ref 8.3e4, rel err %.2f%%; whole region %.4g)",
            rr.m_half, 100 * rel(rr.m_half, 8.3e4), rr.m_full);
    return o;
}

std::vector<double> decades(int from, int to) {
    std::vector<double> t;
    for (int e = from; e >= to; --e) t.push_back(std::pow(10.0, e));
    return t;
}

long steps_at(const std::vector<SweepPoint>& sw, double tol) {
    for (const auto& p : sw)
        if (std::abs(p.tol / tol - 1) < 1e-9) return p.run.failed ? -1 : p.run.steps;
    return -1;
}

void print_sweep(Outcome& o, const char* label, const std::vector<SweepPoint>& sw) {
    std::string s;
    for (const auto& p : sw) {
        char buf[96];
        if (p.run.failed)
            std::snprintf(buf, sizeof buf, " %.0e:fail", p.tol);
        else
            std::snprintf(buf, sizeof buf, " %.0e:%ld/%.1e", p.tol, p.run.steps, p.run.global_error);
        s += buf;
    }
    o.note("%s (tol:steps/error)%s", label, s.c_str());
}

Outcome kepler_sweep() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    IvpProblem d2 = kepler_d2();
    PerturbationPolicy pol{PerturbationMode::summation_roundoff, 0x1p-52, 1};
    ShuOsherForm nat = build_ee_extrapolation(12);
    ShuOsherForm but = butcher_to_shu_osher(shu_osher_to_butcher(nat));

    auto sn = tolerance_sweep(nat, d2, decades(-4, -13), pol);
    print_sweep(o, "ee12 natural", sn);
    double first_fail = 0;
    bool completes_above = true, fails_below = true;
    for (const auto& p : sn) {
        if (p.run.failed && first_fail == 0) first_fail = p.tol;
        if (first_fail == 0 && p.run.failed) completes_above = false;
        if (first_fail != 0 && !p.run.failed) fails_below = false;
    }
    o.check(first_fail >= 1e-11 * (1 - 1e-9) && first_fail <= 1e-9 * (1 + 1e-9) && completes_above && fails_below,
            "(a) natural form: controller fails from tol %.0e down (window 1e-11..1e-9)", first_fail);

    auto sb = tolerance_sweep(but, d2, decades(-4, -13), pol);
    print_sweep(o, "ee12 butcher", sb);
    long b8 = steps_at(sb, 1e-8), b11 = steps_at(sb, 1e-11);
    o.check(b8 > 0 && b11 > 0 && b11 >= 5 * b8, "(b) butcher form completes; steps %ld at 1e-11 vs %ld at 1e-8 (%.1fx)",
            b11, b8, b8 > 0 ? double(b11) / b8 : 0.0);

    auto sf = tolerance_sweep(classic_natural_form("fehlberg54"), d2, decades(-4, -12), pol);
    print_sweep(o, "fehlberg54", sf);
    bool mono = true;
    for (std::size_t k = 0; k < sf.size(); ++k) {
        if (sf[k].run.failed) mono = false;
        if (k && sf[k].run.global_error > sf[k - 1].run.global_error) mono = false;
    }
    o.check(mono, "(c) fehlberg error decreases monotonically down to 1e-12 (%.2e at 1e-12)",
            sf.back().run.failed ? NAN : sf.back().run.global_error);

    // informational: the same sweep with a per-stage relative perturbation
    PerturbationPolicy relp{PerturbationMode::relative_roundoff, 0x1p-52, 1};
    auto rb = tolerance_sweep(but, d2, {1e-8, 1e-11}, relp);
    o.note("info: relative perturbation, butcher steps %ld at 1e-11 vs %ld at 1e-8", steps_at(rb, 1e-11),
           steps_at(rb, 1e-8));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < 600, "runtime %.1f s (limit 600 s)", secs);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"classic methods, origin component", classic_table},
        {"ee12 natural and butcher forms", ee12_forms},
        {"ssp3 through the root of mu", ssp3_values},
        {"ssp3 inequality chain, n = 9..12", ssp3_chain},
        {"Taylor region radii and bounds", taylor_radii},
        {"ee amplification, whole region and half plane", ee_values},
        {"ee amplification at zero, exact", ee_zero},
        {"em amplification", em_values},
        {"extrapolation polynomial identities", identities},
        {"closed-form vs derived internal polynomials", closed_forms},
        {"property suites", properties},
        {"Kepler tolerance sweep", kepler_sweep},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.check(false, "threw: %s", e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2zu: %s  %s (%.1f s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, secs);
        for (const auto& l : o.lines) std::printf("    %s\n", l.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
