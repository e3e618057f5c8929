#include "rkistab/sim.hpp"

#include "rkistab/amplification.hpp"
#include "rkistab/region.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

namespace rkistab {

namespace {

double norm_inf(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Vec diff(const Vec& a, const Vec& b) {
    Vec d(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
    return d;
}

bool finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

ShuOsherStepper::ShuOsherStepper(const ShuOsherForm& so) : so_(so) {
    auto bad = validate(so);
    if (!bad.empty()) throw std::invalid_argument("invalid Shu-Osher form: " + bad.front());
    v_ = so.v();
    c_ = shu_osher_to_butcher(so).c;
    const auto us = static_cast<std::size_t>(so.s);
    rows_.resize(us + 1);
    for (std::size_t i = 0; i <= us; ++i)
        for (std::size_t j = 0; j < us; ++j)
            if (so.alpha[i][j] != 0.0 || so.beta[i][j] != 0.0)
                rows_[i].push_back({static_cast<int>(j), so.alpha[i][j], so.beta[i][j]});
    if (so.has_embedded()) {
        v_hat_ = so.v_hat();
        for (std::size_t j = 0; j < us; ++j)
            if ((*so.alpha_hat)[j] != 0.0 || (*so.beta_hat)[j] != 0.0)
                hat_row_.push_back({static_cast<int>(j), (*so.alpha_hat)[j], (*so.beta_hat)[j]});
    }
}

StepResult ShuOsherStepper::run(const IvpProblem& problem, double t, const Vec& U, double tau,
                                const std::function<void(int, const Vec&, double, Vec&)>& residual) const {
    const auto us = static_cast<std::size_t>(so_.s);
    const std::size_t m = U.size();
    std::vector<Vec> Y(us, Vec(m)), F(us, Vec(m));
    StepResult out;
    out.residuals.assign(us + 1, Vec(m, 0.0));

    std::vector<double> ny(us, 0.0), nf(us, 0.0);
    const double nu = norm_inf(U);
    // returns sum of |coefficient| * ||term||, the size of the rounded sum
    auto combine = [&](double v, const std::vector<Term>& terms, Vec& y) {
        double mag = std::abs(v) * nu;
        for (std::size_t k = 0; k < m; ++k) y[k] = v * U[k];
        for (const auto& term : terms) {
            auto j = static_cast<std::size_t>(term.j);
            const Vec& yj = Y[j];
            const Vec& fj = F[j];
            if (term.a != 0.0)
                for (std::size_t k = 0; k < m; ++k) y[k] += term.a * yj[k];
            if (term.b != 0.0)
                for (std::size_t k = 0; k < m; ++k) y[k] += tau * term.b * fj[k];
            mag += std::abs(term.a) * ny[j] + tau * std::abs(term.b) * nf[j];
        }
        return mag;
    };

    for (std::size_t i = 0; i < us; ++i) {
        Vec& y = Y[i];
        double mag = combine(v_[i], rows_[i], y);
        if (i > 0) {
            residual(static_cast<int>(i), y, mag, out.residuals[i]);
            for (std::size_t k = 0; k < m; ++k) y[k] += out.residuals[i][k];
        }
        if (!finite(y)) throw NonfiniteState("stage " + std::to_string(i + 1) + " is not finite");
        problem.F(t + c_[i] * tau, y, F[i]);
        ny[i] = norm_inf(y);
        nf[i] = norm_inf(F[i]);
    }
    out.u.assign(m, 0.0);
    double mag = combine(v_[us], rows_[us], out.u);
    residual(static_cast<int>(us), out.u, mag, out.residuals[us]);
    for (std::size_t k = 0; k < m; ++k) out.u[k] += out.residuals[us][k];
    if (!finite(out.u)) throw NonfiniteState("update is not finite");
    if (so_.has_embedded()) {
        Vec uh(m);
        double mh = combine(v_hat_, hat_row_, uh);
        Vec rh(m, 0.0);
        residual(static_cast<int>(us) + 1, uh, mh, rh);
        for (std::size_t k = 0; k < m; ++k) uh[k] += rh[k];
        out.u_hat = std::move(uh);
        out.residual_hat = std::move(rh);
    }
    return out;
}

StepResult ShuOsherStepper::step(const IvpProblem& problem, double t, const Vec& U, double tau,
                                 const PerturbationPolicy& policy, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    return run(problem, t, U, tau, [&](int, const Vec& y, double mag, Vec& r) {
        switch (policy.mode) {
            case PerturbationMode::none: break;
            case PerturbationMode::fixed_magnitude:
                for (double& x : r) x = policy.magnitude * unif(rng);
                break;
            case PerturbationMode::relative_roundoff: {
                double scale = policy.magnitude * (1.0 + norm_inf(y));
                for (double& x : r) x = scale * unif(rng);
                break;
            }
            case PerturbationMode::summation_roundoff: {
                double scale = policy.magnitude * mag;
                for (double& x : r) x = scale * unif(rng);
                break;
            }
        }
    });
}

StepResult ShuOsherStepper::step(const IvpProblem& problem, double t, const Vec& U, double tau,
                                 const StateResidualVector& r) const {
    if (r.size() != static_cast<std::size_t>(so_.s) + 1)
        throw std::invalid_argument("residual vector must have s+1 entries");
    if (norm_inf(r[0]) != 0.0) throw std::invalid_argument("stage 1 residual of an explicit method must be zero");
    return run(problem, t, U, tau, [&](int row, const Vec&, double, Vec& out) {
        if (row <= so_.s) out = r[static_cast<std::size_t>(row)];
    });
}

StepResult step_shu_osher(const ShuOsherForm& so, const IvpProblem& problem, double t, const Vec& U, double tau,
                          const PerturbationPolicy& policy, std::mt19937_64& rng) {
    return ShuOsherStepper(so).step(problem, t, U, tau, policy, rng);
}

RunRecord integrate_adaptive(const ShuOsherForm& pair, const IvpProblem& problem, const StepControllerConfig& cfg,
                             const PerturbationPolicy& policy) {
    if (!pair.has_embedded()) throw std::invalid_argument("adaptive integration needs an embedded pair");
    if (!(cfg.safety > 0.0 && cfg.safety < 1.0) || !(cfg.min_scale < 1.0 && cfg.max_scale > 1.0))
        throw std::invalid_argument("invalid step controller configuration");
    ShuOsherStepper stepper(pair);
    std::mt19937_64 rng(policy.seed);
    const int q = std::min(pair.order, pair.order_embedded.value_or(pair.order));
    const double expo = -1.0 / (q + 1);
    const std::size_t m = problem.u0.size();

    auto wrms = [&](const Vec& e, const Vec& a, const Vec& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(a[k]), std::abs(b[k]));
            s += (e[k] / sc) * (e[k] / sc);
        }
        return std::sqrt(s / static_cast<double>(m));
    };

    RunRecord rec;
    double t = problem.t0;
    Vec U = problem.u0;
    double h = cfg.initial_step;
    if (h <= 0.0) {
        // starting step heuristic of Hairer, Norsett and Wanner
        Vec f0(m), f1(m);
        problem.F(t, U, f0);
        double d0 = wrms(U, U, U), d1 = wrms(f0, U, U);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        Vec u1(m);
        for (std::size_t k = 0; k < m; ++k) u1[k] = U[k] + h0 * f0[k];
        problem.F(t + h0, u1, f1);
        double d2 = wrms(diff(f1, f0), U, U) / h0;
        double mx = std::max(d1, d2);
        double h1 = mx <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / mx, 1.0 / (pair.order + 1));
        h = std::min(100.0 * h0, h1);
    }

    int consecutive = 0;
    bool last_rejected = false;
    const double span = problem.T - problem.t0;
    while (t < problem.T) {
        if (rec.steps >= cfg.max_steps) {
            rec.failed = true;
            rec.failure_reason = "step limit reached";
            break;
        }
        bool final_step = false;
        if (t + h >= problem.T || problem.T - (t + h) < 1e-12 * span) {
            h = problem.T - t;
            final_step = true;
        }
        double err;
        Vec unew;
        try {
            StepResult r = stepper.step(problem, t, U, h, policy, rng);
            err = wrms(diff(r.u, *r.u_hat), U, r.u);
            unew = std::move(r.u);
        } catch (const NonfiniteState&) {
            err = std::numeric_limits<double>::infinity();
        }
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
        if (cfg.record_log) rec.log.push_back({t, h, err <= 1.0, err});
        if (err <= 1.0) {
            t = final_step ? problem.T : t + h;
            U = std::move(unew);
            ++rec.steps;
            consecutive = 0;
            double fac = err == 0.0 ? cfg.max_scale : cfg.safety * std::pow(err, expo);
            fac = std::clamp(fac, cfg.min_scale, cfg.max_scale);
            if (last_rejected) fac = std::min(fac, 1.0);
            h *= fac;
            last_rejected = false;
        } else {
            ++rec.rejections;
            if (++consecutive >= cfg.max_rejections) {
                rec.failed = true;
                rec.failure_reason = std::to_string(cfg.max_rejections) + " consecutive rejections";
                break;
            }
            double fac = std::isfinite(err) ? cfg.safety * std::pow(err, expo) : cfg.min_scale;
            h *= std::clamp(fac, cfg.min_scale, 1.0);
            last_rejected = true;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            rec.failed = true;
            rec.failure_reason = "step size underflow";
            break;
        }
    }
    rec.final_state = U;
    rec.t_final = t;
    if (problem.reference && !rec.failed) rec.global_error = norm_inf(diff(U, problem.reference(problem.T)));
    return rec;
}

Vec kepler_d2_exact(double t) {
    const double e = 0.3;
    // mean anomaly equals t for a = 1, mu = 1
    double E = t + e * std::sin(t);
    for (int it = 0; it < 60; ++it) {
        double dE = (E - e * std::sin(E) - t) / (1.0 - e * std::cos(E));
        E -= dE;
        if (std::abs(dE) < 1e-16 * (1.0 + std::abs(E))) break;
    }
    double se = std::sin(E), ce = std::cos(E), w = std::sqrt(1.0 - e * e), den = 1.0 - e * ce;
    return {ce - e, w * se, -se / den, w * ce / den};
}

std::vector<SweepPoint> tolerance_sweep(const ShuOsherForm& pair, const IvpProblem& problem,
                                        const std::vector<double>& tols, const PerturbationPolicy& policy) {
    std::vector<std::future<RunRecord>> jobs;
    for (double tol : tols) {
        jobs.push_back(std::async(std::launch::async, [&pair, &problem, &policy, tol] {
            StepControllerConfig cfg = StepControllerConfig::with_tolerance(tol);
            cfg.record_log = false;
            return integrate_adaptive(pair, problem, cfg, policy);
        }));
    }
    std::vector<SweepPoint> out;
    for (std::size_t k = 0; k < tols.size(); ++k) out.push_back({tols[k], jobs[k].get()});
    return out;
}

IvpProblem kepler_d2() {
    IvpProblem p;
    p.dim = 4;
    p.name = "D2";
    p.t0 = 0.0;
    p.T = 20.0;
    p.u0 = {0.7, 0.0, 0.0, std::sqrt(13.0 / 7.0)};
    p.F = [](double, const Vec& u, Vec& f) {
        double r2 = u[0] * u[0] + u[1] * u[1];
        double r3 = r2 * std::sqrt(r2);
        f.resize(4);
        f[0] = u[2];
        f[1] = u[3];
        f[2] = -u[0] / r3;
        f[3] = -u[1] / r3;
    };
    p.reference = kepler_d2_exact;
    return p;
}

IvpProblem linear_problem(const Matrix& L, const Vec& u0, double T) {
    IvpProblem p;
    p.dim = static_cast<int>(u0.size());
    p.name = "linear";
    p.u0 = u0;
    p.T = T;
    p.F = [L](double, const Vec& u, Vec& f) {
        f.assign(u.size(), 0.0);
        for (std::size_t i = 0; i < L.size(); ++i)
            for (std::size_t j = 0; j < u.size(); ++j) f[i] += L[i][j] * u[j];
    };
    return p;
}

std::optional<double> ssp_coefficient(const ShuOsherForm& so) {
    const double tol = 1e-12;
    std::optional<double> C;
    Vec v = so.v();
    for (double x : v)
        if (x < -tol) return std::nullopt;
    for (std::size_t i = 0; i < so.alpha.size(); ++i)
        for (std::size_t j = 0; j < so.alpha[i].size(); ++j) {
            double a = so.alpha[i][j], b = so.beta[i][j];
            if (a < -tol || b < -tol) return std::nullopt;
            if (b == 0.0) continue;
            if (a <= tol) return std::nullopt;
            double r = a / b;
            if (C && std::abs(r - *C) > tol * std::max(1.0, *C)) return std::nullopt;
            if (!C) C = r;
        }
    return C;
}

InequalityCheck contractivity_experiment(const ShuOsherForm& ssp_form, const IvpProblem& problem, double tau,
                                         const Vec& U, const Vec& eps0, const StateResidualVector& r) {
    if (!ssp_coefficient(ssp_form)) throw NotCanonical("form is not of the shape alpha = C beta");
    ShuOsherStepper st(ssp_form);
    StateResidualVector zero(r.size(), Vec(U.size(), 0.0));
    Vec base = st.step(problem, problem.t0, U, tau, zero).u;
    Vec start(U.size());
    for (std::size_t k = 0; k < U.size(); ++k) start[k] = U[k] + eps0[k];
    Vec pert = st.step(problem, problem.t0, start, tau, r).u;
    InequalityCheck out;
    out.lhs = norm_inf(diff(pert, base));
    out.rhs = norm_inf(eps0);
    for (const auto& x : r) out.rhs += norm_inf(x);
    return out;
}

InequalityCheck amplification_experiment(const ShuOsherForm& so, const Matrix& L, double tau, const Vec& U,
                                         const Vec& eps0, const StateResidualVector& r) {
    const auto n = static_cast<Eigen::Index>(L.size());
    Eigen::MatrixXd Lm(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) Lm(i, j) = L[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    double comm = (Lm * Lm.transpose() - Lm.transpose() * Lm).norm();
    if (comm > 1e-12 * std::max(1.0, Lm.squaredNorm())) throw std::invalid_argument("L must be normal");

    InternalStabilitySet iss = derive_internal_stability(so);
    Eigen::EigenSolver<Eigen::MatrixXd> es(Lm, false);
    for (Eigen::Index k = 0; k < n; ++k)
        if (!contains(iss.P, tau * cplx(es.eigenvalues()(k))))
            throw SpectrumOutsideRegion("tau * spectrum(L) is not inside the stability region");
    StabilityRegion reg = trace_region(iss.P);
    double M = amplification_factor(iss, reg, false).value;

    Eigen::MatrixXd E = (tau * Lm).exp();
    Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(U.data(), n);
    Eigen::VectorXd ex = E * u;
    Vec exact(ex.data(), ex.data() + n);

    IvpProblem prob = linear_problem(L, U);
    ShuOsherStepper st(so);
    StateResidualVector zero(r.size(), Vec(U.size(), 0.0));
    Vec plain = st.step(prob, 0.0, U, tau, zero).u;
    Vec start(U.size());
    for (std::size_t k = 0; k < U.size(); ++k) start[k] = U[k] + eps0[k];
    Vec pert = st.step(prob, 0.0, start, tau, r).u;

    double rmax = 0.0;
    for (const auto& x : r) rmax = std::max(rmax, norm2(x));
    InequalityCheck out;
    out.lhs = norm2(diff(pert, exact));
    out.rhs = norm2(eps0) + so.s * std::max(M, 1.0) * rmax + norm2(diff(plain, exact));
    return out;
}

}  // namespace rkistab
