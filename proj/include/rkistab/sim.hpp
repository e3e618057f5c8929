#pragma once

#include "rkistab/forms.hpp"
#include "rkistab/stab_poly.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rkistab {

struct IvpProblem {
    int dim = 0;
    std::function<void(double t, const Vec& u, Vec& f)> F;
    Vec u0;
    double t0 = 0.0;
    double T = 1.0;
    std::function<Vec(double t)> reference;  // may be empty
    std::string name;
};

enum class PerturbationMode { none, fixed_magnitude, relative_roundoff, summation_roundoff };

// fixed_magnitude: entries uniform in [-eps, eps];
// relative_roundoff: uniform in [-eps, eps] * (1 + ||Y_i||_inf);
// summation_roundoff: uniform in [-eps, eps] * (|v_i| ||U|| + sum_j |alpha_ij| ||Y_j|| + tau |beta_ij| ||F_j||),
// the size of the rounding error of the stage sum itself
struct PerturbationPolicy {
    PerturbationMode mode = PerturbationMode::none;
    double magnitude = 0x1p-52;
    std::uint64_t seed = 0;
};

struct StepControllerConfig {
    double abs_tol = 1e-6;
    double rel_tol = 1e-6;
    double safety = 0.9;
    double min_scale = 0.2;
    double max_scale = 5.0;
    int max_rejections = 50;  // consecutive
    long max_steps = 2'000'000;
    double initial_step = 0.0;  // 0: automatic
    bool record_log = true;

    static StepControllerConfig with_tolerance(double tol) {
        StepControllerConfig c;
        c.abs_tol = c.rel_tol = tol;
        return c;
    }
};

struct StepLog {
    double t = 0.0;
    double tau = 0.0;
    bool accepted = false;
    double err = 0.0;
};

struct RunRecord {
    std::vector<StepLog> log;
    Vec final_state;
    double t_final = 0.0;
    double global_error = -1.0;  // max-norm error against the reference, -1 if none
    long steps = 0;               // accepted
    long rejections = 0;
    bool failed = false;
    std::string failure_reason;
};

struct NonfiniteState : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotCanonical : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SpectrumOutsideRegion : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct StepResult {
    Vec u;
    std::optional<Vec> u_hat;            // embedded solution if the form has one
    StateResidualVector residuals;       // s stage entries plus the update row
    std::optional<Vec> residual_hat;     // residual injected into the embedded row
};

// Runs a Shu-Osher form with the stage sparsity and c precomputed.
class ShuOsherStepper {
public:
    explicit ShuOsherStepper(const ShuOsherForm& so);

    // residuals drawn from the policy
    StepResult step(const IvpProblem& problem, double t, const Vec& U, double tau, const PerturbationPolicy& policy,
                    std::mt19937_64& rng) const;
    // prescribed residuals: r has s+1 entries, entry 0 (stage 1) must be zero
    StepResult step(const IvpProblem& problem, double t, const Vec& U, double tau, const StateResidualVector& r) const;

    const ShuOsherForm& form() const { return so_; }

private:
    struct Term {
        int j;
        double a, b;
    };
    StepResult run(const IvpProblem& problem, double t, const Vec& U, double tau,
                   const std::function<void(int row, const Vec& y, double sum_size, Vec& r)>& residual) const;

    ShuOsherForm so_;
    Vec v_;
    double v_hat_ = 0.0;
    Vec c_;
    std::vector<std::vector<Term>> rows_;  // s+1 rows
    std::vector<Term> hat_row_;
};

StepResult step_shu_osher(const ShuOsherForm& so, const IvpProblem& problem, double t, const Vec& U, double tau,
                          const PerturbationPolicy& policy, std::mt19937_64& rng);

RunRecord integrate_adaptive(const ShuOsherForm& pair, const IvpProblem& problem, const StepControllerConfig& cfg,
                             const PerturbationPolicy& policy);

struct SweepPoint {
    double tol = 0.0;
    RunRecord run;
};
// one run per tolerance (abs_tol = rel_tol = tol), run concurrently; every
// run uses the same seed
std::vector<SweepPoint> tolerance_sweep(const ShuOsherForm& pair, const IvpProblem& problem,
                                        const std::vector<double>& tols, const PerturbationPolicy& policy);

// x'' = -x/r^3, y'' = -y/r^3, state (x, y, x', y'); the reference is the
// exact Kepler orbit (a = 1, e = 0.3)
IvpProblem kepler_d2();
Vec kepler_d2_exact(double t);

// U' = L U
IvpProblem linear_problem(const Matrix& L, const Vec& u0, double T = 1.0);

// largest C with alpha = C beta wherever beta != 0, alpha, beta, v >= 0;
// nullopt when the form is not of that shape
std::optional<double> ssp_coefficient(const ShuOsherForm& so);

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds() const { return lhs <= rhs * (1.0 + 1e-12) + 1e-300; }
};

// One step from U (unperturbed) and U + eps0 (perturbed by the residuals r):
// lhs = ||eps_{n+1}||, rhs = ||eps_n|| + sum_j ||r_j||. Norm: max norm.
InequalityCheck contractivity_experiment(const ShuOsherForm& ssp_form, const IvpProblem& problem, double tau,
                                         const Vec& U, const Vec& eps0, const StateResidualVector& r);

// One step of U' = L U from U(t_n) + eps0 with residuals r against the exact
// flow: lhs = ||eps_{n+1}||_2, rhs = ||eps_n|| + s max(M, 1) max_j ||r_j|| +
// local error of the unperturbed step. M is computed over the stability region.
InequalityCheck amplification_experiment(const ShuOsherForm& so, const Matrix& L, double tau, const Vec& U,
                                         const Vec& eps0, const StateResidualVector& r);

}  // namespace rkistab
