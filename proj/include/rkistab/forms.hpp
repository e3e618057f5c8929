#pragma once

#include "rkistab/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rkistab {

using Vec = std::vector<double>;
using Matrix = std::vector<Vec>;

// Explicit method in Butcher form. The *_exact members are filled when every
// coefficient is rational; the double members are always present.
struct ButcherTableau {
    int s = 0;
    Matrix A;
    Vec b;
    Vec c;
    std::optional<Vec> b_embedded;
    int order = 1;
    std::optional<int> order_embedded;
    std::string name;

    std::optional<RatMatrix> A_exact;
    std::optional<RatVec> b_exact;
    std::optional<RatVec> b_embedded_exact;

    bool exact() const { return A_exact.has_value() && b_exact.has_value(); }

    static ButcherTableau from_exact(const RatMatrix& A, const RatVec& b, int order,
                                     std::optional<RatVec> b_embedded = std::nullopt,
                                     std::optional<int> order_embedded = std::nullopt,
                                     std::string name = {});
    static ButcherTableau from_double(const Matrix& A, const Vec& b, int order,
                                      std::optional<Vec> b_embedded = std::nullopt,
                                      std::optional<int> order_embedded = std::nullopt,
                                      std::string name = {});
};

// alpha, beta are (s+1) x s; row s is the update. v is derived, never stored.
// An optional second update row (alpha_hat, beta_hat) carries an embedded
// lower-order solution sharing the stages.
struct ShuOsherForm {
    int s = 0;
    Matrix alpha;
    Matrix beta;
    std::optional<Vec> alpha_hat;
    std::optional<Vec> beta_hat;
    int order = 1;
    std::optional<int> order_embedded;
    std::string name;

    std::optional<RatMatrix> alpha_exact;
    std::optional<RatMatrix> beta_exact;
    std::optional<RatVec> alpha_hat_exact;
    std::optional<RatVec> beta_hat_exact;

    bool exact() const { return alpha_exact.has_value() && beta_exact.has_value(); }
    bool has_embedded() const { return alpha_hat.has_value() && beta_hat.has_value(); }

    Vec v() const;
    RatVec v_exact() const;  // requires exact()
    double v_hat() const;    // requires has_embedded()

    static ShuOsherForm from_exact(const RatMatrix& alpha, const RatMatrix& beta, int order,
                                   std::optional<RatVec> alpha_hat = std::nullopt,
                                   std::optional<RatVec> beta_hat = std::nullopt,
                                   std::optional<int> order_embedded = std::nullopt,
                                   std::string name = {});
    static ShuOsherForm from_double(const Matrix& alpha, const Matrix& beta, int order,
                                    std::optional<Vec> alpha_hat = std::nullopt,
                                    std::optional<Vec> beta_hat = std::nullopt,
                                    std::optional<int> order_embedded = std::nullopt,
                                    std::string name = {});
};

// Per-stage perturbations; entry 0 is stage 1, entry s is the update.
using ResidualVector = std::vector<double>;
using StateResidualVector = std::vector<std::vector<double>>;

ButcherTableau shu_osher_to_butcher(const ShuOsherForm& so);
ShuOsherForm butcher_to_shu_osher(const ButcherTableau& bt);

ResidualVector residual_butcher_from_shu_osher(const ShuOsherForm& so, const ResidualVector& r_so);
StateResidualVector residual_butcher_from_shu_osher(const ShuOsherForm& so, const StateResidualVector& r_so);

std::vector<std::string> validate(const ButcherTableau& bt);
std::vector<std::string> validate(const ShuOsherForm& so);

inline constexpr double kValidationTol = 1e-13;

}  // namespace rkistab
