#pragma once

#include "rkistab/forms.hpp"
#include "rkistab/poly.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace rkistab {

// P(z) and Q_1..Q_s (Q_{s+1} = 1 is left out). Exact copies exist when the
// source form is rational.
struct InternalStabilitySet {
    Poly P;
    std::vector<Poly> Q;
    std::optional<RatPoly> P_exact;
    std::optional<std::vector<RatPoly>> Q_exact;

    int stages() const { return static_cast<int>(Q.size()); }
};

// theta[k] has s+1 entries (the last is the update row)
struct DefectCoefficients {
    std::vector<Vec> theta;
};

InternalStabilitySet derive_internal_stability(const ShuOsherForm& so);
InternalStabilitySet derive_internal_stability_butcher(const ButcherTableau& bt);

// stability and internal polynomials of the embedded update row, if any
std::optional<InternalStabilitySet> derive_embedded_internal_stability(const ShuOsherForm& so);

DefectCoefficients defect_coefficients(const ShuOsherForm& so, int p);

struct SpanFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegreeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finds an implementation (alpha, beta) of bt whose internal stability
// polynomials are `targets`. Unconstrained entries of gamma = (I - alpha)^{-1}
// are set to zero.
ShuOsherForm retarget_implementation(const ButcherTableau& bt, const std::vector<RatPoly>& targets);
ShuOsherForm retarget_implementation(const ButcherTableau& bt, const std::vector<Poly>& targets);

// Targets with no constant term: Q_j(z) = z + ... + z^{d-1}/(d-1)! + w z^d,
// where d and w are the degree and leading coefficient of the Butcher-form
// Q_j (the leading term cannot be changed by any implementation). Needs an
// exact tableau.
std::vector<RatPoly> zero_constant_targets(const ButcherTableau& bt);

}  // namespace rkistab
