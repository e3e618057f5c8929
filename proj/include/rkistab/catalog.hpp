#pragma once

#include "rkistab/forms.hpp"
#include "rkistab/method_spec.hpp"
#include "rkistab/stab_poly.hpp"

#include <stdexcept>
#include <string>

namespace rkistab {

struct UnknownMethod : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnsupportedFamily : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Coefficients of T_{m,1}, m = 1..count, in the final extrapolated value.
// `embedded` holds the one-column-short diagonal entry (zero for m = 1).
struct ExtrapolationWeights {
    RatVec weights;
    RatVec embedded;
};
ExtrapolationWeights ee_weights(int p);
ExtrapolationWeights em_weights(int p);

// Natural (Shu-Osher) forms. Stage 1 is U_n in every family.
ShuOsherForm build_ssp2(int s);
ShuOsherForm build_ssp3(int n);
// Chains m = 2..p follow each other, stage (m, j) holds Y_{m,j} for
// j = 1..m-1; the last Euler step of every chain goes into the update row,
// so s = 1 + p(p-1)/2.
ShuOsherForm build_ee_extrapolation(int p, bool embedded = true);
// Chains m = 1..r, stage (m, j) holds Y_{m,j} for j = 1..2m-1; s = 1 + r^2.
ShuOsherForm build_em_extrapolation(int p, bool embedded = true);

// 1-based flat stage index of chain entry (m, j)
int ee_stage_index(int m, int j);
int em_stage_index(int m, int j);

ButcherTableau classic_tableau(const std::string& name);
// Shu-Osher implementation of a classic method: the SSP methods have their
// usual convex-combination form, the rest use the Butcher embedding.
ShuOsherForm classic_natural_form(const std::string& name);

// P and Q_1..Q_s written down directly from the family formulas, in the flat
// stage numbering of the built natural forms.
InternalStabilitySet internal_stability_closed_form(const MethodSpec& spec);

ShuOsherForm build(const MethodSpec& spec);
ButcherTableau build_tableau(const MethodSpec& spec);

// P(z) of any spec, including taylor:p
RatPoly stability_polynomial(const MethodSpec& spec);

}  // namespace rkistab
