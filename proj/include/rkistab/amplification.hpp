#pragma once

#include "rkistab/method_spec.hpp"
#include "rkistab/region.hpp"
#include "rkistab/stab_poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rkistab {

// whole: every component of {|P| <= 1}; origin_component: only the piece
// that contains z = 0
enum class RegionScope { whole, origin_component };

struct Argmax {
    int stage = 0;  // 1-based
    cplx z;
};

struct AmpValue {
    double value = 0.0;
    Argmax where;
};

struct AmplificationReport {
    double m_full = 0.0;
    double m_half = 0.0;
    double m_zero = 0.0;
    Argmax argmax_full;
    Argmax argmax_half;
    std::string method_id;
};

struct UntracedRegion : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Stage 1 is skipped: for an explicit method the first stage is U_n itself and
// carries no residual.
AmpValue amplification_factor(const InternalStabilitySet& iss, const StabilityRegion& region,
                              bool restrict_half_plane, RegionScope scope = RegionScope::whole);

double amplification_at_zero(const InternalStabilitySet& iss);
std::optional<Rational> amplification_at_zero_exact(const InternalStabilitySet& iss);

AmplificationReport analyze(const InternalStabilitySet& iss, const StabilityRegion& region, std::string method_id,
                            RegionScope scope = RegionScope::whole);

// max |Q_j| over the disk |z + C| <= C, sampled on `samples` points
double disk_amplification(const InternalStabilitySet& iss, double C, int samples = 1000);

struct Ssp3Analysis {
    int n = 0;
    double rho_n = 0.0;
    double nu_star = 0.0;
    double mu_at_root = 0.0;
    double first_branch = 0.0;   // (n-1)/(2n-1) nu^{(n^2+3n-4)/2}
    double second_branch = 0.0;  // nu^{(n^2-n)/2}
    double m_value = 0.0;
    // lower outer, lower inner, upper inner, upper outer terms of the n >= 9 chain
    double chain[4] = {0, 0, 0, 0};
    bool chain_applicable = false;
    bool chain_holds = false;
};

double ssp3_mu_minus(int n, double rho);
Ssp3Analysis ssp3_analytic(int n);

Rational ee_zero_closed_form(int p);
Rational em_zero_closed_form(int p);

struct BoundCheck {
    std::string name;
    bool applicable = true;
    bool satisfied = true;
    double value = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // bound - value (or value - bound for lower bounds)
    std::string reason;   // why a bound was skipped
};

std::vector<BoundCheck> verify_bounds(const AmplificationReport& report, const MethodSpec& spec,
                                      const InternalStabilitySet* iss = nullptr);

}  // namespace rkistab
