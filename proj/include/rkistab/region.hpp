#pragma once

#include "rkistab/poly.hpp"

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rkistab {

// {z : |P(z)| <= 1}, described by its traced boundary.
struct StabilityRegion {
    Poly P;
    std::vector<std::vector<cplx>> boundary;  // closed polylines, last point not repeated
    std::vector<bool> origin_component;       // polyline bounds the piece containing z = 0
    double bbox_radius = 0.0;
    double grid_step = 0.0;
    int resolution = 0;
    // intervals [lo, hi] of y with |P(iy)| <= 1, endpoints refined
    std::vector<std::pair<double, double>> axis_segments;

    std::size_t point_count() const;
};

struct DegenerateP : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kDefaultResolution = 1024;

// Radius R with {|P| <= 1} inside |z| <= R, valid for any nonconstant P:
// |P(z)| <= 1 means z is a root of P - e^{i phi}, and Fujiwara's root bound
// applies with |p_0| replaced by |p_0| + 1.
double region_radius_bound(const Poly& P);

// roots of P, sorted by real then imaginary part
std::vector<cplx> poly_roots(const Poly& P);

// Components narrower than the grid step are picked up from the roots of P.
StabilityRegion trace_region(const Poly& P, int resolution = kDefaultResolution);

bool contains(const Poly& P, cplx z);
inline bool contains(const StabilityRegion& region, cplx z) { return contains(region.P, z); }

struct RadiusResult {
    double radius = 0.0;
    cplx point;
};
RadiusResult max_abs_z(const StabilityRegion& region, bool half_plane_only);

// Newton projection onto |P(z)| = 1 along the gradient of |P|^2.
cplx project_to_boundary(const Poly& P, cplx z);

// Maximizes objective along the boundary curve through z0 (a boundary point)
// over a window of +-half_width in arclength, golden section search. With
// half_plane set, points with Re z > 0 are rejected.
std::pair<double, cplx> refine_on_boundary(const Poly& P, cplx z0, double half_width,
                                           const std::function<double(cplx)>& objective, bool half_plane);

// Same along the imaginary axis restricted to [lo, hi].
std::pair<double, cplx> refine_on_axis(double y0, double lo, double hi, double half_width,
                                       const std::function<double(cplx)>& objective);

// Candidate indices along a closed polyline that are local maxima of values.
std::vector<std::size_t> local_maxima(const std::vector<double>& values);

}  // namespace rkistab
