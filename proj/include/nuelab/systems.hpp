#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nuelab/geometry.hpp"

namespace nuelab {

// Constants bounding how the derivative degenerates near the critical set:
// ||Df|| behaves like dist(.,C)^{+-beta} with factor B, and log||Df^{-1}||,
// log|det Df^{-1}| are B/dist^beta-Lipschitz away from C.
struct SmoothnessConstants {
    double B = 2.0;          // > 1
    double beta = 1.0;       // > 0
    double b_exponent = 0.25; // in (0, min{1/2, 1/(2 beta)})

    void validate() const;
};

using ParamMap = std::map<std::string, double>;

// One map of the catalog. Immutable after construction; all operations are
// pure and safe for concurrent use.
class MapSystem {
public:
    virtual ~MapSystem() = default;

    const std::string& name() const { return name_; }
    const Domain& domain() const { return domain_; }
    const SmoothnessConstants& constants() const { return constants_; }
    bool has_critical_set() const { return has_critical_set_; }
    double critical_floor() const { return critical_floor_; }

    // Distance from the image of the whole domain to the domain boundary.
    // Zero for boundaryless domains (circle, torus).
    double domain_margin() const { return domain_margin_; }

    virtual State eval(const State& x) const = 0;

    // Entries of the tangent map, row-major [d00 d01; d10 d11].
    // For 1-D systems only entry 0 is meaningful (the scalar derivative).
    virtual std::array<double, 4> tangent(const State& x) const = 0;

    // Norm of the inverse tangent map under the per-system convention:
    // 1/|f'| in 1-D, 1/|d_x q| (max-entry norm) on the cylinder, operator
    // norm of (Df)^{-1} on the torus. Raises CriticalPoint within the floor.
    virtual double inv_tangent_norm(const State& x) const = 0;

    virtual double jac_det(const State& x) const = 0;

    // Domain-metric distance to the critical set; nullopt when C is empty.
    virtual std::optional<double> critical_distance(const State& x) const = 0;

    // dist_delta: 1 when C is empty or dist(x,C) >= delta, else dist(x,C).
    double truncated_distance(const State& x, double delta) const;

    void check_in_domain(const State& x) const;

protected:
    std::string name_;
    Domain domain_ = Domain::interval(0.0, 1.0);
    SmoothnessConstants constants_;
    bool has_critical_set_ = false;
    double critical_floor_ = 1e-15;
    double domain_margin_ = 0.0;
};

using SystemPtr = std::shared_ptr<const MapSystem>;

// Catalog ids: "doubling", "fig1", "fig2", "viana", "torus".
// Unknown ids raise UnknownCatalogId; unknown or out-of-range parameters
// raise InvalidParams (fail-closed).
SystemPtr build_system(const std::string& name, const ParamMap& params = {});

// --- fig2 extras ------------------------------------------------------
// Trapping intervals around the two attracting cores and the measured
// margin by which f maps each into its own interior.
struct TrappingRegion {
    double lo = 0.0;
    double hi = 0.0;
    double margin = 0.0;
};
const std::vector<TrappingRegion>& fig2_trapping_regions(const MapSystem& sys);

// --- viana extras -----------------------------------------------------
struct VianaInfo {
    double d = 16;
    double a0 = 0.0;
    double alpha_skew = 0.0;
    double interval_halfwidth = 0.0; // I = [-h, h] after the invariance scan
    double eta_exponent = 0.1;
    double margin = 0.0; // invariance margin of S^1 x I
};
const VianaInfo& viana_info(const MapSystem& sys);

// --- torus extras -----------------------------------------------------
struct TorusInfo {
    double center_x = 0.5, center_y = 0.5;
    double radius = 0.15;     // bump support W
    double amplitude = 0.64;  // radial contraction amplitude A
    double eta = 0.1;         // ||Df^{-1}|| <= 1 + eta on W
    double sigma = 1.1;       // |det Df| >= sigma everywhere
};
const TorusInfo& torus_info(const MapSystem& sys);
// True when x lies in the weak-expansion disk W.
bool torus_in_bump(const MapSystem& sys, const State& x);

} // namespace nuelab
