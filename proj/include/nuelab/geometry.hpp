#pragma once

#include <array>
#include <cmath>
#include <string>

#include "nuelab/errors.hpp"
#include "nuelab/rng.hpp"

namespace nuelab {

// Point of a phase domain. coord[1] is unused for 1-D domains.
struct State {
    std::array<double, 2> coord{0.0, 0.0};
    int dim = 1;

    double x() const { return coord[0]; }
    double y() const { return coord[1]; }
};

inline State state1(double x) { return State{{x, 0.0}, 1}; }
inline State state2(double x, double y) { return State{{x, y}, 2}; }

// Flat phase domains: a circle of configurable length and chart origin,
// a closed interval, the product cylinder, and the square 2-torus.
// Circle factors wrap; interval factors do not.
class Domain {
public:
    enum class Kind { Circle, Interval, Cylinder, Torus2 };

    static Domain circle(double length, double origin = 0.0) {
        Domain d;
        d.kind_ = Kind::Circle;
        d.circle_len_ = length;
        d.circle_origin_ = origin;
        return d;
    }
    static Domain interval(double lo, double hi) {
        Domain d;
        d.kind_ = Kind::Interval;
        d.lo_ = lo;
        d.hi_ = hi;
        return d;
    }
    // circle factor in coord 0, interval factor in coord 1
    static Domain cylinder(double circle_len, double lo, double hi) {
        Domain d;
        d.kind_ = Kind::Cylinder;
        d.circle_len_ = circle_len;
        d.circle_origin_ = 0.0;
        d.lo_ = lo;
        d.hi_ = hi;
        return d;
    }
    static Domain torus2() {
        Domain d;
        d.kind_ = Kind::Torus2;
        d.circle_len_ = 1.0;
        d.circle_origin_ = 0.0;
        return d;
    }

    Kind kind() const { return kind_; }
    int dim() const { return (kind_ == Kind::Circle || kind_ == Kind::Interval) ? 1 : 2; }
    double circle_length() const { return circle_len_; }
    double circle_origin() const { return circle_origin_; }
    double interval_lo() const { return lo_; }
    double interval_hi() const { return hi_; }
    bool has_circle_factor() const { return kind_ != Kind::Interval; }
    bool has_interval_factor() const { return kind_ == Kind::Interval || kind_ == Kind::Cylinder; }

    bool same_as(const Domain& o) const {
        return kind_ == o.kind_ && circle_len_ == o.circle_len_ &&
               circle_origin_ == o.circle_origin_ && lo_ == o.lo_ && hi_ == o.hi_;
    }

    // Reduce a circle coordinate into the chart [origin, origin + L).
    double wrap_circle(double v) const {
        const double L = circle_len_;
        double u = std::fmod(v - circle_origin_, L);
        if (u < 0.0) u += L;
        // fmod can land exactly on L after the correction
        if (u >= L) u = 0.0;
        return circle_origin_ + u;
    }

    State wrap(State s) const;

    bool contains(const State& s, double tol = 1e-9) const;

    // Signed circular difference a - b reduced into (-L/2, L/2].
    double circle_diff(double a, double b) const {
        const double L = circle_len_;
        double d = std::fmod(a - b, L);
        if (d > 0.5 * L) d -= L;
        if (d <= -0.5 * L) d += L;
        return d;
    }

    // Flat metric; circle factors measured with wrap-around.
    double dist(const State& a, const State& b) const;

    State sample_uniform(CounterRng& rng) const;

private:
    Kind kind_ = Kind::Interval;
    double circle_len_ = 1.0;
    double circle_origin_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 1.0;
};

} // namespace nuelab
