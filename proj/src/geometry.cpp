#include "nuelab/geometry.hpp"

#include <algorithm>

namespace nuelab {

State Domain::wrap(State s) const {
    switch (kind_) {
    case Kind::Circle:
        s.coord[0] = wrap_circle(s.coord[0]);
        s.dim = 1;
        break;
    case Kind::Interval:
        s.dim = 1;
        break;
    case Kind::Cylinder:
        s.coord[0] = wrap_circle(s.coord[0]);
        s.dim = 2;
        break;
    case Kind::Torus2: {
        const double L = circle_len_;
        for (int i = 0; i < 2; ++i) {
            double u = std::fmod(s.coord[i], L);
            if (u < 0.0) u += L;
            if (u >= L) u = 0.0;
            s.coord[i] = u;
        }
        s.dim = 2;
        break;
    }
    }
    return s;
}

bool Domain::contains(const State& s, double tol) const {
    if (s.dim != dim()) return false;
    switch (kind_) {
    case Kind::Circle:
        return s.coord[0] >= circle_origin_ - tol &&
               s.coord[0] < circle_origin_ + circle_len_ + tol;
    case Kind::Interval:
        return s.coord[0] >= lo_ - tol && s.coord[0] <= hi_ + tol;
    case Kind::Cylinder:
        return s.coord[0] >= circle_origin_ - tol &&
               s.coord[0] < circle_origin_ + circle_len_ + tol &&
               s.coord[1] >= lo_ - tol && s.coord[1] <= hi_ + tol;
    case Kind::Torus2:
        return s.coord[0] >= -tol && s.coord[0] < circle_len_ + tol &&
               s.coord[1] >= -tol && s.coord[1] < circle_len_ + tol;
    }
    return false;
}

double Domain::dist(const State& a, const State& b) const {
    switch (kind_) {
    case Kind::Circle:
        return std::abs(circle_diff(a.coord[0], b.coord[0]));
    case Kind::Interval:
        return std::abs(a.coord[0] - b.coord[0]);
    case Kind::Cylinder: {
        const double ds = circle_diff(a.coord[0], b.coord[0]);
        const double dx = a.coord[1] - b.coord[1];
        return std::sqrt(ds * ds + dx * dx);
    }
    case Kind::Torus2: {
        const double d0 = circle_diff(a.coord[0], b.coord[0]);
        const double d1 = circle_diff(a.coord[1], b.coord[1]);
        return std::sqrt(d0 * d0 + d1 * d1);
    }
    }
    return 0.0;
}

State Domain::sample_uniform(CounterRng& rng) const {
    switch (kind_) {
    case Kind::Circle:
        return state1(circle_origin_ + circle_len_ * rng.next_unit());
    case Kind::Interval:
        return state1(lo_ + (hi_ - lo_) * rng.next_unit());
    case Kind::Cylinder:
        return state2(circle_origin_ + circle_len_ * rng.next_unit(),
                      lo_ + (hi_ - lo_) * rng.next_unit());
    case Kind::Torus2:
        return state2(circle_len_ * rng.next_unit(), circle_len_ * rng.next_unit());
    }
    return state1(0.0);
}

} // namespace nuelab
