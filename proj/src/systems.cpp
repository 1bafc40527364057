#include "nuelab/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "nuelab/viana.hpp"

namespace nuelab {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidParams(msg);
}

double take(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

void reject_unknown(const ParamMap& p, std::initializer_list<const char*> known) {
    for (const auto& [k, v] : p) {
        bool ok = false;
        for (const char* name : known)
            if (k == name) { ok = true; break; }
        if (!ok) throw InvalidParams("unknown parameter '" + k + "'");
    }
}

} // namespace

void SmoothnessConstants::validate() const {
    if (!(B > 1.0)) throw InvalidParams("SmoothnessConstants: B must exceed 1");
    if (!(beta > 0.0)) throw InvalidParams("SmoothnessConstants: beta must be positive");
    const double cap = std::min(0.5, 0.5 / beta);
    if (!(b_exponent > 0.0 && b_exponent < cap))
        throw InvalidParams("SmoothnessConstants: b outside (0, min{1/2, 1/(2 beta)})");
}

void MapSystem::check_in_domain(const State& x) const {
    if (!domain_.contains(x))
        throw OutOfDomain(name_ + ": state outside phase domain");
}

double MapSystem::truncated_distance(const State& x, double delta) const {
    if (delta <= 0.0) throw InvalidParams("truncated_distance: delta must be positive");
    auto d = critical_distance(x);
    if (!d.has_value() || *d >= delta) return 1.0;
    return *d;
}

// ---------------------------------------------------------------------
// doubling: s -> k s (mod 1), uniformly expanding calibration system
// ---------------------------------------------------------------------

class DoublingSystem final : public MapSystem {
public:
    explicit DoublingSystem(const ParamMap& p) {
        reject_unknown(p, {"factor", "critical_floor"});
        const double f = take(p, "factor", 2.0);
        require(f >= 2.0 && std::floor(f) == f, "doubling: factor must be an integer >= 2");
        factor_ = f;
        name_ = "doubling";
        domain_ = Domain::circle(1.0, 0.0);
        constants_ = SmoothnessConstants{2.0, 1.0, 0.25};
        has_critical_set_ = false;
        critical_floor_ = take(p, "critical_floor", 1e-15);
    }

    State eval(const State& x) const override {
        check_in_domain(x);
        return domain_.wrap(state1(factor_ * x.x()));
    }
    std::array<double, 4> tangent(const State&) const override {
        return {factor_, 0.0, 0.0, 0.0};
    }
    double inv_tangent_norm(const State& x) const override {
        check_in_domain(x);
        return 1.0 / factor_;
    }
    double jac_det(const State&) const override { return factor_; }
    std::optional<double> critical_distance(const State&) const override { return std::nullopt; }

private:
    double factor_;
};

// ---------------------------------------------------------------------
// fig1: two quadratic arcs on the length-4 circle [-3, 1)
//   f(x) = 1 - 2 x^2        on [-1, 1]
//   f(x) = 2 (x+2)^2 - 3    on [-3, -1]
// C^1 across both junctions; critical points {0, -2}.
// ---------------------------------------------------------------------

class Fig1System final : public MapSystem {
public:
    explicit Fig1System(const ParamMap& p) {
        reject_unknown(p, {"critical_floor"});
        name_ = "fig1";
        domain_ = Domain::circle(4.0, -3.0);
        constants_ = SmoothnessConstants{2.0, 1.0, 0.25};
        has_critical_set_ = true;
        critical_floor_ = take(p, "critical_floor", 1e-15);
    }

    static double raw(double x) {
        return (x >= -1.0) ? 1.0 - 2.0 * x * x : 2.0 * (x + 2.0) * (x + 2.0) - 3.0;
    }
    static double raw_deriv(double x) {
        return (x >= -1.0) ? -4.0 * x : 4.0 * (x + 2.0);
    }

    State eval(const State& x) const override {
        check_in_domain(x);
        const double u = domain_.wrap_circle(x.x());
        return domain_.wrap(state1(raw(u)));
    }
    std::array<double, 4> tangent(const State& x) const override {
        return {raw_deriv(domain_.wrap_circle(x.x())), 0.0, 0.0, 0.0};
    }
    double inv_tangent_norm(const State& x) const override {
        check_in_domain(x);
        const auto d = critical_distance(x);
        if (*d < critical_floor_)
            throw CriticalPoint("fig1: derivative vanishes at x in {0, -2}");
        return 1.0 / std::abs(raw_deriv(domain_.wrap_circle(x.x())));
    }
    double jac_det(const State& x) const override {
        return std::abs(raw_deriv(domain_.wrap_circle(x.x())));
    }
    std::optional<double> critical_distance(const State& x) const override {
        const double u = domain_.wrap_circle(x.x());
        const double d0 = std::abs(domain_.circle_diff(u, 0.0));
        const double d2 = std::abs(domain_.circle_diff(u, -2.0));
        return std::min(d0, d2);
    }
};

// ---------------------------------------------------------------------
// fig2: two quadratic pieces on I = [-7, 2] joined by a C^1 spline glue
//   q_a(x) = a - x^2            on [-2, 2]
//   p_a(x) = (x+5)^2 - 5 - a    on [-7, -3]   (conjugate to q_a via x -> -x-5)
// Both junction values -1-a and a-4 fall inside (-3, -2), so every
// continuous glue crosses the diagonal. The glue therefore rises briefly,
// plunges below -3 (handing those orbits to the left parabola), and rises
// back, so its unique fixed point sits on the steep plunge and repels;
// the constructor verifies this and that glue orbits actually escape.
// ---------------------------------------------------------------------

class Fig2System final : public MapSystem {
public:
    explicit Fig2System(const ParamMap& p) {
        reject_unknown(p, {"a", "critical_floor"});
        a_ = take(p, "a", find_misiurewicz_a0(8, 1e-12).a0);
        require(a_ > 1.1 && a_ < 1.95, "fig2: a must lie in (1.1, 1.95)");
        name_ = "fig2";
        domain_ = Domain::interval(-7.0, 2.0);
        constants_ = SmoothnessConstants{2.0, 1.0, 0.25};
        has_critical_set_ = true;
        critical_floor_ = take(p, "critical_floor", 1e-15);

        // glue spline nodes: (x, value, slope)
        const double peak = std::min(-2.05, std::max(-1.0 - a_, a_ - 4.0) + 0.3);
        require(peak >= std::max(-1.0 - a_, a_ - 4.0) + 0.05, "fig2: no room for the glue hump");
        nodes_x_ = {-3.0, -2.62, -2.13, -2.0};
        nodes_v_ = {-1.0 - a_, peak, -3.4, a_ - 4.0};
        nodes_m_ = {4.0, 0.0, 0.0, 4.0};
        collect_glue_criticals();

        // the glue's diagonal crossings must all repel
        double prev = glue_value(-3.0) - (-3.0);
        for (int i = 1; i <= 4000; ++i) {
            const double x = -3.0 + i / 4000.0;
            const double cur = glue_value(x) - x;
            if ((prev <= 0.0) != (cur <= 0.0)) {
                double lo = x - 1.0 / 4000.0, hi = x;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if ((glue_value(mid) - mid <= 0.0) == (cur <= 0.0))
                        hi = mid;
                    else
                        lo = mid;
                }
                require(std::abs(glue_deriv(0.5 * (lo + hi))) > 1.2,
                        "fig2: glue fixed point is not repelling");
            }
            prev = cur;
        }
        // glue orbits must leave [-3, -2] apart from a measure-zero repeller
        int stuck = 0;
        const int probes = 2000;
        for (int i = 0; i < probes; ++i) {
            double x = -3.0 + (i + 0.5) / probes;
            bool escaped = false;
            for (int it = 0; it < 200 && !escaped; ++it) {
                x = raw(x);
                escaped = x <= -3.0 || x >= -2.0;
            }
            if (!escaped) ++stuck;
        }
        require(stuck < probes / 100, "fig2: glue traps a visible set of orbits");

        // trapping intervals around the two invariant cores; the left piece
        // is conjugate to the right one through the flip x -> -x - 5
        TrappingRegion t2;
        t2.lo = a_ - a_ * a_ - 0.2;
        t2.hi = a_ + 0.05;
        TrappingRegion t1{-t2.hi - 5.0, -t2.lo - 5.0, 0.0};
        for (TrappingRegion* t : {&t1, &t2}) {
            double im_lo = 1e300, im_hi = -1e300;
            const int n = 20000;
            for (int i = 0; i <= n; ++i) {
                const double x = t->lo + (t->hi - t->lo) * i / n;
                const double y = raw(x);
                im_lo = std::min(im_lo, y);
                im_hi = std::max(im_hi, y);
            }
            t->margin = std::min(im_lo - t->lo, t->hi - im_hi);
            require(t->margin > 0.0, "fig2: trapping interval scan failed");
        }
        trapping_ = {t1, t2};

        // domain margin: distance of f(I) to the boundary of I
        double im_lo = 1e300, im_hi = -1e300;
        const int n = 40000;
        for (int i = 0; i <= n; ++i) {
            const double x = -7.0 + 9.0 * i / n;
            const double y = raw(x);
            im_lo = std::min(im_lo, y);
            im_hi = std::max(im_hi, y);
        }
        domain_margin_ = std::min(im_lo - (-7.0), 2.0 - im_hi);
        require(domain_margin_ > 0.0, "fig2: image not interior to the domain");
    }

    double a() const { return a_; }
    const std::vector<TrappingRegion>& trapping() const { return trapping_; }

    double raw(double x) const {
        if (x >= -2.0) return a_ - x * x;
        if (x <= -3.0) return (x + 5.0) * (x + 5.0) - 5.0 - a_;
        return glue_value(x);
    }
    double raw_deriv(double x) const {
        if (x >= -2.0) return -2.0 * x;
        if (x <= -3.0) return 2.0 * (x + 5.0);
        return glue_deriv(x);
    }

    State eval(const State& x) const override {
        check_in_domain(x);
        return state1(raw(x.x()));
    }
    std::array<double, 4> tangent(const State& x) const override {
        return {raw_deriv(x.x()), 0.0, 0.0, 0.0};
    }
    double inv_tangent_norm(const State& x) const override {
        check_in_domain(x);
        const auto d = critical_distance(x);
        if (*d < critical_floor_)
            throw CriticalPoint("fig2: derivative vanishes at a critical point");
        return 1.0 / std::abs(raw_deriv(x.x()));
    }
    double jac_det(const State& x) const override { return std::abs(raw_deriv(x.x())); }
    std::optional<double> critical_distance(const State& x) const override {
        double d = std::min(std::abs(x.x()), std::abs(x.x() + 5.0));
        for (double c : glue_criticals_) d = std::min(d, std::abs(x.x() - c));
        return d;
    }

private:
    int glue_segment(double x) const {
        if (x < nodes_x_[1]) return 0;
        if (x < nodes_x_[2]) return 1;
        return 2;
    }
    double glue_value(double x) const {
        const int s = glue_segment(x);
        const double w = nodes_x_[static_cast<size_t>(s + 1)] - nodes_x_[static_cast<size_t>(s)];
        const double t = (x - nodes_x_[static_cast<size_t>(s)]) / w;
        const double va = nodes_v_[static_cast<size_t>(s)], vb = nodes_v_[static_cast<size_t>(s + 1)];
        const double ma = nodes_m_[static_cast<size_t>(s)] * w, mb = nodes_m_[static_cast<size_t>(s + 1)] * w;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * va + (t3 - 2 * t2 + t) * ma +
               (-2 * t3 + 3 * t2) * vb + (t3 - t2) * mb;
    }
    double glue_deriv(double x) const {
        const int s = glue_segment(x);
        const double w = nodes_x_[static_cast<size_t>(s + 1)] - nodes_x_[static_cast<size_t>(s)];
        const double t = (x - nodes_x_[static_cast<size_t>(s)]) / w;
        const double va = nodes_v_[static_cast<size_t>(s)], vb = nodes_v_[static_cast<size_t>(s + 1)];
        const double ma = nodes_m_[static_cast<size_t>(s)] * w, mb = nodes_m_[static_cast<size_t>(s + 1)] * w;
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * va + (3 * t2 - 4 * t + 1) * ma + (-6 * t2 + 6 * t) * vb +
                (3 * t2 - 2 * t) * mb) / w;
    }
    // derivative zeros of each cubic segment, in closed form
    void collect_glue_criticals() {
        for (int s = 0; s < 3; ++s) {
            const double w = nodes_x_[static_cast<size_t>(s + 1)] - nodes_x_[static_cast<size_t>(s)];
            const double va = nodes_v_[static_cast<size_t>(s)], vb = nodes_v_[static_cast<size_t>(s + 1)];
            const double ma = nodes_m_[static_cast<size_t>(s)] * w, mb = nodes_m_[static_cast<size_t>(s + 1)] * w;
            // h'(t) = A t^2 + B t + C with
            const double A = 6 * va + 3 * ma - 6 * vb + 3 * mb;
            const double B = -6 * va - 4 * ma + 6 * vb - 2 * mb;
            const double C = ma;
            const double disc = B * B - 4 * A * C;
            if (std::abs(A) < 1e-14) {
                if (std::abs(B) > 1e-14) {
                    const double t = -C / B;
                    if (t > 1e-9 && t < 1.0 - 1e-9)
                        glue_criticals_.push_back(nodes_x_[static_cast<size_t>(s)] + t * w);
                }
            } else if (disc >= 0.0) {
                for (double sign : {-1.0, 1.0}) {
                    const double t = (-B + sign * std::sqrt(disc)) / (2 * A);
                    if (t > 1e-9 && t < 1.0 - 1e-9)
                        glue_criticals_.push_back(nodes_x_[static_cast<size_t>(s)] + t * w);
                }
            }
            // the interior nodes themselves carry zero slope
            if (s < 2) glue_criticals_.push_back(nodes_x_[static_cast<size_t>(s + 1)]);
        }
        std::sort(glue_criticals_.begin(), glue_criticals_.end());
    }

    double a_;
    std::array<double, 4> nodes_x_{};
    std::array<double, 4> nodes_v_{};
    std::array<double, 4> nodes_m_{};
    std::vector<double> glue_criticals_;
    std::vector<TrappingRegion> trapping_;
};

const std::vector<TrappingRegion>& fig2_trapping_regions(const MapSystem& sys) {
    auto* f = dynamic_cast<const Fig2System*>(&sys);
    if (!f) throw InvalidParams("fig2_trapping_regions: system is not fig2");
    return f->trapping();
}

// ---------------------------------------------------------------------
// viana: (s, x) -> (d s mod 1, a0 + alpha sin(2 pi s) - x^2) on S^1 x I.
// I = [-h, h] is shrunk from [-1.9, 1.9] until a 256 x 256 grid scan
// certifies the image is interior. Critical set {x = 0}; the inverse
// tangent norm is taken as the maximum absolute entry, which reduces to
// 1/|d_x q| = 1/|2x|.
// ---------------------------------------------------------------------

class VianaSystem final : public MapSystem {
public:
    explicit VianaSystem(const ParamMap& p) {
        reject_unknown(p, {"d", "a0", "alpha_skew", "eta_exponent", "critical_floor"});
        info_.d = take(p, "d", 16.0);
        require(info_.d >= 16.0 && std::floor(info_.d) == info_.d,
                "viana: d must be an integer >= 16");
        info_.a0 = take(p, "a0", find_misiurewicz_a0(8, 1e-12).a0);
        require(info_.a0 > 1.0 && info_.a0 < 2.0, "viana: a0 must lie in (1, 2)");
        info_.alpha_skew = take(p, "alpha_skew", 1e-2);
        require(info_.alpha_skew > 0.0 && info_.alpha_skew < 0.5,
                "viana: alpha_skew must lie in (0, 0.5)");
        info_.eta_exponent = take(p, "eta_exponent", 0.1);
        require(info_.eta_exponent > 0.0 && info_.eta_exponent < 0.25,
                "viana: eta_exponent must lie in (0, 1/4)");

        name_ = "viana";
        constants_ = SmoothnessConstants{4.0, 1.0, 0.25};
        has_critical_set_ = true;
        critical_floor_ = take(p, "critical_floor", 1e-15);

        // shrink I until the invariance scan passes with positive margin
        double h = 1.9;
        bool ok = false;
        for (int iter = 0; iter < 60; ++iter) {
            const double margin = scan_margin(h);
            if (margin > 1e-3) {
                info_.interval_halfwidth = h;
                info_.margin = margin;
                ok = true;
                break;
            }
            h *= 0.97;
        }
        require(ok, "viana: no invariant interval found (alpha_skew too large?)");
        domain_ = Domain::cylinder(1.0, -info_.interval_halfwidth, info_.interval_halfwidth);
        domain_margin_ = info_.margin;
    }

    const VianaInfo& info() const { return info_; }

    double a_of_s(double s) const {
        return info_.a0 + info_.alpha_skew * std::sin(2.0 * kPi * s);
    }

    State eval(const State& z) const override {
        check_in_domain(z);
        const double s = z.x(), x = z.y();
        return domain_.wrap(state2(info_.d * s, a_of_s(s) - x * x));
    }
    std::array<double, 4> tangent(const State& z) const override {
        const double s = z.x(), x = z.y();
        const double dq_ds = info_.alpha_skew * 2.0 * kPi * std::cos(2.0 * kPi * s);
        return {info_.d, 0.0, dq_ds, -2.0 * x};
    }
    double inv_tangent_norm(const State& z) const override {
        check_in_domain(z);
        const double d = std::abs(z.y());
        if (d < critical_floor_)
            throw CriticalPoint("viana: on the critical circle {x = 0}");
        return 1.0 / (2.0 * d);
    }
    double jac_det(const State& z) const override {
        return info_.d * 2.0 * std::abs(z.y());
    }
    std::optional<double> critical_distance(const State& z) const override {
        return std::abs(z.y());
    }

private:
    double scan_margin(double h) const {
        double worst = 1e300;
        const int n = 256;
        for (int i = 0; i < n; ++i) {
            const double s = static_cast<double>(i) / n;
            const double a = info_.a0 + info_.alpha_skew * std::sin(2.0 * kPi * s);
            for (int j = 0; j <= n; ++j) {
                const double x = -h + 2.0 * h * j / n;
                const double y = a - x * x;
                worst = std::min(worst, std::min(h - y, y + h));
            }
        }
        return worst;
    }

    VianaInfo info_;
};

const VianaInfo& viana_info(const MapSystem& sys) {
    auto* v = dynamic_cast<const VianaSystem*>(&sys);
    if (!v) throw InvalidParams("viana_info: system is not viana");
    return v->info();
}

// ---------------------------------------------------------------------
// torus: f = (3x, 3y) composed with a radial deformation supported in the
// disk W of radius R around (1/2, 1/2). Inside W the displacement factor
// is u(r) = 1 - A (1 - (r/R)^2)^2, so expansion drops from 3 to 3(1 - A)
// at the center while |det Df| = 9 u phi' stays above sigma. A 512 x 512
// constructor scan asserts both bounds.
// ---------------------------------------------------------------------

class TorusSystem final : public MapSystem {
public:
    explicit TorusSystem(const ParamMap& p) {
        reject_unknown(p, {"amplitude", "eta", "sigma", "radius", "critical_floor"});
        info_.amplitude = take(p, "amplitude", 0.64);
        info_.eta = take(p, "eta", 0.1);
        info_.sigma = take(p, "sigma", 1.1);
        info_.radius = take(p, "radius", 0.15);
        require(info_.amplitude > 0.0 && info_.amplitude < 1.0, "torus: amplitude in (0,1)");
        require(info_.eta > 0.0, "torus: eta must be positive");
        require(info_.sigma > 1.0, "torus: sigma must exceed 1");
        require(info_.radius > 0.0 && info_.radius < 0.5, "torus: radius in (0, 0.5)");

        name_ = "torus";
        domain_ = Domain::torus2();
        constants_ = SmoothnessConstants{2.0, 1.0, 0.25};
        has_critical_set_ = false;
        critical_floor_ = take(p, "critical_floor", 1e-15);

        // certify ||Df^{-1}|| <= 1 + eta on W and |det Df| >= sigma everywhere
        const int n = 512;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const State z = state2((i + 0.5) / n, (j + 0.5) / n);
                const auto [u, phip, r] = factors(z);
                const double det = 9.0 * u * phip;
                require(det >= info_.sigma,
                        "torus: |det Df| dips below sigma (amplitude too large)");
                if (r <= info_.radius) {
                    const double inv_norm = 1.0 / (3.0 * std::min(u, phip));
                    require(inv_norm <= 1.0 + info_.eta,
                            "torus: ||Df^-1|| exceeds 1 + eta on the bump");
                }
            }
        }
    }

    const TorusInfo& info() const { return info_; }

    bool in_bump(const State& z) const {
        const double dx = domain_.circle_diff(z.x(), info_.center_x);
        const double dy = domain_.circle_diff(z.y(), info_.center_y);
        return dx * dx + dy * dy <= info_.radius * info_.radius;
    }

    State eval(const State& z) const override {
        check_in_domain(z);
        const State g = deform(z);
        return domain_.wrap(state2(3.0 * g.x(), 3.0 * g.y()));
    }
    std::array<double, 4> tangent(const State& z) const override {
        const double dx = domain_.circle_diff(z.x(), info_.center_x);
        const double dy = domain_.circle_diff(z.y(), info_.center_y);
        const double r2 = dx * dx + dy * dy;
        const double R = info_.radius, A = info_.amplitude;
        if (r2 > R * R) return {3.0, 0.0, 0.0, 3.0};
        const double rho2 = r2 / (R * R);
        const double u = 1.0 - A * (1.0 - rho2) * (1.0 - rho2);
        // u'(r)/r has the finite limit 4A/R^2 at the center
        const double up_over_r = 4.0 * A * (1.0 - rho2) / (R * R);
        return {3.0 * (u + up_over_r * dx * dx), 3.0 * up_over_r * dx * dy,
                3.0 * up_over_r * dx * dy, 3.0 * (u + up_over_r * dy * dy)};
    }
    double inv_tangent_norm(const State& z) const override {
        check_in_domain(z);
        const auto [u, phip, r] = factors(z);
        return 1.0 / (3.0 * std::min(u, phip));
    }
    double jac_det(const State& z) const override {
        const auto [u, phip, r] = factors(z);
        return 9.0 * u * phip;
    }
    std::optional<double> critical_distance(const State&) const override { return std::nullopt; }

private:
    State deform(const State& z) const {
        const double dx = domain_.circle_diff(z.x(), info_.center_x);
        const double dy = domain_.circle_diff(z.y(), info_.center_y);
        const double r2 = dx * dx + dy * dy;
        const double R = info_.radius;
        if (r2 > R * R) return z;
        const double rho2 = r2 / (R * R);
        const double u = 1.0 - info_.amplitude * (1.0 - rho2) * (1.0 - rho2);
        return state2(info_.center_x + u * dx, info_.center_y + u * dy);
    }
    // radial singular factors of the deformation: tangential u, radial phi'
    std::tuple<double, double, double> factors(const State& z) const {
        const double dx = domain_.circle_diff(z.x(), info_.center_x);
        const double dy = domain_.circle_diff(z.y(), info_.center_y);
        const double r = std::sqrt(dx * dx + dy * dy);
        const double R = info_.radius, A = info_.amplitude;
        if (r > R) return {1.0, 1.0, r};
        const double rho2 = (r * r) / (R * R);
        const double u = 1.0 - A * (1.0 - rho2) * (1.0 - rho2);
        const double up = 4.0 * A * (r / (R * R)) * (1.0 - rho2);
        return {u, u + r * up, r};
    }

    TorusInfo info_;
};

const TorusInfo& torus_info(const MapSystem& sys) {
    auto* t = dynamic_cast<const TorusSystem*>(&sys);
    if (!t) throw InvalidParams("torus_info: system is not torus");
    return t->info();
}

bool torus_in_bump(const MapSystem& sys, const State& x) {
    auto* t = dynamic_cast<const TorusSystem*>(&sys);
    if (!t) throw InvalidParams("torus_in_bump: system is not torus");
    return t->in_bump(x);
}

// ---------------------------------------------------------------------

SystemPtr build_system(const std::string& name, const ParamMap& params) {
    if (name == "doubling") return std::make_shared<DoublingSystem>(params);
    if (name == "fig1") return std::make_shared<Fig1System>(params);
    if (name == "fig2") return std::make_shared<Fig2System>(params);
    if (name == "viana") return std::make_shared<VianaSystem>(params);
    if (name == "torus") return std::make_shared<TorusSystem>(params);
    throw UnknownCatalogId("no catalog system named '" + name + "'");
}

} // namespace nuelab
