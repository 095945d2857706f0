#include "mgl/warp.hpp"

#include <cmath>
#include <stdexcept>

namespace mgl {

namespace {

QuinticSegment make_zeta1_bridge(double alpha) {
    // End data of t and t^(-1-alpha) at t = 1 and t = 2.
    const double v2 = std::pow(2.0, -1.0 - alpha);
    const double d2 = -(1.0 + alpha) * std::pow(2.0, -2.0 - alpha);
    const double a2 = (1.0 + alpha) * (2.0 + alpha) * std::pow(2.0, -3.0 - alpha);
    return QuinticSegment(1.0, 2.0, 1.0, 1.0, 0.0, v2, d2, a2);
}

}  // namespace

KwEtaCurve::KwEtaCurve(double alpha)
    : alpha_(alpha), bridge_(make_zeta1_bridge(alpha)) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("KwEtaCurve: alpha must be in (0,1)");
    // Positivity of the bridge on a fine grid; the end data admit a
    // sign-changing quintic only for extreme alpha.
    for (int i = 0; i <= 10000; ++i) {
        const double t = 1.0 + i / 10000.0;
        if (!(bridge_.value(t) > 0.0))
            throw std::invalid_argument(
                "KwEtaCurve: smoothing bridge loses positivity");
    }
    p_ = bridge_.integral_full();
    z2_ = std::pow(2.0, -alpha) / alpha;
    z1_ = z2_ + p_;
    z0_ = z1_ + 0.5;
    i1_ = z1_ + 0.5 - 1.0 / 6.0;  // (z1 + 1/2) * 1 - 1/6
    i2_ = i1_ + (z2_ + p_) * 1.0 - bridge_.integral2_from_t0(2.0);
}

double KwEtaCurve::zeta1(double t) const {
    if (t < 0.0) throw std::domain_error("zeta1: t < 0");
    if (t <= 1.0) return t;
    if (t < 2.0) return bridge_.value(t);
    return std::pow(t, -1.0 - alpha_);
}

double KwEtaCurve::zeta1_d1(double t) const {
    if (t < 0.0) throw std::domain_error("zeta1_d1: t < 0");
    if (t <= 1.0) return 1.0;
    if (t < 2.0) return bridge_.deriv1(t);
    return -(1.0 + alpha_) * std::pow(t, -2.0 - alpha_);
}

double KwEtaCurve::zeta2(double t) const {
    if (t < 0.0) throw std::domain_error("zeta2: t < 0");
    if (t <= 1.0) return z1_ + 0.5 * (1.0 - t * t);
    if (t < 2.0) return z2_ + (p_ - bridge_.integral_from_t0(t));
    return std::pow(t, -alpha_) / alpha_;
}

double KwEtaCurve::zeta2_integral(double r) const {
    if (r < 0.0) throw std::domain_error("zeta2_integral: r < 0");
    if (r <= 1.0) return (z1_ + 0.5) * r - r * r * r / 6.0;
    if (r < 2.0)
        return i1_ + (z2_ + p_) * (r - 1.0) - bridge_.integral2_from_t0(r);
    return i2_ + (std::pow(r, 1.0 - alpha_) - std::pow(2.0, 1.0 - alpha_)) /
                     (alpha_ * (1.0 - alpha_));
}

WarpEval KwEtaCurve::eta(double r) const {
    const double inv = 1.0 / (2.0 * z0_);
    return {0.5 * r + zeta2_integral(r) * inv, 0.5 + zeta2(r) * inv,
            -zeta1(r) * inv};
}

KwFiberWarp::KwFiberWarp(int m_, double beta_, double b_, double c_)
    : m(m_), beta(beta_), b(b_), c(c_), p(0.5 * (beta_ + 3.0 - m_)) {
    if (m < 4) throw std::invalid_argument("KwFiberWarp: m must be >= 4");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("KwFiberWarp: beta must be in (0,1)");
    if (!(b > 0.0 && c > 0.0))
        throw std::invalid_argument("KwFiberWarp: b, c must be positive");
    if (!(p < 0.0)) throw std::invalid_argument("KwFiberWarp: requires p < 0");
}

WarpEval KwFiberWarp::eval(double r) const {
    const double s = b + r * r;
    const double sp = std::pow(s, p);
    return {sp + c, 2.0 * p * r * sp / s,
            2.0 * p * sp / s + 4.0 * p * (p - 1.0) * r * r * sp / (s * s)};
}

WarpFunction WarpFunction::euclidean() {
    WarpFunction w;
    w.fn_ = [](double r) -> WarpEval { return {r, 1.0, 0.0}; };
    w.form_ = "euclidean";
    return w;
}

WarpFunction WarpFunction::sphere() {
    WarpFunction w;
    w.fn_ = [](double r) -> WarpEval {
        return {std::sin(r), std::cos(r), -std::sin(r)};
    };
    w.hi_ = std::acos(-1.0);
    w.form_ = "sphere";
    return w;
}

WarpFunction WarpFunction::hyperbolic() {
    WarpFunction w;
    w.fn_ = [](double r) -> WarpEval {
        return {std::sinh(r), std::cosh(r), std::sinh(r)};
    };
    w.form_ = "hyperbolic";
    return w;
}

WarpFunction WarpFunction::kw_eta(double alpha) {
    WarpFunction w;
    auto curve = std::make_shared<KwEtaCurve>(alpha);
    w.fn_ = [curve](double r) -> WarpEval { return curve->eta(r); };
    w.form_ = "kw-eta";
    w.params_ = {{"alpha", alpha}};
    return w;
}

WarpFunction WarpFunction::kw_f(int m, double beta, double b, double c) {
    WarpFunction w;
    KwFiberWarp f(m, beta, b, c);
    w.fn_ = [f](double r) -> WarpEval { return f.eval(r); };
    w.form_ = "kw-f";
    w.params_ = {{"m", m}, {"beta", beta}, {"b", b}, {"c", c}};
    return w;
}

WarpFunction WarpFunction::piecewise(
    const std::vector<std::array<double, 4>>& knots) {
    if (knots.size() < 2)
        throw std::invalid_argument("piecewise warp: need at least two knots");
    auto segs = std::make_shared<std::vector<QuinticSegment>>();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const auto& a = knots[i];
        const auto& b = knots[i + 1];
        segs->emplace_back(a[0], b[0], a[1], a[2], a[3], b[1], b[2], b[3]);
    }
    WarpFunction w;
    w.lo_ = knots.front()[0];
    w.hi_ = knots.back()[0];
    w.fn_ = [segs](double r) -> WarpEval {
        std::size_t lo = 0, hi = segs->size();
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            ((*segs)[mid].t0() <= r ? lo : hi) = mid;
        }
        const auto& s = (*segs)[lo];
        return {s.value(r), s.deriv1(r), s.deriv2(r)};
    };
    w.form_ = "custom-piecewise";
    json jk = json::array();
    for (const auto& k : knots) jk.push_back({k[0], k[1], k[2], k[3]});
    w.params_ = {{"knots", jk}};
    return w;
}

WarpFunction WarpFunction::from_json(const json& spec) {
    const std::string form = spec.at("form").get<std::string>();
    if (form == "euclidean") return euclidean();
    if (form == "sphere") return sphere();
    if (form == "hyperbolic") return hyperbolic();
    if (form == "kw-eta") return kw_eta(spec.at("alpha").get<double>());
    if (form == "kw-f")
        return kw_f(spec.at("m").get<int>(), spec.at("beta").get<double>(),
                    spec.at("b").get<double>(), spec.at("c").get<double>());
    if (form == "custom-piecewise") {
        std::vector<std::array<double, 4>> knots;
        for (const auto& row : spec.at("knots"))
            knots.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                             row.at(2).get<double>(), row.at(3).get<double>()});
        return piecewise(knots);
    }
    throw std::invalid_argument("unknown warp form: " + form);
}

json WarpFunction::to_json() const {
    json j = params_;
    j["form"] = form_;
    return j;
}

WarpEval WarpFunction::eval(double r) const {
    if (!fn_) throw std::logic_error("WarpFunction: empty");
    if (!(r >= lo_ && r <= hi_))
        throw std::domain_error("warp eval: r outside domain");
    return fn_(r);
}

}  // namespace mgl
