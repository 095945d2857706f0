#include <doctest.h>

#include <cmath>
#include <vector>

#include "mgl/warp.hpp"
#include "oracles.hpp"

using namespace mgl;

TEST_CASE("smoothed profile: pieces join with matching value and slope") {
    const KwEtaCurve curve(0.4);
    const double eps = 1e-7;
    CHECK(curve.zeta1(1.0 - eps) == doctest::Approx(curve.zeta1(1.0 + eps)).epsilon(1e-5));
    CHECK(curve.zeta1(2.0 - eps) == doctest::Approx(curve.zeta1(2.0 + eps)).epsilon(1e-5));
    CHECK(curve.zeta1_d1(1.0 - eps) == doctest::Approx(curve.zeta1_d1(1.0 + eps)).epsilon(1e-4));
    CHECK(curve.zeta1_d1(2.0 - eps) == doctest::Approx(curve.zeta1_d1(2.0 + eps)).epsilon(1e-4));
    for (double t : {0.3, 1.2, 1.9, 2.5, 7.0}) CHECK(curve.zeta1(t) > 0.0);
}

TEST_CASE("smoothed profile: antiderivatives differentiate back to the integrands") {
    const KwEtaCurve curve(0.4);
    // zeta2' = -zeta1 and (int zeta2)' = zeta2 on the interior of every piece.
    for (double t : {0.4, 1.3, 1.8, 3.0, 11.0}) {
        const auto z2 = oracle::fd2([&](double s) { return curve.zeta2(s); }, t);
        CHECK(z2.d1 == doctest::Approx(-curve.zeta1(t)).epsilon(1e-7));
        const auto zi = oracle::fd2([&](double s) { return curve.zeta2_integral(s); }, t);
        CHECK(zi.d1 == doctest::Approx(curve.zeta2(t)).epsilon(1e-7));
    }
    // Tail closed form: int_t^inf s^(-1-alpha) ds = t^-alpha / alpha.
    CHECK(curve.zeta2(5.0) == doctest::Approx(std::pow(5.0, -0.4) / 0.4).epsilon(1e-14));
}

TEST_CASE("smoothed warp eta: pole closure, concavity, slope falling to one half") {
    const WarpFunction eta = WarpFunction::kw_eta(0.4);
    const WarpEval near = eta.eval(1e-7);
    CHECK(near.value == doctest::Approx(1e-7).epsilon(1e-7));
    CHECK(near.d1 == doctest::Approx(1.0).epsilon(1e-7));

    double prev = 1.0;
    for (double r : {0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 2000.0}) {
        const WarpEval e = eta.eval(r);
        CHECK(e.d2 < 0.0);
        CHECK(e.d1 < prev);
        CHECK(e.d1 > 0.5);
        prev = e.d1;
    }
    CHECK(eta.eval(1e6).d1 == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("smoothed warp eta: reported derivatives match finite differences") {
    const WarpFunction eta = WarpFunction::kw_eta(0.3);
    const auto val = [&eta](double r) { return eta.eval(r).value; };
    for (double r : {0.7, 1.25, 1.75, 2.5, 6.0, 30.0}) {
        const WarpEval e = eta.eval(r);
        const oracle::Fd2 fd = oracle::fd2(val, r, 1e-3);
        CHECK(e.d1 == doctest::Approx(fd.d1).epsilon(1e-6));
        CHECK(e.d2 == doctest::Approx(fd.d2).epsilon(1e-4));
    }
}

TEST_CASE("smoothed warp eta: alpha outside (0,1) is rejected") {
    CHECK_THROWS_AS(KwEtaCurve(0.0), std::invalid_argument);
    CHECK_THROWS_AS(KwEtaCurve(1.0), std::invalid_argument);
    CHECK_THROWS_AS(KwEtaCurve(-0.5), std::invalid_argument);
}

TEST_CASE("fiber warp: shape, limits, and finite-difference agreement") {
    const KwFiberWarp f(4, 0.4, 100.0, 100.0);
    CHECK(f.p == doctest::Approx(-0.3));
    CHECK(f.eval(0.0).d1 == 0.0);
    for (double r : {0.5, 3.0, 20.0, 150.0}) {
        const WarpEval e = f.eval(r);
        CHECK(e.value > f.c);
        CHECK(e.d1 < 0.0);
    }
    for (double r : {0.5, 3.0, 20.0}) {
        const WarpEval e = f.eval(r);
        const oracle::Fd2 fd =
            oracle::fd2([&](double s) { return f.eval(s).value; }, r, 1e-3);
        CHECK(e.d1 == doctest::Approx(fd.d1).epsilon(1e-6));
        CHECK(e.d2 == doctest::Approx(fd.d2).epsilon(1e-3));
    }
    CHECK(f.eval(1e6).value == doctest::Approx(f.c).epsilon(1e-3));

    CHECK_THROWS_AS(KwFiberWarp(3, 0.4, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(KwFiberWarp(4, 1.2, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(KwFiberWarp(4, 0.4, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("named warps: closed forms and domain guards") {
    const WarpFunction e = WarpFunction::euclidean();
    CHECK(e.eval(1.7).value == 1.7);
    CHECK(e.eval(1.7).d1 == 1.0);
    CHECK(e.eval(1.7).d2 == 0.0);

    const WarpFunction s = WarpFunction::sphere();
    CHECK(s.eval(1.0).value == doctest::Approx(std::sin(1.0)));
    CHECK(s.eval(1.0).d1 == doctest::Approx(std::cos(1.0)));
    CHECK(s.eval(1.0).d2 == doctest::Approx(-std::sin(1.0)));
    CHECK_THROWS_AS(s.eval(3.2), std::domain_error);
    CHECK_THROWS_AS(s.eval(-0.1), std::domain_error);

    const WarpFunction h = WarpFunction::hyperbolic();
    CHECK(h.eval(2.0).value == doctest::Approx(std::sinh(2.0)));
    CHECK(h.eval(2.0).d1 == doctest::Approx(std::cosh(2.0)));
    CHECK(h.eval(2.0).d2 == doctest::Approx(std::sinh(2.0)));
}

TEST_CASE("piecewise warp: quintic pieces reproduce smooth data between knots") {
    std::vector<std::array<double, 4>> knots;
    for (double t : {1.0, 2.0, 3.0, 4.0})
        knots.push_back({t, std::cosh(t), std::sinh(t), std::cosh(t)});
    const WarpFunction w = WarpFunction::piecewise(knots);
    CHECK(w.lo() == 1.0);
    CHECK(w.hi() == 4.0);
    for (double r : {1.5, 2.5, 3.5}) {
        CHECK(w.eval(r).value == doctest::Approx(std::cosh(r)).epsilon(1e-3));
        CHECK(w.eval(r).d1 == doctest::Approx(std::sinh(r)).epsilon(1e-3));
    }
    CHECK_THROWS_AS(w.eval(0.5), std::domain_error);
    CHECK_THROWS_AS(w.eval(4.5), std::domain_error);
    CHECK_THROWS_AS(WarpFunction::piecewise({{0.0, 0.0, 1.0, 0.0}}),
                    std::invalid_argument);
}

TEST_CASE("warp JSON: every form round-trips through its serialization") {
    std::vector<std::array<double, 4>> knots = {{1.0, 1.0, 0.5, 0.1},
                                                {2.0, 1.6, 0.7, 0.2}};
    const WarpFunction forms[] = {
        WarpFunction::euclidean(),
        WarpFunction::sphere(),
        WarpFunction::hyperbolic(),
        WarpFunction::kw_eta(0.4),
        WarpFunction::kw_f(4, 0.4, 100.0, 100.0),
        WarpFunction::piecewise(knots)};
    for (const WarpFunction& w : forms) {
        const WarpFunction back = WarpFunction::from_json(w.to_json());
        CHECK(back.form() == w.form());
        const double r = 0.5 * (std::max(w.lo(), 0.3) + std::min(w.hi(), 2.0));
        const WarpEval a = w.eval(r);
        const WarpEval b = back.eval(r);
        CHECK(a.value == b.value);
        CHECK(a.d1 == b.d1);
        CHECK(a.d2 == b.d2);
    }
    CHECK_THROWS_AS(WarpFunction::from_json({{"form", "polynomial"}}),
                    std::invalid_argument);
}
