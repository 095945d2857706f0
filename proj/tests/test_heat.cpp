#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mgl/heat.hpp"
#include "mgl/mse.hpp"
#include "oracles.hpp"

using namespace mgl;

namespace {

ModelManifold flat(int m) {
    return ModelManifold::rotsym(m, WarpFunction::euclidean());
}

WarpFunction const_warp(double v, double lo, double hi) {
    return WarpFunction::piecewise({{lo, v, 0.0, 0.0}, {hi, v, 0.0, 0.0}});
}

// Plateau 1 inside the knee, then constant discrete flux -omega outward.
// apply_L vanishes on both branches and is strictly negative at the knee.
std::vector<double> flux_plateau(const RadialMesh& mesh, double r_knee, double omega) {
    std::vector<double> f(mesh.n, 1.0);
    const int k0 = mesh.cell_of(r_knee) + 1;
    for (int i = k0; i < mesh.n; ++i)
        f[i] = f[i - 1] - omega * mesh.dr / mesh.face_area[i];
    return f;
}

std::vector<SandwichSample> line_samples(double pre, double slope, double vol) {
    std::vector<SandwichSample> out;
    for (double t : {0.25, 0.5, 1.0})
        for (int k = 1; k <= 10; ++k) {
            const double d = 0.2 * k;
            out.push_back({d, t, pre * std::exp(-slope * d * d / t) / vol, vol});
        }
    return out;
}

}  // namespace

TEST_CASE("pole mesh reproduces flat geometry") {
    const ModelManifold man = flat(3);
    const RadialMesh mesh = RadialMesh::pole(man, 6.0, 512);

    CHECK(mesh.n == 512);
    CHECK(mesh.r_lo == 0.0);
    CHECK(mesh.r_hi() == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(mesh.face_area[0] == 0.0);
    for (int k : {1, 256, 512}) {
        const double r = k * mesh.dr;
        CHECK(mesh.face_area[k] == doctest::Approx(4.0 * M_PI * r * r).epsilon(1e-13));
    }
    const double rc = mesh.center[100];
    CHECK(rc == doctest::Approx(100.5 * mesh.dr).epsilon(1e-15));
    CHECK(mesh.cell_w[100] ==
          doctest::Approx(4.0 * M_PI * rc * rc * mesh.dr).epsilon(1e-13));

    // Midpoint cell masses against the exact ball volume.
    const std::vector<double> ones(mesh.n, 1.0);
    CHECK(mesh.mass(ones) == doctest::Approx(volume_ball(man, 6.0)).epsilon(1e-5));

    CHECK(mesh.cell_of(0.0) == 0);
    CHECK(mesh.cell_of(mesh.center[100]) == 100);
    CHECK(mesh.cell_of(7.0) == mesh.n - 1);
    CHECK(mesh.cell_of(-1.0) == 0);

    CHECK_THROWS_AS(RadialMesh::annulus(man, 0.0, 6.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(RadialMesh::pole(man, 6.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(RadialMesh::pole(man, -1.0, 64), std::invalid_argument);
    const ModelManifold dw = ModelManifold::doubly_warped(
        4, WarpFunction::euclidean(), const_warp(1.0, 0.0, 10.0));
    CHECK_THROWS_AS(RadialMesh::pole(dw, 6.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(mesh.mass(std::vector<double>(7, 1.0)), std::invalid_argument);
}

TEST_CASE("elliptic coefficients validate the pinching") {
    const RadialMesh mesh = RadialMesh::annulus(flat(2), 1.5, 3.0, 64);

    EllipticCoefficient id = EllipticCoefficient::identity(mesh);
    CHECK(id.alpha == 1.0);
    CHECK_NOTHROW(id.check_ellipticity(mesh));

    EllipticCoefficient op = EllipticCoefficient::build(
        mesh, [](double) { return 2.0; }, [](double) { return 1.0; });
    CHECK(op.alpha == 2.0);
    CHECK_NOTHROW(op.check_ellipticity(mesh));
    op.a_theta[0] = 5.0;
    CHECK_THROWS_AS(op.check_ellipticity(mesh), std::invalid_argument);

    CHECK_THROWS_AS(EllipticCoefficient::build(
                        mesh, [](double) { return 0.0; }, [](double) { return 1.0; }),
                    std::invalid_argument);

    // Graph coefficients: a_r = 1/W, a_theta = W, so alpha is the largest W
    // seen on the mesh, attained at the inner face for a catenoid.
    const RadialGraph g = radial_flux_solution(flat(2), 1.0, 1.2, 40.0, 2048);
    const EllipticCoefficient gc = EllipticCoefficient::from_graph(mesh, g);
    CHECK(gc.alpha == doctest::Approx(1.5 / std::sqrt(1.25)).epsilon(1e-3));
    CHECK_NOTHROW(gc.check_ellipticity(mesh));
    const RadialMesh wide = RadialMesh::annulus(flat(2), 0.5, 3.0, 64);
    CHECK_THROWS_AS(EllipticCoefficient::from_graph(wide, g), std::invalid_argument);
}

TEST_CASE("theta steps conserve mass and keep the delta positive") {
    const RadialMesh mesh = RadialMesh::pole(flat(3), 6.0, 256);
    const EllipticCoefficient op = EllipticCoefficient::identity(mesh);

    const std::vector<double> u0 = delta_state(mesh);
    CHECK(mesh.mass(u0) == doctest::Approx(1.0).epsilon(1e-14));

    HeatEvolver ev(mesh, op, WallCondition::ZeroFlux, WallCondition::ZeroFlux, 0.5);
    CHECK(ev.apply_L(std::vector<double>(mesh.n, 1.0)) == std::vector<double>(mesh.n, 0.0));

    const double dt_mono = ev.monotone_dt();
    CHECK(dt_mono > 0.0);
    CHECK(dt_mono < mesh.dr);

    ev.set_state(u0, 0.0);
    for (int s = 0; s < 20; ++s) ev.step(0.9 * dt_mono);
    const MassReport rep = mass_conservation_check(ev, 1e-8);
    CHECK(rep.pass);
    CHECK_FALSE(rep.inconclusive);
    CHECK(rep.max_drift < 1e-12);
    // Below the monotone step the update matrix keeps signs.
    double lo = 0.0;
    for (const auto& p : ev.trace()) lo = std::min(lo, p.min_u);
    CHECK(lo >= -1e-13);

    // Backward Euler is monotone at any step size.
    HeatEvolver be(mesh, op, WallCondition::ZeroFlux, WallCondition::ZeroFlux, 1.0);
    CHECK(be.monotone_dt() == std::numeric_limits<double>::infinity());
    be.set_state(u0, 0.0);
    be.step_backward_euler(0.05);
    CHECK(be.trace().back().min_u >= -1e-13);

    HeatEvolver fresh(mesh, op, WallCondition::ZeroFlux, WallCondition::ZeroFlux, 0.5);
    fresh.set_state(u0, 0.0);
    CHECK_THROWS_AS(mass_conservation_check(fresh, 1e-8), std::invalid_argument);

    CHECK_THROWS_AS(HeatEvolver(mesh, op, WallCondition::ZeroFlux,
                                WallCondition::ZeroFlux, 0.4),
                    std::invalid_argument);
    CHECK_THROWS_AS(HeatEvolver(mesh, op, WallCondition::ZeroFlux,
                                WallCondition::ZeroFlux, 1.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(ev.set_state(std::vector<double>(7, 0.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ev.step(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ev.run(-1.0, 1e-3, false), std::invalid_argument);

    const RadialMesh ann = RadialMesh::annulus(flat(3), 1.0, 6.0, 64);
    CHECK_THROWS_AS(delta_state(ann), std::invalid_argument);
}

TEST_CASE("startup smoothing damps the checkerboard mode") {
    const RadialMesh mesh = RadialMesh::pole(flat(3), 6.0, 512);
    const EllipticCoefficient op = EllipticCoefficient::identity(mesh);
    const std::vector<double> u0 = delta_state(mesh);
    const double dt = 0.01;

    HeatEvolver plain(mesh, op, WallCondition::ZeroFlux, WallCondition::ZeroFlux, 0.5);
    plain.set_state(u0, 0.0);
    plain.run(0.1, dt, false);
    double plain_min = 0.0;
    for (const auto& p : plain.trace()) plain_min = std::min(plain_min, p.min_u);

    HeatEvolver smoothed(mesh, op, WallCondition::ZeroFlux, WallCondition::ZeroFlux, 0.5);
    smoothed.set_state(u0, 0.0);
    smoothed.run(0.1, dt, true);
    double smooth_min = 0.0;
    for (const auto& p : smoothed.trace()) smooth_min = std::min(smooth_min, p.min_u);

    CAPTURE(plain_min);
    CAPTURE(smooth_min);
    // The delta peaks near 1e4, so undershoots are judged relative to it.
    CHECK(plain_min < -1e3);
    CHECK(smooth_min > plain_min / 100.0);
    CHECK(smooth_min > -1e-2 * *std::max_element(u0.begin(), u0.end()));
}

TEST_CASE("evolved delta matches the flat-space kernel") {
    const ModelManifold man = flat(3);
    const RadialMesh mesh = RadialMesh::pole(man, 8.0, 1024);
    const EllipticCoefficient op = EllipticCoefficient::identity(mesh);
    const double T = 0.5;

    HeatEvolver ev(mesh, op, WallCondition::ZeroFlux, WallCondition::ZeroFlux, 0.5);
    ev.set_state(delta_state(mesh), 0.0);
    ev.run(T, 1e-3, true);

    const MassReport mass = mass_conservation_check(ev, 1e-8);
    CHECK(mass.pass);

    const auto samples = sample_kernel(mesh, ev.state(), T, 2.0, 1);
    CHECK(samples.size() > 200);
    const double pre = std::pow(4.0 * M_PI * T, -1.5);
    for (const auto& s : samples) {
        const double exact = pre * std::exp(-s.d * s.d / (4.0 * T));
        CHECK(s.H == doctest::Approx(exact).epsilon(2e-3));
        CHECK(s.t == T);
    }
    CHECK(samples.front().vol == doctest::Approx(volume_ball(man, std::sqrt(T))).epsilon(1e-12));

    // The sampled kernel sits inside a slightly widened Gaussian envelope.
    const double K = pre * volume_ball(man, std::sqrt(T));
    GaussianConstants c{0.9 * K, 0.3, 1.2 * K, 0.2, 1.0, 1.0};
    const SandwichReport rep = gaussian_sandwich_check(samples, c);
    CHECK(rep.all_pass);
    CHECK(rep.fails_lower == 0);
    CHECK(rep.fails_upper == 0);

    const auto sparse = sample_kernel(mesh, ev.state(), T, 2.0, 4);
    CHECK(sparse.size() == (samples.size() + 3) / 4);
    CHECK_THROWS_AS(sample_kernel(mesh, ev.state(), T, 2.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_kernel(mesh, std::vector<double>(7, 1.0), T, 2.0, 1),
                    std::invalid_argument);
}

TEST_CASE("exact gaussian samples pin the fitted envelope") {
    const auto samples = line_samples(3.0, 0.25, 1.7);

    const GaussianConstants c{2.0, 0.3, 4.0, 0.2, 1.0, 1.0};
    const SandwichReport rep = gaussian_sandwich_check(samples, c);
    CHECK(rep.all_pass);
    CHECK(rep.fails_lower == 0);
    CHECK(rep.fails_upper == 0);
    const double x_min = 0.2 * 0.2 / 1.0;
    CHECK(rep.worst_lower == doctest::Approx(std::log(1.5) + 0.05 * x_min).epsilon(1e-9));
    CHECK(rep.worst_upper ==
          doctest::Approx(std::log(4.0 / 3.0) + 0.05 * x_min).epsilon(1e-9));
    CHECK(rep.fit.C1 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(rep.fit.C2 == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(rep.fit.C3 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(rep.fit.C4 == doctest::Approx(0.25).epsilon(1e-9));

    // A lower prefactor above the data fails every sample; the steeper upper
    // envelope only fails once d^2/t crosses log(4/3)/0.05.
    const GaussianConstants tight{3.5, 0.25, 4.0, 0.3, 1.0, 1.0};
    const SandwichReport bad = gaussian_sandwich_check(samples, tight);
    CHECK_FALSE(bad.all_pass);
    CHECK(bad.fails_lower == int(samples.size()));
    CHECK(bad.worst_lower == doctest::Approx(std::log(3.0 / 3.5)).epsilon(1e-9));
    CHECK(bad.fails_upper == 7);

    CHECK_THROWS_AS(gaussian_sandwich_check({}, c), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_sandwich_check({{1.0, 0.0, 1.0, 1.0}}, c),
                    std::invalid_argument);
    CHECK_THROWS_AS((GaussianConstants{4.0, 0.3, 3.0, 0.2, 1.0, 1.0}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS((GaussianConstants{1.0, 0.0, 2.0, 0.2, 1.0, 1.0}).validate(),
                    std::invalid_argument);

    const GaussianConstants parsed =
        GaussianConstants::from_json({{"C1", 1.0}, {"C2", 2.0}, {"C3", 3.0}, {"C4", 4.0}});
    CHECK(parsed.c5 == 1.0);
    CHECK(parsed.c6 == 1.0);
    const nlohmann::json j = parsed.to_json();
    CHECK(j.at("C1").get<double>() == 1.0);
    CHECK(j.at("C4").get<double>() == 4.0);
    CHECK_THROWS(GaussianConstants::from_json({{"C1", 1.0}}));
}

TEST_CASE("supersolution flow decays into the pinned wall") {
    const RadialMesh mesh = RadialMesh::pole(flat(3), 10.0, 256);
    const EllipticCoefficient op = EllipticCoefficient::identity(mesh);
    const std::vector<double> f = flux_plateau(mesh, 1.0, 1.0);
    CHECK(*std::min_element(f.begin(), f.end()) > 0.9);

    const FlowReport rep = supersolution_flow(mesh, op, WallCondition::ZeroFlux,
                                              WallCondition::FixedValue, f, 0.5, 1e-10);
    CHECK(rep.pass);
    CHECK(rep.halvings == 0);
    CHECK(rep.max_time_slope <= 1e-10);
    CHECK(rep.lf_max_interior < 1e-12);
    CHECK(rep.steps > 0);
    const nlohmann::json j = rep.to_json();
    CHECK(j.at("pass").get<bool>());

    // 1/r^2 is strictly subharmonic in three dimensions; the probe rejects it.
    const RadialMesh ann = RadialMesh::annulus(flat(3), 1.0, 5.0, 64);
    std::vector<double> bad(ann.n);
    for (int i = 0; i < ann.n; ++i) bad[i] = 1.0 / (ann.center[i] * ann.center[i]);
    CHECK_THROWS_AS(supersolution_flow(ann, EllipticCoefficient::identity(ann),
                                       WallCondition::FixedValue, WallCondition::FixedValue,
                                       bad, 0.5, 1e-10),
                    std::invalid_argument);
}

TEST_CASE("ball averages settle at the essential infimum") {
    const ModelManifold man = flat(3);
    const auto f = [](double r) { return 2.0 + 1.0 / (1.0 + r); };
    std::vector<double> R_list;
    for (int k = 0; k < 16; ++k) R_list.push_back(std::pow(200.0, k / 15.0));

    const BallAverageReport rep = ball_average_limit(f, man, R_list);
    for (std::size_t k = 0; k < R_list.size(); ++k) {
        const double R = R_list[k];
        const double exact = 2.0 + 3.0 * (R * R / 2.0 - R + std::log1p(R)) / (R * R * R);
        CHECK(rep.avg[k] == doctest::Approx(exact).epsilon(1e-8));
    }
    CHECK(rep.inf_f == f(200.0));
    CHECK(rep.final_gap < 0.005);
    CHECK(rep.monotone_tail);

    const BallAverageReport flat_rep =
        ball_average_limit([](double) { return 5.0; }, man, {1.0, 2.0, 4.0});
    for (double a : flat_rep.avg) CHECK(a == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(flat_rep.final_gap < 1e-12);
    CHECK(flat_rep.monotone_tail);

    CHECK_THROWS_AS(ball_average_limit(f, man, {}), std::invalid_argument);
    CHECK_THROWS_AS(ball_average_limit(f, man, {2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(ball_average_limit(f, man, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("windowed laplacian averages stay nonpositive for superharmonic data") {
    const RadialMesh mesh = RadialMesh::pole(flat(3), 60.0, 2048);
    HeatEvolver ev(mesh, EllipticCoefficient::identity(mesh), WallCondition::ZeroFlux,
                   WallCondition::ZeroFlux, 0.5);
    std::vector<double> f(mesh.n);
    for (int i = 0; i < mesh.n; ++i)
        f[i] = 1.0 / std::sqrt(1.0 + mesh.center[i] * mesh.center[i]);

    const std::vector<double> R_list = {2.0, 5.0, 10.0, 20.0, 40.0};
    const LapAverageReport rep = weighted_laplacian_average(f, ev, R_list);
    REQUIRE(rep.s.size() == R_list.size());
    for (std::size_t k = 0; k < R_list.size(); ++k) {
        const double R = R_list[k];
        const double exact = -3.0 * R * R / std::pow(1.0 + R * R, 1.5);
        CHECK(rep.s[k] == doctest::Approx(exact).epsilon(5e-3));
    }
    CHECK(rep.all_nonpositive);
    CHECK(rep.peak_abs == doctest::Approx(12.0 / std::pow(5.0, 1.5)).epsilon(5e-3));
    CHECK(rep.final_abs == doctest::Approx(4800.0 / std::pow(1601.0, 1.5)).epsilon(5e-3));

    CHECK_THROWS_AS(weighted_laplacian_average(f, ev, {}), std::invalid_argument);
    CHECK_THROWS_AS(weighted_laplacian_average(f, ev, {5.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(weighted_laplacian_average(f, ev, {2.0, 61.0}), std::invalid_argument);
}

TEST_CASE("integral ratio liminf dominates the pointwise one") {
    const int n = 64;
    const double dt = 0.25;
    auto sample = [&](const std::function<double(double)>& fn) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = fn((i + 1) * dt);
        return v;
    };
    const std::vector<double> g_lin = sample([](double t) { return t; });

    const LhopitalReport a =
        lhopital_liminf(sample([](double t) { return t * (1.0 + 1.0 / (1.0 + t)); }), g_lin, dt);
    CHECK(a.holds);
    CHECK(a.growth > 1.2);
    CHECK_FALSE(a.inconclusive);

    const std::vector<double> e = sample([](double t) { return std::exp(0.3 * t); });
    const LhopitalReport b = lhopital_liminf(e, e, dt);
    CHECK(b.holds);
    CHECK(b.tail_liminf_hg == doctest::Approx(1.0).epsilon(1e-12));

    const LhopitalReport c =
        lhopital_liminf(sample([](double t) { return t * (2.0 + std::sin(t)); }), g_lin, dt);
    CHECK(c.holds);

    // h/g = t grows, so the pointwise tail liminf overtakes the integral one.
    const LhopitalReport d =
        lhopital_liminf(sample([](double t) { return t * t; }), g_lin, dt);
    CHECK_FALSE(d.holds);
    CHECK_FALSE(d.inconclusive);
    CHECK(d.tail_liminf_hg > d.liminf_ratio);

    const std::vector<double> dec = sample([](double t) { return std::exp(-t); });
    const LhopitalReport stale = lhopital_liminf(dec, dec, dt);
    CHECK(stale.inconclusive);
    CHECK_FALSE(stale.holds);
    CHECK(stale.growth < 1.2);

    CHECK_THROWS_AS(lhopital_liminf(std::vector<double>(n, 1.0),
                                    std::vector<double>(n - 1, 1.0), dt),
                    std::invalid_argument);
    CHECK_THROWS_AS(lhopital_liminf(std::vector<double>(7, 1.0),
                                    std::vector<double>(7, 1.0), dt),
                    std::invalid_argument);
    CHECK_THROWS_AS(lhopital_liminf(g_lin, g_lin, 0.0), std::invalid_argument);
    std::vector<double> zero_g(n, 1.0);
    zero_g[10] = 0.0;
    CHECK_THROWS_AS(lhopital_liminf(g_lin, zero_g, dt), std::invalid_argument);
    std::vector<double> neg_h(n, 1.0);
    neg_h[10] = -1.0;
    CHECK_THROWS_AS(lhopital_liminf(neg_h, g_lin, dt), std::invalid_argument);
}

TEST_CASE("incomplete gamma tail matches direct quadrature") {
    for (int m : {2, 3, 4, 5}) {
        const double got = gamma_of_c0(3.0, 0.7, 0.4, m);
        const double want = oracle::gamma_of_c0_quadrature(3.0, 0.7, 0.4, m);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
    // Dimension two collapses to a pure exponential.
    CHECK(gamma_of_c0(3.0, 0.7, 0.4, 2) ==
          doctest::Approx(0.7 * std::exp(-0.4 * 3.0) / 0.4).epsilon(1e-13));
    CHECK(gamma_of_c0(5.0, 0.7, 0.4, 3) < gamma_of_c0(3.0, 0.7, 0.4, 3));
    CHECK_THROWS_AS(gamma_of_c0(0.0, 0.7, 0.4, 2), std::invalid_argument);
    CHECK_THROWS_AS(gamma_of_c0(-1.0, 0.7, 0.4, 2), std::invalid_argument);
}

TEST_CASE("appendix constants cover all three branches") {
    // gamma(2) > 3/4: bisection lands on the closed-form root in dimension two.
    const AppendixConstants big = appendix_constants(0.2, 0.1, 2, 1.0);
    CHECK(big.c0 == doctest::Approx(-std::log(0.75 * 0.1 / 0.2) / 0.1).epsilon(1e-8));
    CHECK(big.gamma == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(big.c0_star == doctest::Approx(2.0 * big.c0 / (big.c0 - 2.0)).epsilon(1e-12));
    CHECK(big.C1p ==
          doctest::Approx((1.0 - big.gamma) *
                          std::exp(-(2.0 + 0.5 * big.c0 + big.c0_star)))
              .epsilon(1e-10));
    CHECK(big.C1p > 0.0);
    CHECK(big.C1p < 1.0 - big.gamma);
    CHECK(big.C2p == 2.0);
    const nlohmann::json j = big.to_json();
    CHECK(j.contains("c0"));
    CHECK(j.contains("C2p"));

    // gamma(2) already in (1/2, 3/4]: the walls pin c0 just above 2.
    const AppendixConstants edge = appendix_constants(0.08, 0.1, 2, 1.0);
    CHECK(edge.c0 == 2.0 + 1e-9);
    CHECK(edge.gamma == doctest::Approx(0.8 * std::exp(-0.2)).epsilon(1e-6));

    // gamma(2) <= 1/2: no admissible c0 at all.
    CHECK_THROWS_AS(appendix_constants(0.01, 0.1, 2, 1.0), std::domain_error);
    // Nearly flat gamma never drops to 3/4 before the bracket cap.
    CHECK_THROWS_AS(appendix_constants(1.0, 1e-9, 2, 1.0), std::domain_error);

    const AppendixConstants odd = appendix_constants(0.5, 0.2, 3, 2.0);
    CHECK(odd.c0 > 2.0);
    CHECK(odd.gamma == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(oracle::gamma_of_c0_quadrature(odd.c0, 0.5, 0.2, 3) ==
          doctest::Approx(0.75).epsilon(1e-9));
    CHECK(odd.C2p == 4.0);

    CHECK_THROWS_AS(appendix_constants(0.2, 0.1, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(appendix_constants(0.0, 0.1, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(appendix_constants(0.2, -0.1, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(appendix_constants(0.2, 0.1, 2, 0.0), std::invalid_argument);
}
