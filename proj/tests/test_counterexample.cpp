#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgl/counterexample.hpp"

using namespace mgl;

namespace {

const char* kClaimOrder[10] = {
    "eta-slope-range",       "f-bounded-below",
    "sphere-terms-positive", "ricci-diagonal-positive",
    "ricci-diagonal-positive-printed", "sec-bounded",
    "partial-ricci-decay",   "t-graph-minimal",
    "gradient-bounded",      "brackets-nonnegative",
};

const char* kBracketOrder[9] = {
    "tr+ta", "tr+ra", "tr+ab", "ta+ra", "ta+ab", "ra+ab", "2ta", "2ra", "2ab",
};

}  // namespace

TEST_CASE("spec validation pins the admissible window") {
    KWSpec spec;
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.p() == doctest::Approx(-0.3).epsilon(1e-15));

    KWSpec bad = spec;
    bad.m = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.beta = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    // m - 1 - beta must clear 2 + alpha.
    bad = spec;
    bad.beta = 0.7;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.b = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.c = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const KWSpec parsed = KWSpec::from_json(spec.to_json());
    CHECK(parsed.m == spec.m);
    CHECK(parsed.alpha == spec.alpha);
    CHECK(parsed.b == spec.b);
    CHECK_THROWS(KWSpec::from_json({{"m", 4}, {"alpha", 0.4}}));
    CHECK_THROWS_AS(KWSpec::from_json({{"m", 4},
                                       {"alpha", 0.4},
                                       {"beta", 0.7},
                                       {"b", 100.0},
                                       {"c", 100.0}}),
                    std::invalid_argument);

    const ModelManifold man = build_kw_manifold(spec);
    CHECK(man.kind() == ManifoldKind::DoublyWarped);
    CHECK(man.dim() == 4);
}

TEST_CASE("curvatures close up at the pole") {
    const KWSpec spec;
    const ModelManifold man = build_kw_manifold(spec);
    const double r0 = ModelManifold::pole_cutoff;
    const SectionalSpectrum s = simple_plane_sectionals(man, r0);

    // Smooth cone point: the two spherical curvatures share a limit, and the
    // fiber curvatures approach -f''(0)/f(0).
    CHECK(std::abs(s.k_ra - s.k_ab) < 1e-6);
    const double p = spec.p();
    const double f0 = std::pow(spec.b, p) + spec.c;
    const double ktr0 = -2.0 * p * std::pow(spec.b, p - 1.0) / f0;
    CHECK(s.k_tr == doctest::Approx(ktr0).epsilon(1e-6));
    CHECK(std::abs(s.k_ta - s.k_tr) < 1e-10);
}

TEST_CASE("certificate asserts every checkable claim") {
    const KWSpec spec;
    const double r_max = 100.0;
    const int n = 2048;
    const Certificate cert = certify(spec, r_max, n);
    const ModelManifold man = build_kw_manifold(spec);

    CHECK(cert.n == n);
    CHECK(cert.r_lo == ModelManifold::pole_cutoff);
    CHECK(cert.r_max == r_max);

    REQUIRE(cert.claims.size() == 10);
    for (int k = 0; k < 10; ++k) CHECK(cert.claims[k].name == kClaimOrder[k]);
    for (const auto& c : cert.claims)
        if (!c.indeterminate) CHECK(c.pass);
    CHECK(cert.claims_pass());
    CHECK(cert.claims[4].indeterminate);
    CHECK(cert.claims[9].indeterminate);
    // The fiber plane pairing goes negative on the tail, so the blanket
    // bracket claim is reported, not asserted.
    CHECK_FALSE(cert.claims[9].pass);
    CHECK(cert.claims[9].worst < 0.0);

    CHECK(cert.t_residual_max == 0.0);
    CHECK(cert.min_f > spec.c);
    CHECK(cert.min_f ==
          doctest::Approx(std::pow(spec.b + r_max * r_max, spec.p()) + spec.c)
              .epsilon(1e-12));
    CHECK(cert.sup_grad == 1.0 / cert.min_f);
    CHECK(cert.claims[8].worst == cert.sup_grad);
    CHECK(cert.claims[1].worst == doctest::Approx(cert.min_f - spec.c).epsilon(1e-12));
    CHECK(cert.sup_abs_sec > 0.1);
    CHECK(cert.sup_abs_sec < 0.2);

    // Replay the grid: bracket minima, the scaled radial decay, and the slope
    // margin must match the certificate bit for bit.
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i)
        r[i] = cert.r_lo + (r_max - cert.r_lo) * i / (n - 1);
    double mins[9];
    std::fill(std::begin(mins), std::end(mins), std::numeric_limits<double>::infinity());
    double decay_worst = std::numeric_limits<double>::infinity();
    double eta_margin = std::numeric_limits<double>::infinity();
    const int pair[9][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3},
                            {2, 3}, {1, 1}, {2, 2}, {3, 3}};
    for (int i = 0; i < n; ++i) {
        const SectionalSpectrum s = simple_plane_sectionals(man, r[i]);
        const double K[4] = {s.k_tr, s.k_ta, s.k_ra, s.k_ab};
        for (int k = 0; k < 9; ++k)
            mins[k] = std::min(mins[k], K[pair[k][0]] + K[pair[k][1]]);
        decay_worst = std::min(
            decay_worst, (1.0 + r[i] * r[i]) * ricci_l_radial(man, r[i], spec.m - 2));
        const WarpEval e = man.eta().eval(r[i]);
        eta_margin = std::min({eta_margin, e.d1 - 0.5, -e.d2, 1.0 + 1e-15 - e.d1});
    }
    REQUIRE(cert.brackets.size() == 9);
    for (int k = 0; k < 9; ++k) {
        CHECK(cert.brackets[k].label == kBracketOrder[k]);
        CHECK(cert.brackets[k].min_value == mins[k]);
        CHECK(cert.brackets[k].at_r >= cert.r_lo);
        CHECK(cert.brackets[k].at_r <= r_max);
    }
    CHECK(cert.claims[6].worst == decay_worst);
    CHECK(cert.kappa_decay == std::sqrt(std::max(0.0, -decay_worst)));
    CHECK(cert.claims[0].worst == eta_margin);
    CHECK(eta_margin >= 0.0);

    // Tail behaviour: only the t^r (+) t^a pairing stays negative out there,
    // decaying a little faster than r^-2.
    CHECK(cert.brackets[0].tail_sign == -1);
    CHECK(cert.brackets[0].fitted_power < -2.0);
    CHECK(cert.brackets[0].fitted_power > -3.5);
    for (int k = 1; k < 9; ++k) CHECK(cert.brackets[k].tail_sign == 1);
    CHECK(cert.brackets[8].fitted_power == doctest::Approx(-2.0).epsilon(0.15));

    const nlohmann::json j1 = cert.to_json();
    const nlohmann::json j2 = cert.to_json();
    CHECK(j1.dump() == j2.dump());
    CHECK(j1.at("schema").get<std::string>() == "kw-certificate/1");
    CHECK(j1.at("grid").at("n").get<int>() == n);
    CHECK(j1.at("claims").size() == 10);
    CHECK(j1.at("brackets").size() == 9);

    CHECK_THROWS_AS(certify(spec, 0.5, 2048), std::invalid_argument);
    CHECK_THROWS_AS(certify(spec, 100.0, 63), std::invalid_argument);
}

TEST_CASE("coarse grid search finds a certified pair") {
    const SearchResult res = search_bc(4, 0.4, 0.4, 9);
    CHECK(res.found);
    CHECK(res.objective > 0.0);
    CHECK(res.b >= 10.0);
    CHECK(res.b <= 1e6);
    CHECK(res.c >= 10.0);
    CHECK(res.c <= 1e6);
    CHECK(res.cert.spec.b == res.b);
    CHECK(res.cert.spec.c == res.c);
    CHECK(res.cert.claims_pass());
    CHECK(res.cert.n == 2048);

    const nlohmann::json j = res.to_json();
    CHECK(j.at("found").get<bool>());
    CHECK(j.at("certificate").at("schema").get<std::string>() == "kw-certificate/1");

    CHECK_THROWS_AS(search_bc(4, 0.4, 0.4, 3), std::invalid_argument);
}
