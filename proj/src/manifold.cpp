#include "mgl/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mgl/quadrature.hpp"

namespace mgl {

ModelManifold::ModelManifold(ManifoldKind k, int m, WarpFunction eta,
                             std::optional<WarpFunction> f)
    : kind_(k), m_(m), eta_(std::move(eta)) {
    if (f) {
        f_ = std::move(*f);
        has_f_ = true;
    }
    const double probe = 1e-6;
    if (eta_.lo() == 0.0) {
        const WarpEval e = eta_.eval(probe);
        if (std::fabs(e.value / probe - 1.0) > 1e-3 ||
            std::fabs(e.d1 - 1.0) > 1e-3)
            throw std::invalid_argument(
                "ModelManifold: eta does not close at the pole "
                "(need eta(0)=0, eta'(0)=1)");
    }
    if (has_f_) {
        const WarpEval e = f_.eval(probe);
        if (!(e.value > 0.0) ||
            std::fabs(e.d1) > 1e-3 * (1.0 + std::fabs(e.value)))
            throw std::invalid_argument(
                "ModelManifold: warped factor needs f > 0 and f'(0) = 0");
    }
}

ModelManifold ModelManifold::rotsym(int m, WarpFunction eta) {
    if (m < 2) throw std::invalid_argument("rotsym: dimension must be >= 2");
    return ModelManifold(ManifoldKind::RotSym, m, std::move(eta), std::nullopt);
}

ModelManifold ModelManifold::doubly_warped(int m, WarpFunction eta,
                                           WarpFunction f) {
    if (m < 4)
        throw std::invalid_argument("doubly_warped: dimension must be >= 4");
    return ModelManifold(ManifoldKind::DoublyWarped, m, std::move(eta),
                         std::move(f));
}

ModelManifold ModelManifold::from_json(const json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    const int m = spec.at("m").get<int>();
    if (kind == "rotsym")
        return rotsym(m, WarpFunction::from_json(spec.at("eta")));
    if (kind == "kw")
        return doubly_warped(m, WarpFunction::from_json(spec.at("eta")),
                             WarpFunction::from_json(spec.at("f")));
    throw std::invalid_argument("unknown manifold kind: " + kind);
}

json ModelManifold::to_json() const {
    json j;
    j["kind"] = kind_ == ManifoldKind::RotSym ? "rotsym" : "kw";
    j["m"] = m_;
    j["eta"] = eta_.to_json();
    if (has_f_) j["f"] = f_.to_json();
    return j;
}

const WarpFunction& ModelManifold::fiber_f() const {
    if (!has_f_)
        throw std::logic_error("fiber_f: rotationally symmetric model");
    return f_;
}

SectionalSpectrum simple_plane_sectionals(const ModelManifold& man, double r) {
    if (!(r >= ModelManifold::pole_cutoff))
        throw std::domain_error(
            "simple_plane_sectionals: r below pole cutoff");
    SectionalSpectrum s;
    const WarpEval e = man.eta().eval(r);
    if (!(e.value > 0.0))
        throw std::domain_error("simple_plane_sectionals: eta(r) <= 0");
    s.k_ra = -e.d2 / e.value;
    const int m = man.dim();
    if (man.kind() == ManifoldKind::RotSym) {
        s.has_ab = m >= 3;
        if (s.has_ab) s.k_ab = (1.0 - e.d1 * e.d1) / (e.value * e.value);
        return s;
    }
    s.has_t = true;
    s.has_ab = m - 2 >= 2;
    if (s.has_ab) s.k_ab = (1.0 - e.d1 * e.d1) / (e.value * e.value);
    const WarpEval f = man.fiber_f().eval(r);
    s.k_tr = -f.d2 / f.value;
    s.k_ta = -e.d1 * f.d1 / (e.value * f.value);
    return s;
}

RicciDiagonal ricci_diag(const ModelManifold& man, double r) {
    const SectionalSpectrum s = simple_plane_sectionals(man, r);
    const int m = man.dim();
    RicciDiagonal d;
    if (man.kind() == ManifoldKind::RotSym) {
        d.radial = (m - 1) * s.k_ra;
        d.spherical = s.k_ra + (m - 2) * s.k_ab;
        return d;
    }
    d.has_t = true;
    d.tangent = s.k_tr + (m - 2) * s.k_ta;
    d.radial = s.k_tr + (m - 2) * s.k_ra;
    d.spherical = s.k_ta + s.k_ra + (m - 3) * s.k_ab;
    return d;
}

namespace {

// Average of the l smallest entries of a multiset given as (value, count).
double avg_l_smallest(std::vector<std::pair<double, int>> vc, int l) {
    std::sort(vc.begin(), vc.end());
    double sum = 0.0;
    int left = l;
    for (const auto& [v, c] : vc) {
        const int take = std::min(left, c);
        sum += take * v;
        left -= take;
        if (left == 0) break;
    }
    if (left != 0)
        throw std::invalid_argument("ricci_l: l exceeds available planes");
    return sum / l;
}

}  // namespace

RicciLBound ricci_l_lower(const ModelManifold& man, double r, int l) {
    const int m = man.dim();
    if (l < 1 || l > m - 1)
        throw std::invalid_argument("ricci_l_lower: need 1 <= l <= m-1");
    const SectionalSpectrum s = simple_plane_sectionals(man, r);
    RicciLBound out;
    out.value = std::numeric_limits<double>::infinity();

    if (man.kind() == ManifoldKind::RotSym) {
        const double vr =
            avg_l_smallest({{s.k_ra, m - 1}}, l);  // planes through e_r
        out.terms.push_back({"radial", vr});
        out.value = vr;
        if (s.has_ab) {
            const double va =
                avg_l_smallest({{s.k_ra, 1}, {s.k_ab, m - 2}}, l);
            out.terms.push_back({"spherical", va});
            out.value = std::min(out.value, va);
        }
        return out;
    }

    // Plane types (label, value); t^r occurs once, the rest without cap so
    // that the l = 2 enumeration lists every pairwise bracket.
    const std::pair<const char*, double> types[4] = {
        {"tr", s.k_tr}, {"ta", s.k_ta}, {"ra", s.k_ra}, {"ab", s.k_ab}};
    const int cap[4] = {1, l, l, l};
    std::vector<int> counts(4, 0);
    std::string label;
    auto emit = [&]() {
        double sum = 0.0;
        label.clear();
        for (int i = 0; i < 4; ++i) {
            sum += counts[i] * types[i].second;
            for (int k = 0; k < counts[i]; ++k) {
                if (!label.empty()) label += '+';
                label += types[i].first;
            }
        }
        out.terms.push_back({label, sum / l});
        out.value = std::min(out.value, sum / l);
    };
    // Enumerate compositions of l over the four capped types.
    for (counts[0] = 0; counts[0] <= std::min(cap[0], l); ++counts[0])
        for (counts[1] = 0; counts[1] <= l - counts[0]; ++counts[1])
            for (counts[2] = 0; counts[2] <= l - counts[0] - counts[1];
                 ++counts[2]) {
                counts[3] = l - counts[0] - counts[1] - counts[2];
                emit();
            }
    return out;
}

double ricci_l_radial(const ModelManifold& man, double r, int l) {
    const int m = man.dim();
    if (l < 1 || l > m - 1)
        throw std::invalid_argument("ricci_l_radial: need 1 <= l <= m-1");
    const SectionalSpectrum s = simple_plane_sectionals(man, r);
    if (man.kind() == ManifoldKind::RotSym)
        return avg_l_smallest({{s.k_ra, m - 1}}, l);
    return avg_l_smallest({{s.k_tr, 1}, {s.k_ra, m - 2}}, l);
}

double unit_sphere_area(int m) {
    if (m < 1) throw std::invalid_argument("unit_sphere_area: m must be >= 1");
    const double pi = std::acos(-1.0);
    return 2.0 * std::pow(pi, 0.5 * m) / std::tgamma(0.5 * m);
}

double volume_ball(const ModelManifold& man, double R) {
    if (man.kind() != ManifoldKind::RotSym)
        throw std::invalid_argument(
            "volume_ball: unsupported for doubly warped models");
    if (!(R > 0.0) || R > man.eta().hi())
        throw std::domain_error("volume_ball: R outside the warp domain");
    const int m = man.dim();
    const auto& eta = man.eta();
    const double shell = integrate(
        [&](double r) { return std::pow(eta.eval(r).value, m - 1); }, 0.0, R,
        1e-12);
    return unit_sphere_area(m) * shell;
}

std::pair<double, double> ball_offset_bound(double vol_x, double d, double R,
                                            int m) {
    if (!(vol_x > 0.0) || !(R > 0.0) || d < 0.0 || m < 2)
        throw std::invalid_argument("ball_offset_bound: bad arguments");
    const double f = std::pow(1.0 + d / R, 0.5 * m);
    return {vol_x / f, vol_x * f};
}

}  // namespace mgl
