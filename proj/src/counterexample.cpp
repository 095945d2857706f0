#include "mgl/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mgl/mse.hpp"

namespace mgl {

void KWSpec::validate() const {
    if (m < 4) throw std::invalid_argument("KWSpec: dimension m must be >= 4");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("KWSpec: alpha must lie in (0,1)");
    if (!(beta > 0.0) || !(beta < 1.0)) throw std::invalid_argument("KWSpec: beta must lie in (0,1)");
    if (!(m - 1 - beta > 2.0 + alpha))
        throw std::invalid_argument("KWSpec: need m - 1 - beta > 2 + alpha");
    if (!(b > 0.0) || !(c > 0.0)) throw std::invalid_argument("KWSpec: b, c must be positive");
}

KWSpec KWSpec::from_json(const nlohmann::json& j) {
    KWSpec s;
    s.m = j.at("m").get<int>();
    s.alpha = j.at("alpha").get<double>();
    s.beta = j.at("beta").get<double>();
    s.b = j.at("b").get<double>();
    s.c = j.at("c").get<double>();
    s.validate();
    return s;
}

nlohmann::json KWSpec::to_json() const {
    return {{"m", m}, {"alpha", alpha}, {"beta", beta}, {"b", b}, {"c", c}};
}

ModelManifold build_kw_manifold(const KWSpec& spec) {
    spec.validate();
    return ModelManifold::doubly_warped(spec.m, WarpFunction::kw_eta(spec.alpha),
                                        WarpFunction::kw_f(spec.m, spec.beta, spec.b, spec.c));
}

namespace {

struct BracketDef {
    const char* label;
    int first;   // index into {tr, ta, ra, ab}
    int second;
};

// All two-plane sums reachable by Ric^(2); t^r pairs with itself never
// occurs since that plane exists once.
constexpr BracketDef kBrackets[9] = {
    {"tr+ta", 0, 1}, {"tr+ra", 0, 2}, {"tr+ab", 0, 3},
    {"ta+ra", 1, 2}, {"ta+ab", 1, 3}, {"ra+ab", 2, 3},
    {"2ta", 1, 1},   {"2ra", 2, 2},   {"2ab", 3, 3},
};

double fit_power(const std::vector<double>& r, const std::vector<double>& v,
                 std::size_t lo, std::size_t hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double a = std::abs(v[i]);
        if (!(a > 1e-300)) continue;
        const double x = std::log(r[i]);
        const double y = std::log(a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 8) return std::numeric_limits<double>::quiet_NaN();
    const double den = n * sxx - sx * sx;
    return den != 0.0 ? (n * sxy - sx * sy) / den : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

bool Certificate::claims_pass() const {
    for (const auto& c : claims)
        if (!c.indeterminate && !c.pass) return false;
    return true;
}

nlohmann::json Certificate::to_json() const {
    nlohmann::json br = nlohmann::json::array();
    for (const auto& x : brackets)
        br.push_back({{"label", x.label},
                      {"min_value", x.min_value},
                      {"at_r", x.at_r},
                      {"min_scaled", x.min_scaled},
                      {"fitted_power", x.fitted_power},
                      {"tail_sign", x.tail_sign}});
    nlohmann::json cl = nlohmann::json::array();
    for (const auto& c : claims)
        cl.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"indeterminate", c.indeterminate},
                      {"worst", c.worst},
                      {"at_r", c.at_r}});
    return {{"schema", "kw-certificate/1"},
            {"spec", spec.to_json()},
            {"grid", {{"r_lo", r_lo}, {"r_max", r_max}, {"n", n}}},
            {"brackets", br},
            {"ricci_min",
             {{"tangent", ric_tangent_min},
              {"radial", ric_radial_min},
              {"spherical", ric_spherical_min},
              {"tangent_printed", ric_tangent_printed_min},
              {"radial_printed", ric_radial_printed_min}}},
            {"sup_abs_sec", sup_abs_sec},
            {"kappa_decay", kappa_decay},
            {"t_residual_max", t_residual_max},
            {"min_f", min_f},
            {"sup_grad", sup_grad},
            {"claims", cl}};
}

Certificate certify(const KWSpec& spec, double r_max, int n) {
    spec.validate();
    if (!(r_max > 1.0) || n < 64) throw std::invalid_argument("certify: need r_max > 1, n >= 64");
    const ModelManifold man = build_kw_manifold(spec);
    const TGraph graph{man, 1.0, 0.0};

    Certificate cert;
    cert.spec = spec;
    cert.r_lo = ModelManifold::pole_cutoff;
    cert.r_max = r_max;
    cert.n = n;

    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = cert.r_lo + (r_max - cert.r_lo) * i / (n - 1);

    std::vector<std::vector<double>> bval(9, std::vector<double>(n));
    cert.brackets.assign(9, BracketResult{});
    for (int k = 0; k < 9; ++k) {
        cert.brackets[k].label = kBrackets[k].label;
        cert.brackets[k].min_value = std::numeric_limits<double>::infinity();
        cert.brackets[k].min_scaled = std::numeric_limits<double>::infinity();
    }

    cert.ric_tangent_min = cert.ric_radial_min = cert.ric_spherical_min =
        std::numeric_limits<double>::infinity();
    cert.ric_tangent_printed_min = cert.ric_radial_printed_min =
        std::numeric_limits<double>::infinity();
    cert.min_f = std::numeric_limits<double>::infinity();
    double ric_min_at = 0.0, ric_min = std::numeric_limits<double>::infinity();
    double decay_worst = std::numeric_limits<double>::infinity();
    double eta_margin = std::numeric_limits<double>::infinity(), eta_margin_at = 0.0;
    double f_margin = std::numeric_limits<double>::infinity(), f_margin_at = 0.0;
    double vanish_margin = std::numeric_limits<double>::infinity(), vanish_at = 0.0;

    const int m = spec.m;
    for (int i = 0; i < n; ++i) {
        const SectionalSpectrum s = simple_plane_sectionals(man, r[i]);
        const double K[4] = {s.k_tr, s.k_ta, s.k_ra, s.k_ab};
        const double w = 1.0 + r[i] * r[i];
        for (int k = 0; k < 9; ++k) {
            const double v = K[kBrackets[k].first] + K[kBrackets[k].second];
            bval[k][i] = v;
            if (v < cert.brackets[k].min_value) {
                cert.brackets[k].min_value = v;
                cert.brackets[k].at_r = r[i];
            }
            cert.brackets[k].min_scaled = std::min(cert.brackets[k].min_scaled, w * v);
        }

        const RicciDiagonal d = ricci_diag(man, r[i]);
        cert.ric_tangent_min = std::min(cert.ric_tangent_min, d.tangent);
        cert.ric_radial_min = std::min(cert.ric_radial_min, d.radial);
        cert.ric_spherical_min = std::min(cert.ric_spherical_min, d.spherical);
        const double diag_min = std::min({d.tangent, d.radial, d.spherical});
        if (diag_min < ric_min) {
            ric_min = diag_min;
            ric_min_at = r[i];
        }
        cert.ric_tangent_printed_min =
            std::min(cert.ric_tangent_printed_min, s.k_tr + (m - 3) * s.k_ta);
        cert.ric_radial_printed_min =
            std::min(cert.ric_radial_printed_min, s.k_tr + (m - 3) * s.k_ra);

        for (double v : K) cert.sup_abs_sec = std::max(cert.sup_abs_sec, std::abs(v));
        decay_worst = std::min(decay_worst, w * ricci_l_radial(man, r[i], m - 2));

        const WarpEval e = man.eta().eval(r[i]);
        eta_margin = std::min({eta_margin, e.d1 - 0.5, -e.d2, 1.0 + 1e-15 - e.d1});
        if (eta_margin == e.d1 - 0.5 || eta_margin == -e.d2) eta_margin_at = r[i];
        const double vm = std::min(2.0 * (1.0 - e.d1 * e.d1) / (e.value * e.value),
                                   -2.0 * e.d2 / e.value);
        if (vm < vanish_margin) {
            vanish_margin = vm;
            vanish_at = r[i];
        }

        const WarpEval f = man.fiber_f().eval(r[i]);
        if (f.value < cert.min_f) cert.min_f = f.value;
        if (f.value - spec.c < f_margin) {
            f_margin = f.value - spec.c;
            f_margin_at = r[i];
        }

        cert.t_residual_max = std::max(cert.t_residual_max, std::abs(t_graph_residual(graph, r[i])));
    }

    cert.kappa_decay = std::sqrt(std::max(0.0, -decay_worst));
    cert.sup_grad = 1.0 / cert.min_f;

    const std::size_t tail_lo = std::size_t(n) / 2;
    for (int k = 0; k < 9; ++k) {
        cert.brackets[k].fitted_power = fit_power(r, bval[k], tail_lo, std::size_t(n));
        int sign = bval[k][tail_lo] > 0.0 ? 1 : (bval[k][tail_lo] < 0.0 ? -1 : 0);
        for (std::size_t i = tail_lo; i < std::size_t(n); ++i) {
            const int s = bval[k][i] > 0.0 ? 1 : (bval[k][i] < 0.0 ? -1 : 0);
            if (s != sign) sign = 0;
        }
        cert.brackets[k].tail_sign = sign;
    }

    double bracket_min = std::numeric_limits<double>::infinity(), bracket_at = 0.0;
    for (const auto& x : cert.brackets)
        if (x.min_value < bracket_min) {
            bracket_min = x.min_value;
            bracket_at = x.at_r;
        }

    cert.claims.push_back({"eta-slope-range", eta_margin >= 0.0, false, eta_margin, eta_margin_at});
    cert.claims.push_back({"f-bounded-below", f_margin >= 0.0, false, f_margin, f_margin_at});
    cert.claims.push_back({"sphere-terms-positive", vanish_margin > 0.0, false, vanish_margin, vanish_at});
    cert.claims.push_back({"ricci-diagonal-positive", ric_min > 0.0, false, ric_min, ric_min_at});
    const double printed_min =
        std::min({cert.ric_tangent_printed_min, cert.ric_radial_printed_min, cert.ric_spherical_min});
    cert.claims.push_back({"ricci-diagonal-positive-printed", printed_min > 0.0, true, printed_min, 0.0});
    cert.claims.push_back({"sec-bounded", std::isfinite(cert.sup_abs_sec), false, cert.sup_abs_sec, 0.0});
    cert.claims.push_back(
        {"partial-ricci-decay", std::isfinite(cert.kappa_decay), false, decay_worst, 0.0});
    cert.claims.push_back(
        {"t-graph-minimal", cert.t_residual_max < 1e-10, false, cert.t_residual_max, 0.0});
    cert.claims.push_back({"gradient-bounded", std::isfinite(cert.sup_grad) && cert.sup_grad > 0.0,
                           false, cert.sup_grad, 0.0});
    cert.claims.push_back({"brackets-nonnegative", bracket_min >= 0.0, true, bracket_min, bracket_at});
    return cert;
}

nlohmann::json SearchResult::to_json() const {
    return {{"found", found},
            {"b", b},
            {"c", c},
            {"objective", objective},
            {"certificate", cert.to_json()}};
}

SearchResult search_bc(int m, double alpha, double beta, int budget) {
    if (budget < 4) throw std::invalid_argument("search_bc: budget must be >= 4");
    KWSpec probe;
    probe.m = m;
    probe.alpha = alpha;
    probe.beta = beta;
    probe.validate();

    const int side = std::max(2, int(std::sqrt(double(budget))));
    const double lo = std::log(10.0), hi = std::log(1e6);
    const double r_max = 200.0;
    const int n_coarse = 512;

    SearchResult best;
    best.objective = -std::numeric_limits<double>::infinity();
    for (int ib = 0; ib < side; ++ib)
        for (int ic = 0; ic < side; ++ic) {
            KWSpec s = probe;
            s.b = std::exp(lo + (hi - lo) * ib / (side - 1));
            s.c = std::exp(lo + (hi - lo) * ic / (side - 1));
            const ModelManifold man = build_kw_manifold(s);
            double obj = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n_coarse; ++i) {
                const double r =
                    ModelManifold::pole_cutoff +
                    (r_max - ModelManifold::pole_cutoff) * i / (n_coarse - 1);
                const RicciDiagonal d = ricci_diag(man, r);
                obj = std::min(obj, (1.0 + r * r) * std::min({d.tangent, d.radial, d.spherical}));
            }
            if (obj > best.objective) {
                best.objective = obj;
                best.b = s.b;
                best.c = s.c;
            }
        }

    KWSpec win = probe;
    win.b = best.b;
    win.c = best.c;
    best.cert = certify(win, r_max, 2048);
    best.found = best.objective > 0.0;
    return best;
}

}  // namespace mgl
