#include "mgl/gradient_bound.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "mgl/nelder_mead.hpp"

namespace mgl {

namespace {

void require_finite_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "gradient bound: %s must be finite and positive", name);
        throw std::invalid_argument(buf);
    }
}

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                         const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known) throw std::invalid_argument(std::string(where) + ": unknown field '" + it.key() + "'");
    }
}

}  // namespace

void BoundInputs::validate() const {
    if (m < 2) throw std::invalid_argument("gradient bound: dimension m must be >= 2");
    if (!std::isfinite(kappa) || kappa < 0.0) throw std::invalid_argument("gradient bound: kappa must be >= 0");
    if (!std::isfinite(kbar) || kbar < 0.0) throw std::invalid_argument("gradient bound: kbar must be >= 0");
    require_finite_positive(R, "R");
    require_finite_positive(R1, "R1");
    if (!(R1 < R)) throw std::invalid_argument("gradient bound: need R1 < R");
    require_finite_positive(gamma_star, "gamma_star");
}

BoundInputs BoundInputs::from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"m", "kappa", "kbar", "R", "R1", "gamma_star"}, "BoundInputs");
    BoundInputs in;
    in.m = j.at("m").get<int>();
    in.kappa = j.value("kappa", 0.0);
    in.kbar = j.value("kbar", 0.0);
    in.R = j.at("R").get<double>();
    in.R1 = j.at("R1").get<double>();
    in.gamma_star = j.at("gamma_star").get<double>();
    in.validate();
    return in;
}

nlohmann::json BoundInputs::to_json() const {
    return {{"m", m},   {"kappa", kappa}, {"kbar", kbar},
            {"R", R},   {"R1", R1},       {"gamma_star", gamma_star}};
}

KorevaarParams KorevaarParams::from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"eps", "tau", "q", "a0", "L"}, "KorevaarParams");
    KorevaarParams p;
    p.eps = j.at("eps").get<double>();
    p.tau = j.at("tau").get<double>();
    p.q = j.at("q").get<double>();
    p.a0 = j.at("a0").get<double>();
    p.L = j.at("L").get<double>();
    return p;
}

nlohmann::json KorevaarParams::to_json() const {
    return {{"eps", eps}, {"tau", tau}, {"q", q}, {"a0", a0}, {"L", L}};
}

DerivedConstants derived_constants(const BoundInputs& in, const KorevaarParams& p) {
    const double g = in.gamma_star;
    const double a1 = (1.0 - p.tau) * (p.q * p.q - 1.0 / (p.tau * p.a0 * p.a0 * g * g)) * p.L * p.L;
    const double a2 = (in.m + 1) * in.kbar0() * p.L / (p.eps * in.R);
    const double a3 = a1 - (in.m - 1) * in.kappa * in.kappa;
    return {a1, a2, a3};
}

ValidityReport validate_params(const BoundInputs& in, const KorevaarParams& p) {
    in.validate();
    ValidityReport rep;
    const double g = in.gamma_star;

    double pos = p.eps;
    pos = std::min(pos, p.tau);
    pos = std::min(pos, 1.0 - p.tau);
    pos = std::min(pos, p.q);
    pos = std::min(pos, p.a0);
    pos = std::min(pos, p.L);
    rep.constraints.push_back({"par_1a", pos, pos > 0.0});

    const double ratio = in.R1 / in.R;
    const double upper = (std::sqrt(p.eps * p.eps + 1.0) - std::sqrt(ratio * ratio + p.eps * p.eps)) / g;
    rep.constraints.push_back({"par_1b_upper", upper - p.q, upper - p.q > 0.0});

    const double lower = 1.0 / (std::sqrt(p.tau) * p.a0 * g);
    rep.constraints.push_back({"par_1b_lower", p.q - lower, p.q - lower > 0.0});

    rep.consts = derived_constants(in, p);
    const double s2 = rep.consts.a1 - rep.consts.a2 - (in.m - 1) * in.kappa * in.kappa;
    rep.constraints.push_back({"par_2", s2, s2 > 0.0});

    rep.pass = true;
    for (const auto& c : rep.constraints) rep.pass = rep.pass && c.ok;
    return rep;
}

nlohmann::json ValidityReport::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : constraints) cs.push_back({{"name", c.name}, {"slack", c.slack}, {"ok", c.ok}});
    return {{"pass", pass},
            {"a1", consts.a1},
            {"a2", consts.a2},
            {"a3", consts.a3},
            {"constraints", cs}};
}

double log_expm1(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_expm1: argument must be positive");
    if (x < 36.0) return std::log(std::expm1(x));
    return x + std::log1p(-std::exp(-x));
}

BoundValue korevaar_bound(const BoundInputs& in, const KorevaarParams& p, double r, double gamma) {
    ValidityReport vr = validate_params(in, p);
    if (!vr.pass) {
        std::string names;
        for (const auto& c : vr.constraints)
            if (!c.ok) names += (names.empty() ? "" : ", ") + c.name;
        throw std::invalid_argument("korevaar_bound: infeasible parameters (" + names + ")");
    }
    if (!(r >= 0.0) || r > in.R1 * (1.0 + 1e-12))
        throw std::invalid_argument("korevaar_bound: need 0 <= r <= R1");
    if (!(gamma >= 0.0) || gamma > in.gamma_star * (1.0 + 1e-12))
        throw std::invalid_argument("korevaar_bound: need 0 <= gamma <= gamma_star");

    const double g = in.gamma_star;
    const double LR = p.L * in.R;
    const double e2 = p.eps * p.eps;
    const double A = LR * (std::sqrt(e2 + 1.0) - p.eps);
    const double B = LR * (std::sqrt(e2 + 1.0) - std::sqrt(e2 + (r / in.R) * (r / in.R)) - p.q * gamma);
    if (!(B > 0.0)) throw std::domain_error("korevaar_bound: denominator exponent not positive");

    const double fac2 = std::max(1.0 + p.a0 * p.a0 * g * g, vr.consts.a3 / (vr.consts.a3 - vr.consts.a2));
    BoundValue out;
    out.log_value = 0.5 * std::log(fac2) + log_expm1(A) - log_expm1(B);
    out.value = std::exp(out.log_value);
    return out;
}

KorevaarParams canonical_params(double delta, double gamma_star, int m, double kbar0, double R) {
    if (!(delta >= 0.5) || !(delta < 1.0))
        throw std::invalid_argument("canonical_params: delta must lie in [1/2, 1)");
    require_finite_positive(gamma_star, "gamma_star");
    require_finite_positive(kbar0, "kbar0");
    require_finite_positive(R, "R");
    if (m < 2) throw std::invalid_argument("canonical_params: dimension m must be >= 2");

    KorevaarParams p;
    p.tau = 0.5;
    p.eps = delta;
    p.q = (1.0 - delta) / (2.0 * std::sqrt(2.0) * gamma_star);
    p.a0 = 2.0 / (p.q * gamma_star);
    p.L = 8.0 * (m + 1) * kbar0 / (delta * R * p.q * p.q);
    return p;
}

BoundValue corollary_bound(double delta, double gamma_star, int m, double kbar0) {
    if (!(delta >= 0.5) || !(delta < 1.0))
        throw std::invalid_argument("corollary_bound: delta must lie in [1/2, 1)");
    if (!std::isfinite(gamma_star) || gamma_star < 0.0)
        throw std::invalid_argument("corollary_bound: gamma_star must be >= 0");
    require_finite_positive(kbar0, "kbar0");
    if (m < 2) throw std::invalid_argument("corollary_bound: dimension m must be >= 2");

    const double g2 = gamma_star * gamma_star;
    const double om = 1.0 - delta;
    const double C = 2.0 / (delta * om);
    const double K = 16.0 * std::sqrt(2.0) * (m + 1) * kbar0 / (delta * om);
    const double fac2 = std::max(1.0 + 32.0 * g2 / (om * om), 2.0);
    BoundValue out;
    out.log_value = 0.5 * std::log(fac2) + std::log(C) + K * (C - 1.0) * g2;
    out.value = std::exp(out.log_value);
    return out;
}

BoundValue entire_bound(double a, int m, double kbar0) {
    if (!std::isfinite(a) || a < 0.0) throw std::invalid_argument("entire_bound: slope must be >= 0");
    return corollary_bound(0.5, a, m, kbar0);
}

nlohmann::json OptimizeResult::to_json() const {
    return {{"feasible", feasible},
            {"params", params.to_json()},
            {"log_bound", bound.log_value},
            {"bound", bound.value},
            {"evals", evals},
            {"canonical_fallback", canonical_fallback}};
}

OptimizeResult optimize_params(const BoundInputs& in, double r, double gamma,
                               std::uint64_t seed, int budget) {
    in.validate();
    if (!(r >= 0.0) || r > in.R1) throw std::invalid_argument("optimize_params: need 0 <= r <= R1");
    if (!(gamma >= 0.0) || gamma > in.gamma_star)
        throw std::invalid_argument("optimize_params: need 0 <= gamma <= gamma_star");

    auto unpack = [](const std::vector<double>& x) {
        KorevaarParams p;
        p.eps = std::exp(x[0]);
        p.tau = 1.0 / (1.0 + std::exp(-x[1]));
        p.q = std::exp(x[2]);
        p.a0 = std::exp(x[3]);
        p.L = std::exp(x[4]);
        return p;
    };
    auto pack = [](const KorevaarParams& p) {
        return std::vector<double>{std::log(p.eps), std::log(p.tau / (1.0 - p.tau)),
                                   std::log(p.q), std::log(p.a0), std::log(p.L)};
    };

    int evals = 0;
    auto objective = [&](const std::vector<double>& x) {
        ++evals;
        KorevaarParams p = unpack(x);
        ValidityReport vr = validate_params(in, p);
        if (!vr.pass) {
            double pen = 0.0;
            for (const auto& c : vr.constraints)
                if (!c.ok) pen += 1e6 + std::min(1e6, std::isfinite(c.slack) ? -c.slack : 1e6);
            return 1e8 + pen;
        }
        try {
            return korevaar_bound(in, p, r, gamma).log_value;
        } catch (const std::exception&) {
            return 1e9;
        }
    };

    const double delta_c = std::max(0.5, in.R1 / in.R);
    KorevaarParams canon = canonical_params(delta_c, in.gamma_star, in.m, in.kbar0(), in.R);
    const bool canon_ok = validate_params(in, canon).pass;

    OptimizeResult best;
    best.evals = 0;
    auto consider = [&](const KorevaarParams& p) {
        if (!validate_params(in, p).pass) return;
        BoundValue b;
        try {
            b = korevaar_bound(in, p, r, gamma);
        } catch (const std::exception&) {
            return;
        }
        if (!best.feasible || b.log_value < best.bound.log_value) {
            best.feasible = true;
            best.params = p;
            best.bound = b;
        }
    };
    if (canon_ok) consider(canon);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 0.3);
    const int restarts = 5;
    const int per_restart = std::max(50, budget / restarts);
    std::vector<double> base = pack(canon);
    for (int s = 0; s < restarts; ++s) {
        std::vector<double> x0 = base;
        if (s > 0)
            for (double& v : x0) v += jitter(rng);
        SimplexResult res =
            nelder_mead(objective, x0, 0.25, per_restart, 1e-12);
        consider(unpack(res.x));
    }
    best.evals = evals;
    if (canon_ok && best.feasible && canon.to_json() == best.params.to_json())
        best.canonical_fallback = true;
    return best;
}

SolutionSection offset_ball_section(const RadialGraph& g, double center, double R, double R1) {
    if (g.size() < 4) throw std::invalid_argument("offset_ball_section: graph too small");
    if (!(R1 > 0.0) || !(R1 < R)) throw std::invalid_argument("offset_ball_section: need 0 < R1 < R");
    const double dr = g.dr();
    const double pad = dr * (1.0 + 1e-9);
    if (center - R - pad < g.r.front() - 1e-12 || center + R + pad > g.r.back() + 1e-12)
        throw std::invalid_argument("offset_ball_section: ball B_R exceeds the graph domain");

    // inf over B_R and sup over B_R1 taken over a one-cell superset of the
    // radial trace of each ball; widening only raises gamma, which keeps the
    // bound check valid.
    double inf_u = std::numeric_limits<double>::infinity();
    double sup_u = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = g.r[i];
        if (std::abs(s - center) <= R + pad) inf_u = std::min(inf_u, g.u[i]);
        if (std::abs(s - center) <= R1 + pad) sup_u = std::max(sup_u, g.u[i]);
    }

    SolutionSection sec;
    sec.label = "offset-ball";
    sec.gamma_star = (sup_u - inf_u) / R;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = g.r[i];
        if (std::abs(s - center) > R1) continue;
        SectionPoint pt;
        pt.r = std::abs(s - center);
        pt.gamma = (g.u[i] - inf_u) / R;
        pt.W = g.W[i];
        sec.pts.push_back(pt);
    }
    if (sec.pts.size() < 3) throw std::invalid_argument("offset_ball_section: too few grid points in B_R1");
    return sec;
}

SolutionSection t_graph_section(const TGraph& g, double R, double R1,
                                double f_lower, int nt, int nr) {
    if (g.man.kind() != ManifoldKind::DoublyWarped)
        throw std::invalid_argument("t_graph_section: needs a doubly warped manifold");
    if (!(R1 > 0.0) || !(R1 < R)) throw std::invalid_argument("t_graph_section: need 0 < R1 < R");
    require_finite_positive(f_lower, "f_lower");
    if (nt < 2 || nr < 2) throw std::invalid_argument("t_graph_section: need nt, nr >= 2");
    const double f0 = g.man.fiber_f().eval(0.0).value;
    if (f0 < f_lower * (1.0 - 1e-12))
        throw std::invalid_argument("t_graph_section: f_lower exceeds f(0)");

    const double a = std::abs(g.slope);
    SolutionSection sec;
    sec.label = "t-graph-ball";
    sec.gamma_star = a * (R1 + R) / (f_lower * R);

    // Points (t, r) with f(0)|t| + r <= R1 lie in B_R1(o): a path along the
    // t-axis then radially has that length.  The same sum over-estimates the
    // distance from o, and |t'| <= R/f_lower on B_R bounds the oscillation.
    const double t_max = R1 / f0;
    for (int i = 0; i < nt; ++i) {
        const double t = -t_max + 2.0 * t_max * i / (nt - 1);
        const double r_span = R1 - f0 * std::abs(t);
        for (int k = 0; k < nr; ++k) {
            const double r = r_span * k / (nr - 1);
            SectionPoint pt;
            pt.r = std::min(R1, f0 * std::abs(t) + r);
            pt.gamma = (g.slope * t + a * R / f_lower) / R;
            pt.W = g.W(r);
            sec.pts.push_back(pt);
        }
    }
    return sec;
}

nlohmann::json BoundCheckReport::to_json() const {
    return {{"pass", pass},
            {"min_margin_log", min_margin},
            {"at_r", at_r},
            {"params", params.to_json()},
            {"validity", validity.to_json()},
            {"assumption", assumption}};
}

BoundCheckReport verify_solution_bound(const SolutionSection& sec, const BoundInputs& in,
                                       const KorevaarParams& p, const std::string& assumption) {
    if (sec.pts.empty()) throw std::invalid_argument("verify_solution_bound: empty section");
    if (sec.gamma_star > in.gamma_star * (1.0 + 1e-12))
        throw std::invalid_argument("verify_solution_bound: section oscillation exceeds inputs.gamma_star");
    BoundCheckReport rep;
    rep.params = p;
    rep.assumption = assumption;
    rep.validity = validate_params(in, p);
    if (!rep.validity.pass) throw std::invalid_argument("verify_solution_bound: infeasible parameters");

    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& pt : sec.pts) {
        if (!(pt.W >= 1.0)) throw std::invalid_argument("verify_solution_bound: section W below 1");
        const double gamma = std::min(std::max(pt.gamma, 0.0), in.gamma_star);
        BoundValue b = korevaar_bound(in, p, pt.r, gamma);
        const double margin = b.log_value - std::log(pt.W);
        if (margin < rep.min_margin) {
            rep.min_margin = margin;
            rep.at_r = pt.r;
        }
    }
    rep.pass = rep.min_margin > 0.0;
    return rep;
}

BoundCheckReport verify_solution_bound(const SolutionSection& sec, const BoundInputs& in,
                                       const std::string& assumption) {
    const double delta = std::max(0.5, in.R1 / in.R);
    KorevaarParams p = canonical_params(delta, in.gamma_star, in.m, in.kbar0(), in.R);
    return verify_solution_bound(sec, in, p, assumption);
}

}  // namespace mgl
