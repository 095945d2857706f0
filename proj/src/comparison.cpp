#include "mgl/comparison.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mgl {

HSpec HSpec::zero() {
    HSpec s;
    s.h_ = [](double) { return 0.0; };
    s.name_ = "zero";
    return s;
}

HSpec HSpec::constant(double kappa) {
    if (kappa < 0.0) throw std::invalid_argument("HSpec: kappa < 0");
    HSpec s;
    const double k2 = kappa * kappa;
    s.h_ = [k2](double) { return k2; };
    s.name_ = "const-kappa";
    s.kappa_ = kappa;
    return s;
}

HSpec HSpec::decay(double kappa) {
    if (kappa < 0.0) throw std::invalid_argument("HSpec: kappa < 0");
    HSpec s;
    const double k2 = kappa * kappa;
    s.h_ = [k2](double t) { return k2 / (1.0 + t * t); };
    s.name_ = "decay-kappa";
    s.kappa_ = kappa;
    return s;
}

HSpec HSpec::custom(std::function<double(double)> h, std::string name) {
    HSpec s;
    s.h_ = std::move(h);
    s.name_ = std::move(name);
    return s;
}

bool HSpec::has_closed_form() const {
    return name_ == "zero" || name_ == "const-kappa" || name_ == "decay-kappa";
}

HSpec HSpec::from_json(const json& spec) {
    const std::string name = spec.at("name").get<std::string>();
    if (name == "zero") return zero();
    if (name == "const-kappa") return constant(spec.at("kappa").get<double>());
    if (name == "decay-kappa") return decay(spec.at("kappa").get<double>());
    throw std::invalid_argument("unknown H profile: " + name);
}

json HSpec::to_json() const {
    json j{{"name", name_}};
    if (name_ != "zero") j["kappa"] = kappa_;
    return j;
}

void ComparisonProfile::ensure_interp() const {
    if (!interp_ready_) {
        interp_ = CubicHermite(t, h, dh);
        interp_ready_ = true;
    }
}

double ComparisonProfile::value(double x) const {
    ensure_interp();
    return interp_.value(x);
}

double ComparisonProfile::deriv(double x) const {
    ensure_interp();
    return interp_.deriv(x);
}

double ComparisonProfile::max_residual() const {
    double worst = 0.0;
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double second = (h[i + 1] - 2.0 * h[i] + h[i - 1]) / (dt * dt);
        worst = std::max(worst, std::fabs(second - H(t[i]) * h[i]));
    }
    return worst;
}

void ComparisonProfile::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,h,dh\n";
    char buf[128];
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t[i], h[i],
                      dh[i]);
        out << buf;
    }
}

ComparisonProfile solve_h(const HSpec& H, double t_max, int n) {
    if (!(t_max > 0.0) || n < 16)
        throw std::invalid_argument("solve_h: need t_max > 0 and n >= 16");
    const double dt = t_max / n;
    ComparisonProfile p;
    p.H = H;
    p.t.resize(n);
    p.h.resize(n);
    p.dh.resize(n);
    for (int i = 0; i < n; ++i) p.t[i] = (i + 1) * dt;

    auto Hat = [&](double t) {
        const double v = H(t);
        if (v < 0.0) {
            char buf[80];
            std::snprintf(buf, sizeof buf,
                          "solve_h: negative H sample at t=%.12g", t);
            throw std::domain_error(buf);
        }
        return v;
    };

    // Pole data from the series h = t + H(0) t^3/6 + O(t^4); the (t0, 1)
    // truncation alone leaves an O(t0^2) slope defect that the solver
    // tolerance cannot absorb.
    const double t0 = p.t[0];
    const double H0 = Hat(t0);
    double y0 = t0 + H0 * t0 * t0 * t0 / 6.0;
    double y1 = 1.0 + H0 * t0 * t0 / 2.0;
    p.h[0] = y0;
    p.dh[0] = y1;

    for (int i = 1; i < n; ++i) {
        const double a = p.t[i - 1];
        // Classical RK4 on (h, h')' = (h', H h).
        const double k1h = y1, k1d = Hat(a) * y0;
        const double k2h = y1 + 0.5 * dt * k1d,
                     k2d = Hat(a + 0.5 * dt) * (y0 + 0.5 * dt * k1h);
        const double k3h = y1 + 0.5 * dt * k2d,
                     k3d = Hat(a + 0.5 * dt) * (y0 + 0.5 * dt * k2h);
        const double k4h = y1 + dt * k3d, k4d = Hat(a + dt) * (y0 + dt * k3h);
        y0 += dt / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
        y1 += dt / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        if (!(y0 > 0.0) || !(y1 > 0.0))
            throw std::runtime_error("solve_h: positivity lost");
        p.h[i] = y0;
        p.dh[i] = y1;
    }
    return p;
}

double graph_laplacian_bound(int m, const ComparisonProfile& p, double r) {
    if (m < 2) throw std::invalid_argument("graph_laplacian_bound: m < 2");
    const double h = p.value(r);
    if (!(h > 0.0))
        throw std::domain_error("graph_laplacian_bound: profile not positive");
    return m * p.deriv(r) / h;
}

double laplacian_bound_closed_form(int m, const HSpec& H, double r) {
    if (!(r > 0.0))
        throw std::domain_error("laplacian_bound_closed_form: r <= 0");
    const double k = H.kappa();
    if (H.name() == "zero" || (H.name() == "const-kappa" && k == 0.0))
        return m / r;
    if (H.name() == "const-kappa") return m * k / std::tanh(k * r);
    if (H.name() == "decay-kappa")
        return m * (1.0 + std::sqrt(1.0 + 4.0 * k * k)) / (2.0 * r);
    throw std::invalid_argument("no closed form for profile " + H.name());
}

PsiBarrier psi_barrier(double a, double kappa_bar, int m) {
    if (!(a > 0.0) || kappa_bar < 0.0 || m < 2)
        throw std::invalid_argument("psi_barrier: bad arguments");
    return {a, kappa_bar, m, (m + 1) * std::max(1.0, kappa_bar) / a};
}

ComparisonCheck verify_graph_comparison(const ModelManifold& man,
                                        const RadialGraph& g,
                                        const ComparisonProfile& p) {
    if (g.r.front() < p.t.front() || g.r.back() > p.t.back())
        throw std::invalid_argument(
            "verify_graph_comparison: graph grid exceeds profile range");
    const int m = man.dim();
    ComparisonCheck out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const WarpEval e = man.eta().eval(g.r[i]);
        const double lap = (m - 1) * e.d1 / e.value;
        const double margin = graph_laplacian_bound(m, p, g.r[i]) - lap;
        if (margin < out.worst_margin) {
            out.worst_margin = margin;
            out.worst_r = g.r[i];
        }
    }
    out.pass = out.worst_margin >= -1e-9;
    return out;
}

}  // namespace mgl
