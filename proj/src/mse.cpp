#include "mgl/mse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mgl/quadrature.hpp"

namespace mgl {

double RadialGraph::dr() const {
    if (r.size() < 2) throw std::logic_error("RadialGraph: grid too small");
    return (r.back() - r.front()) / (r.size() - 1);
}

namespace {

void require_uniform(const std::vector<double>& r) {
    const double dr = (r.back() - r.front()) / (r.size() - 1);
    for (std::size_t i = 1; i < r.size(); ++i)
        if (std::fabs(r[i] - r[i - 1] - dr) > 1e-9 * (1.0 + dr))
            throw std::invalid_argument("graph grid is not uniform");
}

double pow_int(double x, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= x;
    return v;
}

}  // namespace

RadialGraph radial_flux_solution(const ModelManifold& man, double c, double r0,
                                 double r1, int n) {
    if (man.kind() != ManifoldKind::RotSym)
        throw std::invalid_argument(
            "radial_flux_solution: needs a rotationally symmetric base");
    if (!(r0 > 0.0) || !(r1 > r0) || n < 2)
        throw std::invalid_argument("radial_flux_solution: bad grid request");
    const int m = man.dim();
    const auto& eta = man.eta();
    auto slope = [&](double r) {
        const double em = pow_int(eta.eval(r).value, m - 1);
        const double disc = em * em - c * c;
        if (!(disc > 0.0)) {
            char buf[96];
            std::snprintf(buf, sizeof buf,
                          "radial_flux_solution: flux infeasible at r=%.12g",
                          r);
            throw std::domain_error(buf);
        }
        return c / std::sqrt(disc);
    };

    RadialGraph g{man, {}, {}, {}, {}, c};
    g.r.resize(n);
    g.u.resize(n);
    g.du.resize(n);
    g.W.resize(n);
    const double dr = (r1 - r0) / (n - 1);
    for (int i = 0; i < n; ++i) g.r[i] = r0 + i * dr;
    // Feasibility probed at nodes and midpoints before integrating.
    for (int i = 0; i < n; ++i) {
        slope(g.r[i]);
        if (i + 1 < n) slope(g.r[i] + 0.5 * dr);
    }
    g.u[0] = 0.0;
    g.du[0] = slope(g.r[0]);
    g.W[0] = std::hypot(1.0, g.du[0]);
    for (int i = 1; i < n; ++i) {
        g.u[i] = g.u[i - 1] + gauss_legendre_5(slope, g.r[i - 1], g.r[i]);
        g.du[i] = slope(g.r[i]);
        g.W[i] = std::hypot(1.0, g.du[i]);
    }
    return g;
}

ResidualReport mse_residual(const RadialGraph& g) {
    const std::size_t n = g.size();
    if (n < 3) throw std::invalid_argument("mse_residual: need >= 3 points");
    require_uniform(g.r);
    const int m = g.man.dim();
    const auto& eta = g.man.eta();
    const double dr = g.dr();

    std::vector<double> flux(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double rm = 0.5 * (g.r[i] + g.r[i + 1]);
        const double up = (g.u[i + 1] - g.u[i]) / dr;
        flux[i] = pow_int(eta.eval(rm).value, m - 1) * up / std::hypot(1.0, up);
    }
    ResidualReport rep;
    rep.values.resize(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double em = pow_int(eta.eval(g.r[i]).value, m - 1);
        const double v = std::fabs(flux[i] - flux[i - 1]) / (dr * em);
        rep.values[i - 1] = v;
        if (v > rep.max_abs) {
            rep.max_abs = v;
            rep.at_r = g.r[i];
        }
    }
    return rep;
}

std::vector<double> second_fundamental_form_norm(const RadialGraph& g) {
    const std::size_t n = g.size();
    if (n < 3)
        throw std::invalid_argument(
            "second_fundamental_form_norm: need >= 3 points");
    require_uniform(g.r);
    const int m = g.man.dim();
    const double dr = g.dr();

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double upp;
        if (i == 0)
            upp = (-3.0 * g.du[0] + 4.0 * g.du[1] - g.du[2]) / (2.0 * dr);
        else if (i + 1 == n)
            upp = (3.0 * g.du[n - 1] - 4.0 * g.du[n - 2] + g.du[n - 3]) /
                  (2.0 * dr);
        else
            upp = (g.du[i + 1] - g.du[i - 1]) / (2.0 * dr);
        const WarpEval e = g.man.eta().eval(g.r[i]);
        const double W2 = g.W[i] * g.W[i];
        const double rad = upp / W2;
        const double ang = e.d1 / e.value * g.du[i];
        out[i] = (rad * rad + (m - 1) * ang * ang) / W2;
    }
    return out;
}

JacobiReport jacobi_residual(const RadialGraph& g) {
    const std::size_t n = g.size();
    if (n < 3)
        throw std::invalid_argument("jacobi_residual: need >= 3 points");
    require_uniform(g.r);
    const int m = g.man.dim();
    const auto& eta = g.man.eta();
    const double dr = g.dr();

    JacobiReport rep;
    // Minimality gate: the first integral eta^(m-1) u'/W of the stored slope
    // field must be grid-constant. Unlike the divergence residual this is
    // mesh-independent, so it separates solutions from arbitrary graphs.
    {
        const double ref = pow_int(eta.eval(g.r[n / 2]).value, m - 1) *
                           g.du[n / 2] / g.W[n / 2];
        double drift = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double flux =
                pow_int(eta.eval(g.r[i]).value, m - 1) * g.du[i] / g.W[i];
            drift = std::max(drift, std::fabs(flux - ref));
        }
        rep.minimal = drift <= 1e-6 * std::max(1.0, std::fabs(ref));
    }

    const std::vector<double> ii2 = second_fundamental_form_norm(g);
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) theta[i] = 1.0 / g.W[i];

    // Staggered flux form of Delta_g theta = (eta^(m-1) theta'/W)'/(W eta^(m-1)).
    std::vector<double> flux(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double rm = 0.5 * (g.r[i] + g.r[i + 1]);
        const double up = (g.u[i + 1] - g.u[i]) / dr;
        const double Wm = std::hypot(1.0, up);
        flux[i] = pow_int(eta.eval(rm).value, m - 1) *
                  (theta[i + 1] - theta[i]) / (dr * Wm);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const WarpEval e = eta.eval(g.r[i]);
        const double em = pow_int(e.value, m - 1);
        const double lap = (flux[i] - flux[i - 1]) / (dr * g.W[i] * em);
        const double ric_rr = -(m - 1) * e.d2 / e.value;
        const double ric_nn =
            g.du[i] * g.du[i] / (g.W[i] * g.W[i]) * ric_rr;
        const double v = std::fabs(lap + (ii2[i] + ric_nn) * theta[i]);
        if (v > rep.max_abs) {
            rep.max_abs = v;
            rep.at_r = g.r[i];
        }
    }
    return rep;
}

double TGraph::grad_norm(double r) const {
    return slope / man.fiber_f().eval(r).value;
}

double TGraph::W(double r) const { return std::hypot(1.0, grad_norm(r)); }

double t_graph_residual(const TGraph& g, double r, double du_dt, double u_tt) {
    const double f = g.man.fiber_f().eval(r).value;
    const double w = std::hypot(1.0, du_dt / f);
    return u_tt / (f * f * w * w * w);
}

double t_graph_residual(const TGraph& g, double r) {
    return t_graph_residual(g, r, g.slope, 0.0);
}

RadialField RadialField::harmonic(const ModelManifold& man,
                                  std::vector<double> r,
                                  std::vector<double> u) {
    if (r.size() != u.size() || r.size() < 3)
        throw std::invalid_argument("RadialField: bad sample arrays");
    require_uniform(r);
    return {man, std::move(r), std::move(u), FieldOperator::Laplace};
}

RadialField RadialField::from_graph(const RadialGraph& g) {
    return {g.man, g.r, g.u, FieldOperator::MinimalGraph};
}

double Cutoff::operator()(double r) const {
    if (r <= plateau_end) return 1.0;
    if (r >= support_end) return 0.0;
    return (support_end - r) / (support_end - plateau_end);
}

double Cutoff::slope(double r) const {
    if (r <= plateau_end || r >= support_end) return 0.0;
    return -1.0 / (support_end - plateau_end);
}

CaccioppoliReport caccioppoli_check(const RadialField& field, const Cutoff& phi,
                                    double alpha) {
    const std::size_t n = field.r.size();
    if (!(alpha >= 1.0))
        throw std::invalid_argument("caccioppoli_check: alpha must be >= 1");
    if (!(phi.plateau_end < phi.support_end) ||
        phi.support_end > field.r.back() + 1e-12)
        throw std::invalid_argument(
            "caccioppoli_check: cutoff not compactly supported on the grid");
    const int m = field.man.dim();
    const auto& eta = field.man.eta();
    const double dr = (field.r.back() - field.r.front()) / (n - 1);

    CaccioppoliReport rep;
    // Midpoint sums; the radial measure eta^(m-1) dr carries the common
    // sphere factor which cancels from both sides.
    std::vector<double> flux(n - 1);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double rm = 0.5 * (field.r[i] + field.r[i + 1]);
        const double um = 0.5 * (field.u[i] + field.u[i + 1]);
        const double up = (field.u[i + 1] - field.u[i]) / dr;
        const double w = pow_int(eta.eval(rm).value, m - 1) * dr;
        const double pm = phi(rm);
        const double ps = phi.slope(rm);
        lhs += pm * pm * up * up * w;
        rhs += 4.0 * alpha * alpha * um * um * ps * ps * w;
        const double a_r = field.op == FieldOperator::MinimalGraph
                               ? 1.0 / std::hypot(1.0, up)
                               : 1.0;
        flux[i] = pow_int(eta.eval(rm).value, m - 1) * a_r * up;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double em = pow_int(eta.eval(field.r[i]).value, m - 1);
        rep.harmonic_residual =
            std::max(rep.harmonic_residual,
                     std::fabs(flux[i] - flux[i - 1]) / (dr * em));
    }
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.holds = lhs <= rhs * (1.0 + 1e-12);
    return rep;
}

void write_graph_csv(const RadialGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    const ResidualReport res = mse_residual(g);
    out << "r,u,du,W,residual\n";
    char buf[256];
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double resid =
            (i == 0 || i + 1 == g.size()) ? 0.0 : res.values[i - 1];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      g.r[i], g.u[i], g.du[i], g.W[i], resid);
        out << buf;
    }
}

RadialGraph read_graph_csv(const ModelManifold& man, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty graph file " + path);
    RadialGraph g{man, {}, {}, {}, {},
                  std::numeric_limits<double>::quiet_NaN()};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double v[5];
        char comma;
        row >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3] >>
            comma >> v[4];
        if (!row) throw std::runtime_error("bad graph row: " + line);
        g.r.push_back(v[0]);
        g.u.push_back(v[1]);
        g.du.push_back(v[2]);
        g.W.push_back(v[3]);
    }
    if (g.r.size() < 3) throw std::runtime_error("graph too small: " + path);
    require_uniform(g.r);
    return g;
}

}  // namespace mgl
