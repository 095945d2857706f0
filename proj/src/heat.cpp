#include "mgl/heat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "mgl/quadrature.hpp"

namespace mgl {

namespace {

RadialMesh make_mesh(const ModelManifold& man, double r_lo, double r_max, int n) {
    if (man.kind() != ManifoldKind::RotSym)
        throw std::invalid_argument("radial mesh: needs a rotationally symmetric manifold");
    if (!(r_max > r_lo) || n < 8) throw std::invalid_argument("radial mesh: need r_max > r_lo, n >= 8");
    RadialMesh mesh{man, r_lo, (r_max - r_lo) / n, n, {}, {}, {}};
    const double omega = unit_sphere_area(man.dim());
    mesh.center.resize(n);
    mesh.cell_w.resize(n);
    mesh.face_area.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double rf = r_lo + k * mesh.dr;
        const double eta = (rf == 0.0) ? 0.0 : man.eta().eval(rf).value;
        mesh.face_area[k] = omega * std::pow(eta, man.dim() - 1);
    }
    for (int i = 0; i < n; ++i) {
        mesh.center[i] = r_lo + (i + 0.5) * mesh.dr;
        const double eta = man.eta().eval(mesh.center[i]).value;
        mesh.cell_w[i] = omega * std::pow(eta, man.dim() - 1) * mesh.dr;
    }
    return mesh;
}

double interp_on_graph(const RadialGraph& g, double r) {
    if (r < g.r.front() - 1e-12 || r > g.r.back() + 1e-12)
        throw std::invalid_argument("heat operator: radius outside the graph domain");
    const double x = (r - g.r.front()) / g.dr();
    std::size_t i = std::min<std::size_t>(g.size() - 2, std::size_t(std::max(0.0, x)));
    const double s = x - double(i);
    return g.W[i] * (1.0 - s) + g.W[i + 1] * s;
}

void thomas_solve(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup,
                  std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

RadialMesh RadialMesh::pole(const ModelManifold& man, double r_max, int n) {
    return make_mesh(man, 0.0, r_max, n);
}

RadialMesh RadialMesh::annulus(const ModelManifold& man, double r_lo, double r_max, int n) {
    if (!(r_lo > 0.0)) throw std::invalid_argument("radial mesh: annulus needs r_lo > 0");
    return make_mesh(man, r_lo, r_max, n);
}

double RadialMesh::mass(const std::vector<double>& u) const {
    if (int(u.size()) != n) throw std::invalid_argument("radial mesh: state size mismatch");
    double m = 0.0;
    for (int i = 0; i < n; ++i) m += cell_w[i] * u[i];
    return m;
}

int RadialMesh::cell_of(double r) const {
    const int i = int(std::floor((r - r_lo) / dr));
    return std::min(n - 1, std::max(0, i));
}

EllipticCoefficient EllipticCoefficient::identity(const RadialMesh& mesh) {
    EllipticCoefficient op;
    op.a_r_face.assign(mesh.n + 1, 1.0);
    op.a_theta.assign(mesh.n, 1.0);
    op.alpha = 1.0;
    return op;
}

EllipticCoefficient EllipticCoefficient::build(const RadialMesh& mesh,
                                               const std::function<double(double)>& a_r,
                                               const std::function<double(double)>& a_theta) {
    EllipticCoefficient op;
    op.a_r_face.resize(mesh.n + 1);
    op.a_theta.resize(mesh.n);
    double alpha = 1.0;
    for (int k = 0; k <= mesh.n; ++k) {
        const double v = a_r(mesh.r_lo + k * mesh.dr);
        if (!(v > 0.0)) throw std::invalid_argument("heat operator: a_r must be positive");
        op.a_r_face[k] = v;
        alpha = std::max({alpha, v, 1.0 / v});
    }
    for (int i = 0; i < mesh.n; ++i) {
        const double v = a_theta(mesh.center[i]);
        if (!(v > 0.0)) throw std::invalid_argument("heat operator: a_theta must be positive");
        op.a_theta[i] = v;
        alpha = std::max({alpha, v, 1.0 / v});
    }
    op.alpha = alpha;
    return op;
}

EllipticCoefficient EllipticCoefficient::from_graph(const RadialMesh& mesh, const RadialGraph& g) {
    return build(
        mesh, [&](double r) { return 1.0 / interp_on_graph(g, r); },
        [&](double r) { return interp_on_graph(g, r); });
}

void EllipticCoefficient::check_ellipticity(const RadialMesh& mesh) const {
    if (int(a_r_face.size()) != mesh.n + 1 || int(a_theta.size()) != mesh.n)
        throw std::invalid_argument("heat operator: coefficient size mismatch");
    const double lo = 1.0 / alpha - 1e-12;
    const double hi = alpha + 1e-12;
    for (double v : a_r_face)
        if (v < lo || v > hi) throw std::invalid_argument("heat operator: a_r breaks the alpha pinching");
    for (double v : a_theta)
        if (v < lo || v > hi) throw std::invalid_argument("heat operator: a_theta breaks the alpha pinching");
}

HeatEvolver::HeatEvolver(RadialMesh mesh, EllipticCoefficient op,
                         WallCondition inner, WallCondition outer, double theta)
    : mesh_(std::move(mesh)), op_(std::move(op)), inner_(inner), outer_(outer), theta_(theta) {
    if (!(theta_ >= 0.5) || !(theta_ <= 1.0))
        throw std::invalid_argument("heat evolver: theta must lie in [1/2, 1]");
    op_.check_ellipticity(mesh_);
    u_.assign(mesh_.n, 0.0);
}

void HeatEvolver::set_state(std::vector<double> u, double t0) {
    if (int(u.size()) != mesh_.n) throw std::invalid_argument("heat evolver: state size mismatch");
    u_ = std::move(u);
    t_ = t0;
    trace_.clear();
    record();
}

double HeatEvolver::mass() const { return mesh_.mass(u_); }

std::vector<double> HeatEvolver::apply_L(const std::vector<double>& u) const {
    if (int(u.size()) != mesh_.n) throw std::invalid_argument("heat evolver: state size mismatch");
    const int n = mesh_.n;
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if ((i == 0 && inner_ == WallCondition::FixedValue) ||
            (i == n - 1 && outer_ == WallCondition::FixedValue))
            continue;
        double flux_lo = 0.0, flux_hi = 0.0;
        if (i > 0)
            flux_lo = op_.a_r_face[i] * mesh_.face_area[i] * (u[i] - u[i - 1]) / mesh_.dr;
        if (i < n - 1)
            flux_hi = op_.a_r_face[i + 1] * mesh_.face_area[i + 1] * (u[i + 1] - u[i]) / mesh_.dr;
        out[i] = (flux_hi - flux_lo) / mesh_.cell_w[i];
    }
    return out;
}

double HeatEvolver::monotone_dt() const {
    if (theta_ >= 1.0) return std::numeric_limits<double>::infinity();
    const int n = mesh_.n;
    double dt = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if ((i == 0 && inner_ == WallCondition::FixedValue) ||
            (i == n - 1 && outer_ == WallCondition::FixedValue))
            continue;
        double diag = 0.0;
        if (i > 0) diag += op_.a_r_face[i] * mesh_.face_area[i] / (mesh_.cell_w[i] * mesh_.dr);
        if (i < n - 1)
            diag += op_.a_r_face[i + 1] * mesh_.face_area[i + 1] / (mesh_.cell_w[i] * mesh_.dr);
        if (diag > 0.0) dt = std::min(dt, 1.0 / ((1.0 - theta_) * diag));
    }
    return dt;
}

void HeatEvolver::step_theta(double dt, double theta) {
    if (!(dt > 0.0)) throw std::invalid_argument("heat evolver: dt must be positive");
    const int n = mesh_.n;
    std::vector<double> sub(n, 0.0), diag(n, 1.0), sup(n, 0.0);
    std::vector<double> rhs = u_;
    const std::vector<double> lu = apply_L(u_);
    for (int i = 0; i < n; ++i) rhs[i] += (1.0 - theta) * dt * lu[i];
    for (int i = 0; i < n; ++i) {
        if ((i == 0 && inner_ == WallCondition::FixedValue) ||
            (i == n - 1 && outer_ == WallCondition::FixedValue)) {
            rhs[i] = u_[i];
            continue;
        }
        if (i > 0) {
            const double c = op_.a_r_face[i] * mesh_.face_area[i] / (mesh_.cell_w[i] * mesh_.dr);
            sub[i] -= theta * dt * c;
            diag[i] += theta * dt * c;
        }
        if (i < n - 1) {
            const double c = op_.a_r_face[i + 1] * mesh_.face_area[i + 1] / (mesh_.cell_w[i] * mesh_.dr);
            sup[i] -= theta * dt * c;
            diag[i] += theta * dt * c;
        }
    }
    thomas_solve(sub, diag, sup, rhs);
    u_ = std::move(rhs);
    t_ += dt;
    record();
}

void HeatEvolver::step(double dt) { step_theta(dt, theta_); }

void HeatEvolver::step_backward_euler(double dt) { step_theta(dt, 1.0); }

void HeatEvolver::run(double T, double dt, bool rannacher) {
    if (!(T > t_)) throw std::invalid_argument("heat evolver: horizon not ahead of current time");
    if (!(dt > 0.0)) throw std::invalid_argument("heat evolver: dt must be positive");
    if (rannacher && theta_ < 1.0) {
        step_backward_euler(0.5 * dt);
        step_backward_euler(0.5 * dt);
    }
    while (t_ < T - 1e-12 * std::max(1.0, T)) step(std::min(dt, T - t_));
}

void HeatEvolver::record() {
    HeatTracePoint p;
    p.t = t_;
    p.mass = mesh_.mass(u_);
    p.min_u = *std::min_element(u_.begin(), u_.end());
    p.max_u = *std::max_element(u_.begin(), u_.end());
    trace_.push_back(p);
}

double HeatEvolver::outer_tail_mass(double fraction) const {
    const double cut = mesh_.r_hi() - fraction * (mesh_.r_hi() - mesh_.r_lo);
    double tail = 0.0, total = 0.0;
    for (int i = 0; i < mesh_.n; ++i) {
        const double w = mesh_.cell_w[i] * std::abs(u_[i]);
        total += w;
        if (mesh_.center[i] >= cut) tail += w;
    }
    return total > 0.0 ? tail / total : 0.0;
}

std::vector<double> delta_state(const RadialMesh& mesh) {
    if (mesh.r_lo > 0.5 * mesh.dr)
        throw std::invalid_argument("delta_state: needs a pole mesh");
    const double s = 4.0 * mesh.dr;
    std::vector<double> u(mesh.n, 0.0);
    for (int i = 0; i < mesh.n; ++i) {
        const double r = mesh.center[i];
        if (r < s) {
            const double c = std::cos(0.5 * M_PI * r / s);
            u[i] = c * c;
        }
    }
    const double m = mesh.mass(u);
    if (!(m > 0.0)) throw std::runtime_error("delta_state: empty bump");
    for (double& v : u) v /= m;
    return u;
}

nlohmann::json MassReport::to_json() const {
    return {{"max_drift", max_drift}, {"inconclusive", inconclusive}, {"pass", pass}};
}

MassReport mass_conservation_check(const HeatEvolver& ev, double tol) {
    const auto& tr = ev.trace();
    if (tr.size() < 2) throw std::invalid_argument("mass_conservation_check: empty trace");
    MassReport rep;
    const double m0 = tr.front().mass;
    for (const auto& p : tr) rep.max_drift = std::max(rep.max_drift, std::abs(p.mass - m0));
    rep.inconclusive = ev.outer_tail_mass(0.05) > 1e-6;
    rep.pass = !rep.inconclusive && rep.max_drift < tol;
    return rep;
}

void GaussianConstants::validate() const {
    for (double v : {c1, c2, c3, c4, c5, c6})
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("gaussian constants: all six must be finite and positive");
    if (c1 > c3)
        throw std::invalid_argument("gaussian constants: need C1 <= C3 (diagonal consistency)");
}

GaussianConstants GaussianConstants::from_json(const nlohmann::json& j) {
    GaussianConstants c;
    c.c1 = j.at("C1").get<double>();
    c.c2 = j.at("C2").get<double>();
    c.c3 = j.at("C3").get<double>();
    c.c4 = j.at("C4").get<double>();
    c.c5 = j.value("C5", 1.0);
    c.c6 = j.value("C6", 1.0);
    c.validate();
    return c;
}

nlohmann::json GaussianConstants::to_json() const {
    return {{"C1", c1}, {"C2", c2}, {"C3", c3}, {"C4", c4}, {"C5", c5}, {"C6", c6}};
}

nlohmann::json SandwichReport::to_json() const {
    return {{"all_pass", all_pass},
            {"fails_lower", fails_lower},
            {"fails_upper", fails_upper},
            {"worst_lower", worst_lower},
            {"worst_upper", worst_upper},
            {"fit", {{"C1", fit.C1}, {"C2", fit.C2}, {"C3", fit.C3}, {"C4", fit.C4}}}};
}

SandwichReport gaussian_sandwich_check(const std::vector<SandwichSample>& samples,
                                       const GaussianConstants& c) {
    if (samples.empty()) throw std::invalid_argument("gaussian_sandwich_check: no samples");
    c.validate();
    const std::size_t N = samples.size();
    std::vector<double> x(N), y(N);
    for (std::size_t i = 0; i < N; ++i) {
        const auto& s = samples[i];
        if (!(s.t > 0.0) || !(s.H > 0.0) || !(s.vol > 0.0))
            throw std::invalid_argument("gaussian_sandwich_check: samples need t, H, vol > 0");
        x[i] = s.d * s.d / s.t;
        y[i] = std::log(s.H * s.vol);
    }

    SandwichReport rep;
    rep.worst_lower = std::numeric_limits<double>::infinity();
    rep.worst_upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < N; ++i) {
        const double lo = y[i] - (std::log(c.c1) - c.c2 * x[i]);
        const double hi = (std::log(c.c3) - c.c4 * x[i]) - y[i];
        if (lo < 0.0) ++rep.fails_lower;
        if (hi < 0.0) ++rep.fails_upper;
        rep.worst_lower = std::min(rep.worst_lower, lo);
        rep.worst_upper = std::min(rep.worst_upper, hi);
    }
    rep.all_pass = rep.fails_lower == 0 && rep.fails_upper == 0;

    // Tightest envelopes by total log gap; the optimum of each two-variable
    // LP sits on a vertex of the constraint polygon.
    double scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) scale = std::max(scale, std::abs(y[i]));
    const double feas_tol = 1e-9 * std::max(1.0, scale);
    double sum_x = 0.0;
    for (double v : x) sum_x += v;

    auto feasible_upper = [&](double C4, double logC3) {
        if (!(C4 >= 0.0)) return false;
        for (std::size_t k = 0; k < N; ++k)
            if (logC3 < y[k] + C4 * x[k] - feas_tol) return false;
        return true;
    };
    auto feasible_lower = [&](double C2, double logC1) {
        if (!(C2 >= 0.0)) return false;
        for (std::size_t k = 0; k < N; ++k)
            if (logC1 > y[k] + C2 * x[k] + feas_tol) return false;
        return true;
    };

    double best_up = std::numeric_limits<double>::infinity();
    double up_C4 = 0.0, up_logC3 = -std::numeric_limits<double>::infinity();
    for (double v : y) up_logC3 = std::max(up_logC3, v);
    best_up = double(N) * up_logC3 - 0.0 * sum_x;
    double best_lo = -std::numeric_limits<double>::infinity();
    double lo_C2 = 0.0, lo_logC1 = std::numeric_limits<double>::infinity();
    for (double v : y) lo_logC1 = std::min(lo_logC1, v);
    best_lo = double(N) * lo_logC1;

    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            if (x[i] == x[j]) continue;
            const double slope = (y[i] - y[j]) / (x[j] - x[i]);
            if (!(slope >= 0.0)) continue;
            const double intercept = y[i] + slope * x[i];
            if (feasible_upper(slope, intercept)) {
                const double obj = double(N) * intercept - slope * sum_x;
                if (obj < best_up) {
                    best_up = obj;
                    up_C4 = slope;
                    up_logC3 = intercept;
                }
            }
            if (feasible_lower(slope, intercept)) {
                const double obj = double(N) * intercept - slope * sum_x;
                if (obj > best_lo) {
                    best_lo = obj;
                    lo_C2 = slope;
                    lo_logC1 = intercept;
                }
            }
        }
    rep.fit.C1 = std::exp(lo_logC1);
    rep.fit.C2 = lo_C2;
    rep.fit.C3 = std::exp(up_logC3);
    rep.fit.C4 = up_C4;
    return rep;
}

std::vector<SandwichSample> sample_kernel(const RadialMesh& mesh, const std::vector<double>& u,
                                          double t, double d_max, int stride) {
    if (int(u.size()) != mesh.n) throw std::invalid_argument("sample_kernel: state size mismatch");
    if (stride < 1) throw std::invalid_argument("sample_kernel: stride must be >= 1");
    const double vol = volume_ball(mesh.man, std::sqrt(t));
    std::vector<SandwichSample> out;
    for (int i = 0; i < mesh.n; i += stride) {
        if (mesh.center[i] > d_max) break;
        if (!(u[i] > 0.0)) continue;
        out.push_back({mesh.center[i], t, u[i], vol});
    }
    return out;
}

nlohmann::json FlowReport::to_json() const {
    return {{"pass", pass},
            {"max_time_slope", max_time_slope},
            {"range_violation", range_violation},
            {"lf_max_interior", lf_max_interior},
            {"dt", dt},
            {"steps", steps},
            {"halvings", halvings}};
}

FlowReport supersolution_flow(const RadialMesh& mesh, const EllipticCoefficient& op,
                              WallCondition inner, WallCondition outer,
                              const std::vector<double>& f, double T, double lf_tol) {
    HeatEvolver probe(mesh, op, inner, outer, 0.5);
    const std::vector<double> lf = probe.apply_L(f);
    FlowReport rep;
    rep.lf_max_interior = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < mesh.n; ++i) {
        if ((i == 0 && inner == WallCondition::FixedValue) ||
            (i == mesh.n - 1 && outer == WallCondition::FixedValue))
            continue;
        if (lf[i] > rep.lf_max_interior) rep.lf_max_interior = lf[i];
        if (lf[i] > lf_tol) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "supersolution_flow: discrete Lf = %.3e exceeds tolerance at r = %.6f",
                          lf[i], mesh.center[i]);
            throw std::invalid_argument(buf);
        }
    }

    const double f_lo = *std::min_element(f.begin(), f.end());
    const double f_span = *std::max_element(f.begin(), f.end()) - f_lo;
    double dt = std::min(mesh.dr, 0.9 * probe.monotone_dt());
    const int max_halvings = 6;
    for (int h = 0; h <= max_halvings; ++h) {
        HeatEvolver ev(mesh, op, inner, outer, 0.5);
        ev.set_state(f, 0.0);
        rep.max_time_slope = -std::numeric_limits<double>::infinity();
        rep.range_violation = 0.0;
        rep.steps = 0;
        rep.halvings = h;
        rep.dt = dt;
        bool tripped = false;
        while (ev.time() < T - 1e-12 * std::max(1.0, T)) {
            const std::vector<double> prev = ev.state();
            const double step = std::min(dt, T - ev.time());
            ev.step(step);
            ++rep.steps;
            const std::vector<double>& cur = ev.state();
            for (int i = 0; i < mesh.n; ++i) {
                rep.max_time_slope = std::max(rep.max_time_slope, (cur[i] - prev[i]) / step);
                rep.range_violation = std::max(rep.range_violation, cur[i] - f[i]);
                rep.range_violation = std::max(rep.range_violation, f_lo - cur[i]);
            }
            if (rep.max_time_slope > 1e-10) {
                tripped = true;
                break;
            }
        }
        if (!tripped) {
            rep.pass = rep.max_time_slope <= 1e-10 &&
                       rep.range_violation <= 1e-9 * std::max(1.0, f_span);
            return rep;
        }
        dt *= 0.5;
    }
    rep.pass = false;
    return rep;
}

nlohmann::json BallAverageReport::to_json() const {
    return {{"R", R},
            {"avg", avg},
            {"inf_f", inf_f},
            {"final_gap", final_gap},
            {"monotone_tail", monotone_tail}};
}

BallAverageReport ball_average_limit(const std::function<double(double)>& f,
                                     const ModelManifold& man,
                                     const std::vector<double>& R_list) {
    if (R_list.empty()) throw std::invalid_argument("ball_average_limit: empty radius list");
    for (std::size_t k = 1; k < R_list.size(); ++k)
        if (!(R_list[k] > R_list[k - 1]))
            throw std::invalid_argument("ball_average_limit: radii must increase");
    if (!(R_list.front() > 0.0)) throw std::invalid_argument("ball_average_limit: radii must be positive");

    const int m = man.dim();
    auto weight = [&](double r) {
        if (r == 0.0) return 0.0;
        const double eta = man.eta().eval(r).value;
        if (man.kind() == ManifoldKind::RotSym) return std::pow(eta, m - 1);
        return man.fiber_f().eval(r).value * std::pow(eta, m - 2);
    };

    BallAverageReport rep;
    rep.R = R_list;
    double num = 0.0, den = 0.0, lo = 0.0;
    for (double R : R_list) {
        num += integrate([&](double r) { return f(r) * weight(r); }, lo, R, 1e-10);
        den += integrate(weight, lo, R, 1e-10);
        lo = R;
        rep.avg.push_back(num / den);
    }

    const double R_max = R_list.back();
    rep.inf_f = std::numeric_limits<double>::infinity();
    const int scan = 100000;
    for (int i = 0; i <= scan; ++i) rep.inf_f = std::min(rep.inf_f, f(R_max * i / scan));

    rep.final_gap = std::abs(rep.avg.back() - rep.inf_f) / std::max(1.0, std::abs(rep.inf_f));
    rep.monotone_tail = true;
    const std::size_t half = rep.avg.size() / 2;
    for (std::size_t k = half + 1; k < rep.avg.size(); ++k) {
        const double prev = std::abs(rep.avg[k - 1] - rep.inf_f);
        const double cur = std::abs(rep.avg[k] - rep.inf_f);
        if (cur > prev + 1e-12 * std::max(1.0, prev)) rep.monotone_tail = false;
    }
    return rep;
}

nlohmann::json LapAverageReport::to_json() const {
    return {{"R", R},
            {"s", s},
            {"peak_abs", peak_abs},
            {"final_abs", final_abs},
            {"all_nonpositive", all_nonpositive}};
}

LapAverageReport weighted_laplacian_average(const std::vector<double>& f, const HeatEvolver& ev,
                                            const std::vector<double>& R_list) {
    const RadialMesh& mesh = ev.mesh();
    if (R_list.empty()) throw std::invalid_argument("weighted_laplacian_average: empty radius list");
    for (std::size_t k = 1; k < R_list.size(); ++k)
        if (!(R_list[k] > R_list[k - 1]))
            throw std::invalid_argument("weighted_laplacian_average: radii must increase");
    if (R_list.back() > mesh.r_hi())
        throw std::invalid_argument("weighted_laplacian_average: radius beyond the mesh");

    const std::vector<double> lf = ev.apply_L(f);
    LapAverageReport rep;
    rep.R = R_list;
    double integral = 0.0, vol = 0.0;
    std::size_t k = 0;
    for (int i = 0; i < mesh.n && k < R_list.size(); ++i) {
        while (k < R_list.size() && mesh.center[i] > R_list[k]) {
            rep.s.push_back(vol > 0.0 ? R_list[k] * R_list[k] * integral / vol : 0.0);
            ++k;
        }
        integral += mesh.cell_w[i] * lf[i];
        vol += mesh.cell_w[i];
    }
    while (k < R_list.size()) {
        rep.s.push_back(vol > 0.0 ? R_list[k] * R_list[k] * integral / vol : 0.0);
        ++k;
    }

    for (double v : rep.s) rep.peak_abs = std::max(rep.peak_abs, std::abs(v));
    rep.final_abs = std::abs(rep.s.back());
    rep.all_nonpositive = true;
    for (double v : rep.s)
        if (v > 1e-12 + 1e-9 * rep.peak_abs) rep.all_nonpositive = false;
    return rep;
}

nlohmann::json LhopitalReport::to_json() const {
    return {{"tail_liminf_hg", tail_liminf_hg},
            {"liminf_ratio", liminf_ratio},
            {"growth", growth},
            {"inconclusive", inconclusive},
            {"holds", holds}};
}

LhopitalReport lhopital_liminf(const std::vector<double>& h, const std::vector<double>& g,
                               double dt) {
    const std::size_t n = h.size();
    if (n != g.size() || n < 8) throw std::invalid_argument("lhopital_liminf: need matched samples, n >= 8");
    if (!(dt > 0.0)) throw std::invalid_argument("lhopital_liminf: dt must be positive");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(g[i] > 0.0)) throw std::invalid_argument("lhopital_liminf: g must be positive");
        if (h[i] < 0.0) throw std::invalid_argument("lhopital_liminf: h must be non-negative");
    }

    std::vector<double> cum_h(n, 0.0), cum_g(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        cum_h[i] = cum_h[i - 1] + 0.5 * dt * (h[i] + h[i - 1]);
        cum_g[i] = cum_g[i - 1] + 0.5 * dt * (g[i] + g[i - 1]);
    }

    LhopitalReport rep;
    const std::size_t half = n / 2;
    rep.growth = cum_g[n - 1] / cum_g[half];
    rep.inconclusive = rep.growth < 1.2;

    rep.tail_liminf_hg = std::numeric_limits<double>::infinity();
    rep.liminf_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = half; i < n; ++i) {
        rep.tail_liminf_hg = std::min(rep.tail_liminf_hg, h[i] / g[i]);
        rep.liminf_ratio = std::min(rep.liminf_ratio, cum_h[i] / cum_g[i]);
    }
    rep.holds = !rep.inconclusive &&
                rep.tail_liminf_hg <= rep.liminf_ratio + 1e-9 * std::max(1.0, std::abs(rep.liminf_ratio));
    return rep;
}

nlohmann::json AppendixConstants::to_json() const {
    return {{"c0", c0}, {"gamma", gamma}, {"c0_star", c0_star}, {"C1p", C1p}, {"C2p", C2p}};
}

namespace {

// Upper incomplete gamma(a, z) via the recursion gamma(a+1, z) = a gamma(a, z)
// + z^a e^{-z}, from gamma(1/2, z) = sqrt(pi) erfc(sqrt(z)) or gamma(1, z) = e^{-z}.
double gamma_upper(double a, double z) {
    double base;
    double k;
    if (std::abs(a - std::round(a)) < 1e-12) {
        base = std::exp(-z);
        k = 1.0;
    } else {
        base = std::sqrt(M_PI) * std::erfc(std::sqrt(z));
        k = 0.5;
    }
    while (k < a - 0.5) {
        base = k * base + std::exp(k * std::log(z) - z);
        k += 1.0;
    }
    return base;
}

}  // namespace

double gamma_of_c0(double c0, double C3p, double C4p, int m) {
    if (!(c0 > 0.0)) throw std::invalid_argument("gamma_of_c0: c0 must be positive");
    const double z = C4p * c0;
    const double a = 0.5 * m;
    return m * C3p * gamma_upper(a, z) / (2.0 * std::pow(C4p, a));
}

AppendixConstants appendix_constants(double C3p, double C4p, int m, double C_harnack) {
    if (!(C3p > 0.0) || !(C4p > 0.0) || !(C_harnack > 0.0))
        throw std::invalid_argument("appendix_constants: C3p, C4p, C_harnack must be positive");
    if (m < 2) throw std::invalid_argument("appendix_constants: dimension m must be >= 2");

    const double target = 0.75;
    double lo = 2.0 + 1e-9;
    const double g_lo = gamma_of_c0(lo, C3p, C4p, m);
    if (g_lo <= 0.5)
        throw std::domain_error("appendix_constants: gamma(2) <= 1/2 leaves no admissible c0 > 2");

    AppendixConstants out;
    if (g_lo <= target) {
        out.c0 = lo;
    } else {
        double hi = 4.0;
        while (gamma_of_c0(hi, C3p, C4p, m) > target) {
            hi *= 2.0;
            if (hi > 1e6)
                throw std::domain_error("appendix_constants: gamma stays above 3/4 up to the 1e6 cap");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (gamma_of_c0(mid, C3p, C4p, m) > target ? lo : hi) = mid;
        }
        out.c0 = 0.5 * (lo + hi);
    }
    out.gamma = gamma_of_c0(out.c0, C3p, C4p, m);
    out.c0_star = 2.0 * out.c0 / (out.c0 - 2.0);
    out.C1p = (1.0 - out.gamma) * std::exp(-(2.0 + 0.5 * out.c0 + out.c0_star) * C_harnack);
    out.C2p = 2.0 * C_harnack;
    return out;
}

}  // namespace mgl
