#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgl/comparison.hpp"
#include "mgl/counterexample.hpp"
#include "mgl/gradient_bound.hpp"
#include "mgl/heat.hpp"
#include "mgl/manifold.hpp"
#include "mgl/mse.hpp"
#include "mgl/report.hpp"
#include "mgl/suite.hpp"

namespace {

using mgl::attach_meta;
using mgl::make_report;
using mgl::write_report;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

// Applies config-file values to options the command line left untouched;
// flags always win.  Unknown config fields are usage errors.
class Merger {
  public:
    template <typename T>
    void bind(CLI::Option* opt, T* target) {
        entries_[opt->get_single_name()] = {opt, [target](const json& v) {
                                                *target = v.get<T>();
                                            }};
    }
    void bind_flag(CLI::Option* opt, bool* target) {
        entries_[opt->get_single_name()] = {opt, [target](const json& v) {
                                                *target = v.get<bool>();
                                            }};
    }
    void apply(const json& cfg) const {
        for (const auto& [key, value] : cfg.items()) {
            const auto it = entries_.find(key);
            if (it == entries_.end())
                throw std::runtime_error("unknown config field: " + key);
            if (it->second.opt->count() == 0) it->second.assign(value);
        }
    }

  private:
    struct Entry {
        CLI::Option* opt;
        std::function<void(const json&)> assign;
    };
    std::map<std::string, Entry> entries_;
};

struct Handler {
    CLI::App* leaf = nullptr;
    Merger merger;
    std::function<int()> run;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw std::runtime_error("config parse error at line " + std::to_string(line) +
                                 ", column " + std::to_string(col) + ": " + e.what());
    }
}

mgl::ModelManifold load_manifold(const std::string& path) {
    if (path.empty())
        return mgl::ModelManifold::rotsym(2, mgl::WarpFunction::euclidean());
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifold spec " + path);
    json spec;
    in >> spec;
    return mgl::ModelManifold::from_json(spec);
}

int emit(const std::string& command, const std::string& anchor, const json& inputs,
         const json& results, bool pass, double seconds, const std::string& report_path) {
    json rep = make_report(command, anchor, inputs, results, pass);
    attach_meta(rep, seconds);
    write_report(rep, report_path);
    return pass ? kExitPass : kExitCheckFailed;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ------------------------------------------------------------ solve-radial

void add_solve_radial(CLI::App& app, std::vector<std::unique_ptr<Handler>>& handlers) {
    auto h = std::make_unique<Handler>();
    auto* cmd = app.add_subcommand("solve-radial",
                                   "integrate the radial minimal graph with given flux");
    struct Args {
        std::string manifold, out, report = "-";
        double flux = 1.0, r0 = 1.05, r1 = 40.0;
        int n = 2048;
    };
    auto a = std::make_shared<Args>();
    h->merger.bind(cmd->add_option("--manifold", a->manifold, "manifold spec JSON"),
                   &a->manifold);
    h->merger.bind(cmd->add_option("--flux", a->flux, "first integral c"), &a->flux);
    h->merger.bind(cmd->add_option("--r0", a->r0, "inner radius"), &a->r0);
    h->merger.bind(cmd->add_option("--r1", a->r1, "outer radius"), &a->r1);
    h->merger.bind(cmd->add_option("--n", a->n, "grid points"), &a->n);
    h->merger.bind(cmd->add_option("--out", a->out, "graph CSV path"), &a->out);
    h->merger.bind(cmd->add_option("--report", a->report, "report path (- = stdout)"),
                   &a->report);
    h->leaf = cmd;
    h->run = [a]() {
        const auto t0 = std::chrono::steady_clock::now();
        const mgl::ModelManifold man = load_manifold(a->manifold);
        const mgl::RadialGraph g =
            mgl::radial_flux_solution(man, a->flux, a->r0, a->r1, a->n);
        const mgl::ResidualReport res = mgl::mse_residual(g);
        const mgl::JacobiReport jac = mgl::jacobi_residual(g);
        double drift = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double eta = man.eta().eval(g.r[i]).value;
            double flux = g.du[i] / g.W[i];
            for (int k = 1; k < man.dim(); ++k) flux *= eta;
            drift = std::max(drift, std::fabs(flux - a->flux) / std::fabs(a->flux));
        }
        if (!a->out.empty()) mgl::write_graph_csv(g, a->out);
        const bool pass = drift < 1e-9 && jac.minimal;
        const json inputs = {{"manifold", man.to_json()}, {"flux", a->flux},
                             {"r0", a->r0},               {"r1", a->r1},
                             {"n", a->n}};
        const json results = {{"flux_drift_rel", drift},
                              {"mse_residual_max", res.max_abs},
                              {"jacobi_residual_max", jac.max_abs},
                              {"W_inner", g.W.front()},
                              {"W_outer", g.W.back()},
                              {"csv", a->out}};
        return emit("solve-radial", "minimal-surface-equation", inputs, results, pass,
                    elapsed(t0), a->report);
    };
    handlers.push_back(std::move(h));
}

// ------------------------------------------------------------- compare-ode

void add_compare_ode(CLI::App& app, std::vector<std::unique_ptr<Handler>>& handlers) {
    auto h = std::make_unique<Handler>();
    auto* cmd =
        app.add_subcommand("compare-ode", "solve h'' = H h and check closed forms");
    struct Args {
        std::string H = "const-kappa", csv, report = "-";
        double kappa = 1.0, t_max = 5.0;
        int n = 4096, m = 3;
    };
    auto a = std::make_shared<Args>();
    h->merger.bind(cmd->add_option("--H", a->H, "zero | const-kappa | decay-kappa"),
                   &a->H);
    h->merger.bind(cmd->add_option("--kappa", a->kappa, "curvature scale"), &a->kappa);
    h->merger.bind(cmd->add_option("--t-max", a->t_max, "integration horizon"),
                   &a->t_max);
    h->merger.bind(cmd->add_option("--n", a->n, "grid points"), &a->n);
    h->merger.bind(cmd->add_option("--m", a->m, "base dimension for the bound"), &a->m);
    h->merger.bind(cmd->add_option("--csv", a->csv, "profile CSV path"), &a->csv);
    h->merger.bind(cmd->add_option("--report", a->report, "report path (- = stdout)"),
                   &a->report);
    h->leaf = cmd;
    h->run = [a]() {
        const auto t0 = std::chrono::steady_clock::now();
        mgl::HSpec H = mgl::HSpec::zero();
        if (a->H == "const-kappa")
            H = mgl::HSpec::constant(a->kappa);
        else if (a->H == "decay-kappa")
            H = mgl::HSpec::decay(a->kappa);
        else if (a->H != "zero")
            throw std::runtime_error("unknown H form: " + a->H);
        const mgl::ComparisonProfile prof = mgl::solve_h(H, a->t_max, a->n);
        if (!a->csv.empty()) prof.write_csv(a->csv);

        double closed_rel = 0.0;
        bool has_closed = a->H != "decay-kappa";
        for (std::size_t i = 0; i < prof.t.size() && has_closed; ++i) {
            const double t = prof.t[i];
            const double exact =
                a->H == "zero" ? t : std::sinh(a->kappa * t) / a->kappa;
            closed_rel = std::max(closed_rel, std::fabs(prof.h[i] - exact) / exact);
        }
        const double bound_mid =
            mgl::graph_laplacian_bound(a->m, prof, 0.5 * a->t_max);
        const double bound_closed =
            mgl::laplacian_bound_closed_form(a->m, H, 0.5 * a->t_max);
        double hh_scale = 1.0;
        for (std::size_t i = 0; i < prof.t.size(); ++i)
            hh_scale = std::max(hh_scale, std::fabs(H(prof.t[i]) * prof.h[i]));
        const double rel_residual = prof.max_residual() / hh_scale;
        const bool pass = rel_residual < 1e-6 && (!has_closed || closed_rel < 1e-8);
        const json inputs = {{"H", H.to_json()},
                             {"t_max", a->t_max},
                             {"n", a->n},
                             {"m", a->m}};
        const json results = {{"ode_residual_max", prof.max_residual()},
                              {"ode_residual_rel", rel_residual},
                              {"closed_form_rel_err", has_closed ? closed_rel : -1.0},
                              {"bound_at_midpoint", bound_mid},
                              {"bound_closed_form_at_midpoint", bound_closed},
                              {"csv", a->csv}};
        return emit("compare-ode", "laplacian-comparison", inputs, results, pass,
                    elapsed(t0), a->report);
    };
    handlers.push_back(std::move(h));
}

// ---------------------------------------------------------- gradient-bound

struct GradientArgs {
    int m = 3;
    double kappa = 0.0, kbar = 0.0, R = 10.0, R1 = 5.0, gamma_star = 1.0;
    // eps/tau/q/a0/L default to the canonical choice for the default
    // geometry (m=3, kbar=1, R=10, delta=1/2), so a bare `eval` is valid.
    double eps = 0.5, tau = 0.5, q = 0.17677669529663687,
           a0 = 11.313708498984761, L = 204.8;
    double delta = 0.5, kbar0 = 1.0;
    double r = 0.0, gamma = 0.0;
    std::uint64_t seed = 0;
    int budget = 2000;
    std::string graph, manifold, certificate, report = "-";
    double center = 25.0;
};

mgl::BoundInputs bound_inputs(const GradientArgs& a) {
    mgl::BoundInputs in;
    in.m = a.m;
    in.kappa = a.kappa;
    in.kbar = a.kbar;
    in.R = a.R;
    in.R1 = a.R1;
    in.gamma_star = a.gamma_star;
    in.validate();
    return in;
}

void add_gradient_bound(CLI::App& app, std::vector<std::unique_ptr<Handler>>& handlers) {
    auto* gb = app.add_subcommand("gradient-bound",
                                  "interior slope bound: evaluate, optimize, verify");
    gb->require_subcommand(1);
    auto a = std::make_shared<GradientArgs>();

    auto bind_inputs = [&](CLI::App* cmd, Handler* h) {
        h->merger.bind(cmd->add_option("--m", a->m, "base dimension"), &a->m);
        h->merger.bind(cmd->add_option("--kappa", a->kappa, "Ricci lower scale"),
                       &a->kappa);
        h->merger.bind(cmd->add_option("--kbar", a->kbar, "radial decay scale"),
                       &a->kbar);
        h->merger.bind(cmd->add_option("--R", a->R, "outer ball radius"), &a->R);
        h->merger.bind(cmd->add_option("--R1", a->R1, "inner ball radius"), &a->R1);
        h->merger.bind(cmd->add_option("--gamma-star", a->gamma_star,
                                       "normalized oscillation bound"),
                       &a->gamma_star);
    };
    auto bind_point = [&](CLI::App* cmd, Handler* h) {
        h->merger.bind(cmd->add_option("--r", a->r, "evaluation distance"), &a->r);
        h->merger.bind(cmd->add_option("--gamma", a->gamma, "evaluation oscillation"),
                       &a->gamma);
    };
    auto bind_report = [&](CLI::App* cmd, Handler* h) {
        h->merger.bind(cmd->add_option("--report", a->report, "report path (- = stdout)"),
                       &a->report);
    };

    {
        auto h = std::make_unique<Handler>();
        auto* cmd = gb->add_subcommand("eval", "bound at explicit cutoff parameters");
        bind_inputs(cmd, h.get());
        bind_point(cmd, h.get());
        h->merger.bind(cmd->add_option("--eps", a->eps, "barrier slack"), &a->eps);
        h->merger.bind(cmd->add_option("--tau", a->tau, "split weight"), &a->tau);
        h->merger.bind(cmd->add_option("--q", a->q, "oscillation slope"), &a->q);
        h->merger.bind(cmd->add_option("--a0", a->a0, "cutoff floor scale"), &a->a0);
        h->merger.bind(cmd->add_option("--L", a->L, "cutoff exponent scale"), &a->L);
        bind_report(cmd, h.get());
        h->leaf = cmd;
        h->run = [a]() {
            const auto t0 = std::chrono::steady_clock::now();
            const mgl::BoundInputs in = bound_inputs(*a);
            mgl::KorevaarParams p;
            p.eps = a->eps;
            p.tau = a->tau;
            p.q = a->q;
            p.a0 = a->a0;
            p.L = a->L;
            const mgl::ValidityReport v = mgl::validate_params(in, p);
            json results = {{"validity", v.to_json()}};
            bool pass = v.pass;
            if (v.pass) {
                const mgl::DerivedConstants dc = mgl::derived_constants(in, p);
                const mgl::BoundValue b = mgl::korevaar_bound(in, p, a->r, a->gamma);
                results["a1"] = dc.a1;
                results["a2"] = dc.a2;
                results["a3"] = dc.a3;
                results["log_bound"] = b.log_value;
                results["bound"] = b.value;
            }
            const json inputs = {{"inputs", in.to_json()},
                                 {"params", p.to_json()},
                                 {"r", a->r},
                                 {"gamma", a->gamma}};
            return emit("gradient-bound eval", "korevaar-gradient-bound", inputs,
                        results, pass, elapsed(t0), a->report);
        };
        handlers.push_back(std::move(h));
    }
    {
        auto h = std::make_unique<Handler>();
        auto* cmd = gb->add_subcommand("canonical", "delta-based canonical parameters");
        h->merger.bind(cmd->add_option("--delta", a->delta, "R1/R ratio in [1/2,1)"),
                       &a->delta);
        h->merger.bind(cmd->add_option("--gamma-star", a->gamma_star,
                                       "normalized oscillation bound"),
                       &a->gamma_star);
        h->merger.bind(cmd->add_option("--m", a->m, "base dimension"), &a->m);
        h->merger.bind(cmd->add_option("--kbar0", a->kbar0, "max(1, kbar)"), &a->kbar0);
        h->merger.bind(cmd->add_option("--R", a->R, "outer ball radius"), &a->R);
        bind_report(cmd, h.get());
        h->leaf = cmd;
        h->run = [a]() {
            const auto t0 = std::chrono::steady_clock::now();
            const mgl::KorevaarParams p =
                mgl::canonical_params(a->delta, a->gamma_star, a->m, a->kbar0, a->R);
            mgl::BoundInputs in;
            in.m = a->m;
            in.kappa = 0.0;
            in.kbar = a->kbar0;
            in.R = a->R;
            in.R1 = a->delta * a->R;
            in.gamma_star = a->gamma_star;
            const mgl::ValidityReport v = mgl::validate_params(in, p);
            const mgl::DerivedConstants dc = mgl::derived_constants(in, p);
            const mgl::BoundValue cor =
                mgl::corollary_bound(a->delta, a->gamma_star, a->m, a->kbar0);
            const double C = 2.0 / (a->delta * (1.0 - a->delta));
            const double K = 16.0 * std::sqrt(2.0) * (a->m + 1) * a->kbar0 /
                             (a->delta * (1.0 - a->delta));
            const json inputs = {{"delta", a->delta},
                                 {"gamma_star", a->gamma_star},
                                 {"m", a->m},
                                 {"kbar0", a->kbar0},
                                 {"R", a->R}};
            const json results = {{"params", p.to_json()},
                                  {"validity", v.to_json()},
                                  {"a1", dc.a1},
                                  {"a2", dc.a2},
                                  {"a3", dc.a3},
                                  {"C", C},
                                  {"delta_exponential", K},
                                  {"log_corollary_bound", cor.log_value},
                                  {"corollary_bound", cor.value}};
            return emit("gradient-bound canonical", "korevaar-gradient-bound", inputs,
                        results, v.pass, elapsed(t0), a->report);
        };
        handlers.push_back(std::move(h));
    }
    {
        auto h = std::make_unique<Handler>();
        auto* cmd = gb->add_subcommand("optimize", "direct search over cutoff parameters");
        bind_inputs(cmd, h.get());
        bind_point(cmd, h.get());
        h->merger.bind(cmd->add_option("--seed", a->seed, "restart seed"), &a->seed);
        h->merger.bind(cmd->add_option("--budget", a->budget, "objective evaluations"),
                       &a->budget);
        bind_report(cmd, h.get());
        h->leaf = cmd;
        h->run = [a]() {
            const auto t0 = std::chrono::steady_clock::now();
            const mgl::BoundInputs in = bound_inputs(*a);
            const mgl::OptimizeResult opt =
                mgl::optimize_params(in, a->r, a->gamma, a->seed, a->budget);
            const json inputs = {{"inputs", in.to_json()},
                                 {"r", a->r},
                                 {"gamma", a->gamma},
                                 {"seed", a->seed},
                                 {"budget", a->budget}};
            return emit("gradient-bound optimize", "korevaar-gradient-bound", inputs,
                        opt.to_json(), opt.feasible, elapsed(t0), a->report);
        };
        handlers.push_back(std::move(h));
    }
    {
        auto h = std::make_unique<Handler>();
        auto* cmd = gb->add_subcommand(
            "verify", "check W <= bound on a ball section of a solved graph");
        h->merger.bind(cmd->add_option("--graph", a->graph, "graph CSV from solve-radial"),
                       &a->graph);
        h->merger.bind(cmd->add_option("--manifold", a->manifold, "manifold spec JSON"),
                       &a->manifold);
        h->merger.bind(cmd->add_option("--certificate", a->certificate,
                                       "curvature certificate JSON"),
                       &a->certificate);
        h->merger.bind(cmd->add_option("--center", a->center, "ball center radius"),
                       &a->center);
        bind_inputs(cmd, h.get());
        bind_report(cmd, h.get());
        h->leaf = cmd;
        h->run = [a]() {
            const auto t0 = std::chrono::steady_clock::now();
            if (a->graph.empty()) throw std::runtime_error("--graph is required");
            const mgl::ModelManifold man = load_manifold(a->manifold);
            const mgl::RadialGraph g = mgl::read_graph_csv(man, a->graph);
            std::string assumption = "kappa and kbar supplied by caller";
            double kappa = a->kappa, kbar = a->kbar;
            if (!a->certificate.empty()) {
                std::ifstream in(a->certificate);
                if (!in)
                    throw std::runtime_error("cannot open certificate " + a->certificate);
                json cj;
                in >> cj;
                if (cj.at("schema").get<std::string>() != "kw-certificate/1")
                    throw std::runtime_error("unsupported certificate schema");
                bool claims_ok = true;
                for (const auto& c : cj.at("claims"))
                    if (!c.at("indeterminate").get<bool>())
                        claims_ok = claims_ok && c.at("pass").get<bool>();
                if (!claims_ok)
                    throw std::runtime_error("certificate claims failed; cannot justify kappa = 0");
                kappa = 0.0;
                kbar = cj.at("kappa_decay").get<double>() * std::sqrt(1.0 + a->R * a->R);
                assumption =
                    "certificate justifies kappa = 0; kbar re-centered as "
                    "certified * sqrt(1+R^2)";
            }
            const mgl::SolutionSection sec =
                mgl::offset_ball_section(g, a->center, a->R, a->R1);
            mgl::BoundInputs in;
            in.m = man.dim();
            in.kappa = kappa;
            in.kbar = kbar;
            in.R = a->R;
            in.R1 = a->R1;
            in.gamma_star = sec.gamma_star;
            const mgl::BoundCheckReport rep =
                mgl::verify_solution_bound(sec, in, assumption);
            const json inputs = {{"graph", a->graph},
                                 {"manifold", man.to_json()},
                                 {"center", a->center},
                                 {"R", a->R},
                                 {"R1", a->R1},
                                 {"inputs", in.to_json()}};
            return emit("gradient-bound verify", "korevaar-gradient-bound", inputs,
                        rep.to_json(), rep.pass, elapsed(t0), a->report);
        };
        handlers.push_back(std::move(h));
    }
}

// -------------------------------------------------------------------- heat

void add_heat(CLI::App& app, std::vector<std::unique_ptr<Handler>>& handlers) {
    auto* heat = app.add_subcommand("heat", "conservative diffusion checks");
    heat->require_subcommand(1);

    {
        auto h = std::make_unique<Handler>();
        auto* cmd = heat->add_subcommand("kernel",
                                         "evolve a pole bump and sandwich the kernel");
        struct Args {
            double r_max = 20.0, T = 1.0, dt = 5e-4, d_max = 3.0;
            int n = 2048, m = 3, stride = 4;
            double c1 = 0.05, c2 = 0.30, c3 = 0.20, c4 = 0.20, c5 = 1.0, c6 = 1.0;
            std::string csv, report = "-";
        };
        auto a = std::make_shared<Args>();
        h->merger.bind(cmd->add_option("--m", a->m, "dimension"), &a->m);
        h->merger.bind(cmd->add_option("--r-max", a->r_max, "mesh radius"), &a->r_max);
        h->merger.bind(cmd->add_option("--n", a->n, "cells"), &a->n);
        h->merger.bind(cmd->add_option("--T", a->T, "final time"), &a->T);
        h->merger.bind(cmd->add_option("--dt", a->dt, "time step"), &a->dt);
        h->merger.bind(cmd->add_option("--d-max", a->d_max, "sandwich distance cap"),
                       &a->d_max);
        h->merger.bind(cmd->add_option("--stride", a->stride, "sampling stride"),
                       &a->stride);
        h->merger.bind(cmd->add_option("--c1", a->c1, "lower prefactor"), &a->c1);
        h->merger.bind(cmd->add_option("--c2", a->c2, "lower exponent"), &a->c2);
        h->merger.bind(cmd->add_option("--c3", a->c3, "upper prefactor"), &a->c3);
        h->merger.bind(cmd->add_option("--c4", a->c4, "upper exponent"), &a->c4);
        h->merger.bind(cmd->add_option("--c5", a->c5, "auxiliary constant"), &a->c5);
        h->merger.bind(cmd->add_option("--c6", a->c6, "auxiliary constant"), &a->c6);
        h->merger.bind(cmd->add_option("--csv", a->csv, "kernel CSV path"), &a->csv);
        h->merger.bind(cmd->add_option("--report", a->report, "report path"), &a->report);
        h->leaf = cmd;
        h->run = [a]() {
            const auto t0 = std::chrono::steady_clock::now();
            const mgl::ModelManifold man =
                mgl::ModelManifold::rotsym(a->m, mgl::WarpFunction::euclidean());
            const mgl::RadialMesh mesh = mgl::RadialMesh::pole(man, a->r_max, a->n);
            mgl::HeatEvolver ev(mesh, mgl::EllipticCoefficient::identity(mesh),
                                mgl::WallCondition::ZeroFlux,
                                mgl::WallCondition::ZeroFlux);
            ev.set_state(mgl::delta_state(mesh), 0.0);
            ev.run(a->T, a->dt, true);
            const mgl::MassReport mass = mgl::mass_conservation_check(ev, 1e-8);
            mgl::GaussianConstants gc;
            gc.c1 = a->c1;
            gc.c2 = a->c2;
            gc.c3 = a->c3;
            gc.c4 = a->c4;
            gc.c5 = a->c5;
            gc.c6 = a->c6;
            gc.validate();
            const auto samples =
                mgl::sample_kernel(mesh, ev.state(), a->T, a->d_max, a->stride);
            const mgl::SandwichReport sw = mgl::gaussian_sandwich_check(samples, gc);
            double closed_rel = -1.0;
            if (a->m == 3) {
                closed_rel = 0.0;
                for (int i = 0; i < mesh.n && mesh.center[i] <= a->d_max; ++i) {
                    const double r = mesh.center[i];
                    const double exact = std::pow(4.0 * M_PI * a->T, -1.5) *
                                         std::exp(-r * r / (4.0 * a->T));
                    closed_rel =
                        std::max(closed_rel, std::fabs(ev.state()[i] - exact) / exact);
                }
            }
            if (!a->csv.empty()) {
                std::ofstream out(a->csv);
                if (!out) throw std::runtime_error("cannot open " + a->csv);
                out << "r,u\n";
                char buf[64];
                for (int i = 0; i < mesh.n; ++i) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", mesh.center[i],
                                  ev.state()[i]);
                    out << buf;
                }
            }
            const bool pass = mass.pass && !mass.inconclusive && sw.all_pass &&
                              (a->m != 3 || closed_rel < 1e-3);
            const json inputs = {{"m", a->m},       {"r_max", a->r_max}, {"n", a->n},
                                 {"T", a->T},       {"dt", a->dt},       {"d_max", a->d_max},
                                 {"constants", gc.to_json()}};
            const json results = {{"mass", mass.to_json()},
                                  {"sandwich", sw.to_json()},
                                  {"closed_form_rel_err", closed_rel},
                                  {"csv", a->csv}};
            return emit("heat kernel", "heat-kernel-bounds", inputs, results, pass,
                        elapsed(t0), a->report);
        };
        handlers.push_back(std::move(h));
    }
    {
        auto h = std::make_unique<Handler>();
        auto* cmd = heat->add_subcommand(
            "meanvalue", "ball averages of a + b/(1+r) approach the infimum");
        struct Args {
            double offset = 2.0, coef = 1.0, R_max = 100.0, gap_tol = 0.02;
            int m = 3, count = 7;
            std::string report = "-";
        };
        auto a = std::make_shared<Args>();
        h->merger.bind(cmd->add_option("--offset", a->offset, "constant part"),
                       &a->offset);
        h->merger.bind(cmd->add_option("--coef", a->coef, "decaying part scale"),
                       &a->coef);
        h->merger.bind(cmd->add_option("--m", a->m, "dimension"), &a->m);
        h->merger.bind(cmd->add_option("--R-max", a->R_max, "largest ball radius"),
                       &a->R_max);
        h->merger.bind(cmd->add_option("--count", a->count, "number of radii"),
                       &a->count);
        h->merger.bind(cmd->add_option("--gap-tol", a->gap_tol, "final gap tolerance"),
                       &a->gap_tol);
        h->merger.bind(cmd->add_option("--report", a->report, "report path"), &a->report);
        h->leaf = cmd;
        h->run = [a]() {
            const auto t0 = std::chrono::steady_clock::now();
            const mgl::ModelManifold man =
                mgl::ModelManifold::rotsym(a->m, mgl::WarpFunction::euclidean());
            std::vector<double> radii(a->count);
            for (int i = 0; i < a->count; ++i)
                radii[i] = a->R_max * std::pow(2.0, i - a->count + 1);
            const double off = a->offset, coef = a->coef;
            const mgl::BallAverageReport rep = mgl::ball_average_limit(
                [off, coef](double r) { return off + coef / (1.0 + r); }, man, radii);
            const bool pass = rep.final_gap < a->gap_tol && rep.monotone_tail;
            const json inputs = {{"offset", a->offset},
                                 {"coef", a->coef},
                                 {"m", a->m},
                                 {"R_max", a->R_max},
                                 {"gap_tol", a->gap_tol}};
            return emit("heat meanvalue", "mean-value-limit", inputs, rep.to_json(),
                        pass, elapsed(t0), a->report);
        };
        handlers.push_back(std::move(h));
    }
    {
        auto h = std::make_unique<Handler>();
        auto* cmd = heat->add_subcommand(
            "lap-average", "weighted Laplacian averages of a shipped supersolution");
        struct Args {
            std::string preset = "flat", report = "-";
            int n = 2048;
        };
        auto a = std::make_shared<Args>();
        h->merger.bind(cmd->add_option("--preset", a->preset, "flat | flux-graph"),
                       &a->preset);
        h->merger.bind(cmd->add_option("--n", a->n, "cells"), &a->n);
        h->merger.bind(cmd->add_option("--report", a->report, "report path"), &a->report);
        h->leaf = cmd;
        h->run = [a]() {
            const auto t0 = std::chrono::steady_clock::now();
            const mgl::ModelManifold man =
                mgl::ModelManifold::rotsym(3, mgl::WarpFunction::euclidean());
            mgl::LapAverageReport rep;
            if (a->preset == "flat") {
                const mgl::RadialMesh mesh = mgl::RadialMesh::pole(man, 60.0, a->n);
                mgl::HeatEvolver ev(mesh, mgl::EllipticCoefficient::identity(mesh),
                                    mgl::WallCondition::ZeroFlux,
                                    mgl::WallCondition::ZeroFlux);
                std::vector<double> f(mesh.n);
                for (int i = 0; i < mesh.n; ++i)
                    f[i] = 1.0 / std::sqrt(1.0 + mesh.center[i] * mesh.center[i]);
                rep = mgl::weighted_laplacian_average(
                    f, ev, {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 50.0});
            } else if (a->preset == "flux-graph") {
                const mgl::RadialGraph g =
                    mgl::radial_flux_solution(man, 1.0, 1.3, 90.0, 4096);
                const mgl::RadialMesh mesh =
                    mgl::RadialMesh::annulus(man, 1.5, 80.0, a->n);
                mgl::HeatEvolver ev(mesh, mgl::EllipticCoefficient::from_graph(mesh, g),
                                    mgl::WallCondition::FixedValue,
                                    mgl::WallCondition::FixedValue);
                std::vector<double> f(mesh.n);
                for (int i = 0; i < mesh.n; ++i) {
                    const double r2 = mesh.center[i] * mesh.center[i];
                    f[i] = std::sqrt(r2 * r2 - 1.0) / r2;
                }
                rep = mgl::weighted_laplacian_average(
                    f, ev,
                    {2.0, 2.4, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 78.0});
            } else {
                throw std::runtime_error("unknown preset: " + a->preset);
            }
            const bool pass =
                rep.all_nonpositive && rep.final_abs < 0.1 * rep.peak_abs;
            const json inputs = {{"preset", a->preset}, {"n", a->n}};
            return emit("heat lap-average", "weighted-laplacian-average", inputs,
                        rep.to_json(), pass, elapsed(t0), a->report);
        };
        handlers.push_back(std::move(h));
    }
    {
        auto h = std::make_unique<Handler>();
        auto* cmd = heat->add_subcommand("appendix-constants",
                                         "tail-mass constants for the kernel estimate");
        struct Args {
            double C3p = 1.0, C4p = 0.1, C_harnack = 2.0;
            int m = 2;
            std::string report = "-";
        };
        auto a = std::make_shared<Args>();
        h->merger.bind(cmd->add_option("--C3p", a->C3p, "upper prefactor"), &a->C3p);
        h->merger.bind(cmd->add_option("--C4p", a->C4p, "upper exponent"), &a->C4p);
        h->merger.bind(cmd->add_option("--m", a->m, "dimension"), &a->m);
        h->merger.bind(cmd->add_option("--C-harnack", a->C_harnack,
                                       "Harnack constant (input)"),
                       &a->C_harnack);
        h->merger.bind(cmd->add_option("--report", a->report, "report path"), &a->report);
        h->leaf = cmd;
        h->run = [a]() {
            const auto t0 = std::chrono::steady_clock::now();
            const mgl::AppendixConstants ac =
                mgl::appendix_constants(a->C3p, a->C4p, a->m, a->C_harnack);
            const bool pass = ac.c0 > 2.0 && ac.gamma > 0.0 && ac.gamma < 1.0 &&
                              ac.C1p > 0.0 && ac.C1p < 1.0 - ac.gamma;
            const json inputs = {{"C3p", a->C3p},
                                 {"C4p", a->C4p},
                                 {"m", a->m},
                                 {"C_harnack", a->C_harnack}};
            return emit("heat appendix-constants", "harnack-tail-constants", inputs,
                        ac.to_json(), pass, elapsed(t0), a->report);
        };
        handlers.push_back(std::move(h));
    }
}

// ---------------------------------------------- certify / search / suite

void add_certify(CLI::App& app, std::vector<std::unique_ptr<Handler>>& handlers) {
    auto h = std::make_unique<Handler>();
    auto* cmd = app.add_subcommand("certify-counterexample",
                                   "grid certificate for the doubly warped example");
    struct Args {
        int m = 4, n = 8192;
        double alpha = 0.4, beta = 0.4, b = 100.0, c = 100.0, r_max = 200.0;
        std::string out, report = "-";
    };
    auto a = std::make_shared<Args>();
    h->merger.bind(cmd->add_option("--m", a->m, "dimension"), &a->m);
    h->merger.bind(cmd->add_option("--alpha", a->alpha, "eta tail exponent"), &a->alpha);
    h->merger.bind(cmd->add_option("--beta", a->beta, "f exponent parameter"), &a->beta);
    h->merger.bind(cmd->add_option("--b", a->b, "f shift"), &a->b);
    h->merger.bind(cmd->add_option("--c", a->c, "f floor"), &a->c);
    h->merger.bind(cmd->add_option("--r-max", a->r_max, "grid end"), &a->r_max);
    h->merger.bind(cmd->add_option("--n", a->n, "grid points"), &a->n);
    h->merger.bind(cmd->add_option("--out", a->out, "certificate JSON path"), &a->out);
    h->merger.bind(cmd->add_option("--report", a->report, "report path"), &a->report);
    h->leaf = cmd;
    h->run = [a]() {
        const auto t0 = std::chrono::steady_clock::now();
        mgl::KWSpec spec;
        spec.m = a->m;
        spec.alpha = a->alpha;
        spec.beta = a->beta;
        spec.b = a->b;
        spec.c = a->c;
        const mgl::Certificate cert = mgl::certify(spec, a->r_max, a->n);
        if (!a->out.empty()) write_report(cert.to_json(), a->out);
        const bool pass = cert.claims_pass() && cert.t_residual_max < 1e-10;
        const json inputs = {{"spec", spec.to_json()},
                             {"r_max", a->r_max},
                             {"n", a->n}};
        return emit("certify-counterexample", "kw-certificate", inputs, cert.to_json(),
                    pass, elapsed(t0), a->report);
    };
    handlers.push_back(std::move(h));
}

void add_search(CLI::App& app, std::vector<std::unique_ptr<Handler>>& handlers) {
    auto h = std::make_unique<Handler>();
    auto* cmd = app.add_subcommand("search-bc",
                                   "grid search of (b, c) maximizing the Ricci margin");
    struct Args {
        int m = 4, budget = 49;
        double alpha = 0.4, beta = 0.4;
        std::string out, report = "-";
    };
    auto a = std::make_shared<Args>();
    h->merger.bind(cmd->add_option("--m", a->m, "dimension"), &a->m);
    h->merger.bind(cmd->add_option("--alpha", a->alpha, "eta tail exponent"), &a->alpha);
    h->merger.bind(cmd->add_option("--beta", a->beta, "f exponent parameter"), &a->beta);
    h->merger.bind(cmd->add_option("--budget", a->budget, "coarse certifications"),
                   &a->budget);
    h->merger.bind(cmd->add_option("--out", a->out, "search result JSON path"), &a->out);
    h->merger.bind(cmd->add_option("--report", a->report, "report path"), &a->report);
    h->leaf = cmd;
    h->run = [a]() {
        const auto t0 = std::chrono::steady_clock::now();
        const mgl::SearchResult sr = mgl::search_bc(a->m, a->alpha, a->beta, a->budget);
        if (!a->out.empty()) write_report(sr.to_json(), a->out);
        const json inputs = {{"m", a->m},
                             {"alpha", a->alpha},
                             {"beta", a->beta},
                             {"budget", a->budget}};
        const json results = {{"found", sr.found},
                              {"b", sr.b},
                              {"c", sr.c},
                              {"objective", sr.objective}};
        return emit("search-bc", "kw-certificate", inputs, results, sr.found,
                    elapsed(t0), a->report);
    };
    handlers.push_back(std::move(h));
}

void add_suite(CLI::App& app, std::vector<std::unique_ptr<Handler>>& handlers) {
    auto h = std::make_unique<Handler>();
    auto* cmd = app.add_subcommand("suite", "run the full acceptance battery");
    struct Args {
        bool quick = false;
        int workers = 1;
        std::string report = "-";
    };
    auto a = std::make_shared<Args>();
    h->merger.bind_flag(cmd->add_flag("--quick", a->quick, "trim refinement sweeps"),
                        &a->quick);
    h->merger.bind(cmd->add_option("--workers", a->workers, "concurrent checks"),
                   &a->workers);
    h->merger.bind(cmd->add_option("--report", a->report, "report path"), &a->report);
    h->leaf = cmd;
    h->run = [a]() {
        const mgl::SuiteResult res = mgl::run_suite(a->quick, a->workers);
        const json inputs = {{"quick", a->quick}, {"workers", a->workers}};
        json rep = make_report("suite", "acceptance-battery", inputs, res.to_json(),
                               res.pass);
        rep["meta"] = res.timings();
        write_report(rep, a->report);
        return res.pass ? kExitPass : kExitCheckFailed;
    };
    handlers.push_back(std::move(h));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for minimal graphs over models with "
                 "nonnegative Ricci curvature"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config merged with flags (flags win)");

    std::vector<std::unique_ptr<Handler>> handlers;
    add_solve_radial(app, handlers);
    add_compare_ode(app, handlers);
    add_gradient_bound(app, handlers);
    add_heat(app, handlers);
    add_certify(app, handlers);
    add_search(app, handlers);
    add_suite(app, handlers);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        json cfg = json::object();
        if (!config_path.empty()) cfg = load_config(config_path);
        for (const auto& h : handlers) {
            if (h->leaf->parsed()) {
                h->merger.apply(cfg);
                return h->run();
            }
        }
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
