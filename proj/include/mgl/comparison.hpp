#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mgl/hermite.hpp"
#include "mgl/mse.hpp"

namespace mgl {

// Radial curvature decay profile H(t) >= 0 appearing in the hypothesis
// Ric^(l)(grad r) >= -H(r). Named forms carry closed-form comparison bounds.
class HSpec {
  public:
    static HSpec zero();
    static HSpec constant(double kappa);  // H = kappa^2
    static HSpec decay(double kappa);     // H = kappa^2 / (1 + t^2)
    static HSpec custom(std::function<double(double)> h, std::string name);

    double operator()(double t) const { return h_(t); }
    const std::string& name() const { return name_; }
    double kappa() const { return kappa_; }
    bool has_closed_form() const;

    static HSpec from_json(const json& spec);
    json to_json() const;

  private:
    std::function<double(double)> h_;
    std::string name_;
    double kappa_ = 0.0;
};

// Solution profile of h'' = H h with pole data h ~ t near t = 0, sampled on
// a uniform grid starting at t0 = t_max/n. Between nodes the profile
// interpolates with cubic Hermite pieces built from (h, h').
struct ComparisonProfile {
    HSpec H;
    std::vector<double> t, h, dh;

    double value(double x) const;
    double deriv(double x) const;
    // Max of |second difference of h - H h| over interior nodes.
    double max_residual() const;
    void write_csv(const std::string& path) const;

  private:
    mutable CubicHermite interp_;
    mutable bool interp_ready_ = false;
    void ensure_interp() const;
};

// Fourth-order integration of h'' = H h from series-corrected pole data at
// t0 = t_max/n. Requires H >= 0 at every sample.
ComparisonProfile solve_h(const HSpec& H, double t_max, int n);

// Upper bound m h'(r)/h(r) for the graph Laplacian of the distance,
// evaluated from the solved profile.
double graph_laplacian_bound(int m, const ComparisonProfile& p, double r);

// Closed forms for the named profiles: m/r, m kappa coth(kappa r), and
// m (1 + sqrt(1 + 4 kappa^2)) / (2 r).
double laplacian_bound_closed_form(int m, const HSpec& H, double r);

// Barrier psi = sqrt(a^2 + r^2): |D psi| < 1 and
// Delta_g psi <= (m+1) max(1, kappa_bar) / a on graphs over bases with
// Ric^(l)(grad r) >= -kappa_bar^2 / (1 + r^2).
struct PsiBarrier {
    double a;
    double kappa_bar;
    int m;
    double laplacian_bound;
};

PsiBarrier psi_barrier(double a, double kappa_bar, int m);

struct ComparisonCheck {
    bool pass = false;
    double worst_margin = 0.0;  // min over grid of bound - Delta_g r
    double worst_r = 0.0;
};

// Checks Delta_g r = (m-1) eta'/eta <= m h'/h at every graph grid point.
ComparisonCheck verify_graph_comparison(const ModelManifold& man,
                                        const RadialGraph& g,
                                        const ComparisonProfile& p);

}  // namespace mgl
