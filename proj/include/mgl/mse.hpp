#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mgl/manifold.hpp"

namespace mgl {

// Radial graph u(r) on a rotationally symmetric base, sampled on a uniform
// grid. W = sqrt(1 + u'^2); for flux solutions eta^(m-1) u'/W == flux holds
// identically.
struct RadialGraph {
    ModelManifold man;
    std::vector<double> r, u, du, W;
    double flux = std::numeric_limits<double>::quiet_NaN();

    double dr() const;
    std::size_t size() const { return r.size(); }
};

// Quadrature solution of the radial minimal surface equation with first
// integral eta^(m-1) u'/W = c:  u'(r) = c / sqrt(eta^(2m-2) - c^2).
// Requires eta(r)^(m-1) > |c| on [r0, r1].
RadialGraph radial_flux_solution(const ModelManifold& man, double c, double r0,
                                 double r1, int n);

struct ResidualReport {
    double max_abs = 0.0;
    double at_r = 0.0;
    std::vector<double> values;  // aligned with interior grid points
};

// Discrete divergence residual |d/dr(eta^(m-1) u'/W)| / eta^(m-1) using
// staggered midpoint fluxes built from the u samples.
ResidualReport mse_residual(const RadialGraph& g);

// Squared second fundamental form norm of the graph, per grid point.
// ||II||^2 = W^-2 [ (u''/W^2)^2 + (m-1) ((eta'/eta) u')^2 ].
std::vector<double> second_fundamental_form_norm(const RadialGraph& g);

struct JacobiReport {
    double max_abs = 0.0;
    double at_r = 0.0;
    bool minimal = true;  // false when the input graph fails the divergence
                          // residual gate; the residual is still reported
};

// Residual of the stability (Jacobi) equation for Theta = 1/W:
// Delta_g Theta + (||II||^2 + Ric(n,n)) Theta = 0 on minimal graphs.
JacobiReport jacobi_residual(const RadialGraph& g);

// Affine graph u = slope * t + offset over the warped line factor of a
// doubly warped model; |Du| = slope / f(r).
struct TGraph {
    ModelManifold man;  // doubly warped
    double slope = 0.0;
    double offset = 0.0;

    double grad_norm(double r) const;
    double W(double r) const;
};

// Divergence of the t-graph: div(Du/W) = u_tt / (f^2 W^3); identically zero
// for affine u. du_dt and u_tt let callers probe non-affine test data.
double t_graph_residual(const TGraph& g, double r, double du_dt, double u_tt);
double t_graph_residual(const TGraph& g, double r);

// Radial function u on a rotationally symmetric base together with the
// radial coefficient of the divergence-form operator it solves:
//   Laplace       L u = div(Du),
//   MinimalGraph  L u = div(W g^{ij} u_j) with the graph's own 1/W weight.
enum class FieldOperator { Laplace, MinimalGraph };

struct RadialField {
    ModelManifold man;
    std::vector<double> r, u;
    FieldOperator op = FieldOperator::Laplace;

    static RadialField harmonic(const ModelManifold& man, std::vector<double> r,
                                std::vector<double> u);
    static RadialField from_graph(const RadialGraph& g);
};

// Piecewise linear cutoff: 1 on [grid start, plateau_end], linear down to 0
// at support_end, 0 beyond. support_end must not exceed the grid.
struct Cutoff {
    double plateau_end;
    double support_end;
    double operator()(double r) const;
    double slope(double r) const;
};

struct CaccioppoliReport {
    double lhs = 0.0;         // int phi^2 |Du|^2
    double rhs = 0.0;         // 4 alpha^2 int u^2 |Dphi|^2
    double harmonic_residual = 0.0;
    bool holds = false;
};

// Energy inequality int phi^2 |Du|^2 <= 4 alpha^2 int u^2 |Dphi|^2 for
// discrete solutions of L u = 0 with ellipticity constant alpha.
CaccioppoliReport caccioppoli_check(const RadialField& field, const Cutoff& phi,
                                    double alpha);

void write_graph_csv(const RadialGraph& g, const std::string& path);
RadialGraph read_graph_csv(const ModelManifold& man, const std::string& path);

}  // namespace mgl
