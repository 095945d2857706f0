#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgl/manifold.hpp"
#include "mgl/mse.hpp"

namespace mgl {

// Cell-centered finite-volume mesh for radial densities: faces at
// r_lo + k dr, centers midway, cell weight = sphere_area * eta(center)^(m-1) dr.
// Flux-form updates then conserve the weighted mass up to boundary flux by
// telescoping, independently of quadrature error in the weights.
struct RadialMesh {
    ModelManifold man;
    double r_lo = 0.0;
    double dr = 0.0;
    int n = 0;
    std::vector<double> center;     // size n
    std::vector<double> cell_w;     // size n
    std::vector<double> face_area;  // size n+1

    static RadialMesh pole(const ModelManifold& man, double r_max, int n);
    static RadialMesh annulus(const ModelManifold& man, double r_lo, double r_max, int n);

    double r_hi() const { return r_lo + dr * n; }
    double mass(const std::vector<double>& u) const;
    int cell_of(double r) const;
};

// div(A D.) coefficients: a_r sampled at faces (drives the radial flux),
// a_theta at centers (recorded for the ellipticity certificate only; radial
// data never differentiates it).
struct EllipticCoefficient {
    std::vector<double> a_r_face;
    std::vector<double> a_theta;
    double alpha = 1.0;

    static EllipticCoefficient identity(const RadialMesh& mesh);
    static EllipticCoefficient build(const RadialMesh& mesh,
                                     const std::function<double(double)>& a_r,
                                     const std::function<double(double)>& a_theta);
    // Drifted operator of a minimal graph: a_r = 1/W, a_theta = W, alpha = sup W.
    static EllipticCoefficient from_graph(const RadialMesh& mesh, const RadialGraph& g);

    void check_ellipticity(const RadialMesh& mesh) const;  // alpha^-1 <= a <= alpha
};

enum class WallCondition {
    ZeroFlux,    // reflecting face, exact mass conservation
    FixedValue,  // boundary cell pinned to its initial value
};

struct HeatTracePoint {
    double t;
    double mass;
    double min_u;
    double max_u;
};

// Theta-scheme (default Crank-Nicolson) evolution of du/dt = div(A Du) with a
// direct tridiagonal solve per step.
class HeatEvolver {
  public:
    HeatEvolver(RadialMesh mesh, EllipticCoefficient op,
                WallCondition inner, WallCondition outer, double theta = 0.5);

    void set_state(std::vector<double> u, double t0);
    const std::vector<double>& state() const { return u_; }
    double time() const { return t_; }
    double mass() const;

    std::vector<double> apply_L(const std::vector<double>& u) const;
    void step(double dt);
    void step_backward_euler(double dt);
    // Advances to time T in steps of dt (final step clipped); an initial pair
    // of backward-Euler half-steps damps the Crank-Nicolson startup modes of
    // rough data when rannacher is set.
    void run(double T, double dt, bool rannacher = false);

    // Largest dt for which the explicit part of the theta scheme stays
    // sign-preserving (monotone update); +inf for backward Euler.
    double monotone_dt() const;

    double outer_tail_mass(double fraction = 0.05) const;
    const std::vector<HeatTracePoint>& trace() const { return trace_; }
    const RadialMesh& mesh() const { return mesh_; }
    const EllipticCoefficient& op() const { return op_; }
    WallCondition inner_wall() const { return inner_; }
    WallCondition outer_wall() const { return outer_; }

  private:
    RadialMesh mesh_;
    EllipticCoefficient op_;
    WallCondition inner_;
    WallCondition outer_;
    double theta_;
    std::vector<double> u_;
    double t_ = 0.0;
    std::vector<HeatTracePoint> trace_;

    void step_theta(double dt, double theta);
    void record();
};

// Normalized C^1 bump of width 4 dr at the pole; weighted mass exactly 1.
std::vector<double> delta_state(const RadialMesh& mesh);

struct MassReport {
    double max_drift = 0.0;
    bool inconclusive = false;  // mass reached the outer 5% of the grid
    bool pass = false;

    nlohmann::json to_json() const;
};

MassReport mass_conservation_check(const HeatEvolver& ev, double tol);

struct GaussianConstants {
    double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0, c5 = 1.0, c6 = 1.0;

    void validate() const;  // all positive, c1 <= c3
    static GaussianConstants from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct SandwichSample {
    double d;    // distance from the kernel center
    double t;    // time
    double H;    // kernel value
    double vol;  // |B_sqrt(t)|
};

struct SandwichFit {
    double C1, C2, C3, C4;
};

struct SandwichReport {
    bool all_pass = false;
    int fails_lower = 0;
    int fails_upper = 0;
    double worst_lower = 0.0;  // min over samples of log H - log(lower bound)
    double worst_upper = 0.0;  // min over samples of log(upper bound) - log H
    SandwichFit fit{0, 0, 0, 0};

    nlohmann::json to_json() const;
};

// Verifies C1 e^{-C2 d^2/t}/|B_sqrt(t)| <= H <= C3 e^{-C4 d^2/t}/|B_sqrt(t)|
// per sample, then fits the tightest envelopes (least total log gap, exact
// two-variable LP by vertex enumeration).
SandwichReport gaussian_sandwich_check(const std::vector<SandwichSample>& samples,
                                       const GaussianConstants& c);

// Kernel state resampled as sandwich samples at distances center[i] <= d_max.
std::vector<SandwichSample> sample_kernel(const RadialMesh& mesh, const std::vector<double>& u,
                                          double t, double d_max, int stride);

struct FlowReport {
    bool pass = false;
    double max_time_slope = 0.0;     // max over steps/points of du/dt
    double range_violation = 0.0;    // worst breach of inf f <= u <= f
    double lf_max_interior = 0.0;
    double dt = 0.0;
    int steps = 0;
    int halvings = 0;

    nlohmann::json to_json() const;
};

// Evolves a discrete supersolution (Lf <= lf_tol at interior cells, checked)
// and asserts du/dt <= 1e-10 and inf f <= u <= f pointwise; halves dt and
// restarts when the monotonicity assertion trips at tolerance scale.
FlowReport supersolution_flow(const RadialMesh& mesh, const EllipticCoefficient& op,
                              WallCondition inner, WallCondition outer,
                              const std::vector<double>& f, double T, double lf_tol);

struct BallAverageReport {
    std::vector<double> R;
    std::vector<double> avg;
    double inf_f = 0.0;
    double final_gap = 0.0;  // |avg.back() - inf_f| / max(1, |inf f|)
    bool monotone_tail = false;

    nlohmann::json to_json() const;
};

// Volume averages (1/|B_R|) int_{B_R} f for radial f.  Rotationally
// symmetric weight eta^{m-1}; doubly warped manifolds use the fiber
// cross-section weight f_fiber * eta^{m-2} per unit axis length.
BallAverageReport ball_average_limit(const std::function<double(double)>& f,
                                     const ModelManifold& man,
                                     const std::vector<double>& R_list);

struct LapAverageReport {
    std::vector<double> R;
    std::vector<double> s;  // R^2 / |B_R| * int_{B_R} Lf
    double peak_abs = 0.0;
    double final_abs = 0.0;
    bool all_nonpositive = false;

    nlohmann::json to_json() const;
};

// Weighted mean of Lf over growing balls, evaluated by telescoping the
// discrete fluxes of the conservative form.
LapAverageReport weighted_laplacian_average(const std::vector<double>& f, const HeatEvolver& ev,
                                            const std::vector<double>& R_list);

struct LhopitalReport {
    double tail_liminf_hg = 0.0;
    double liminf_ratio = 0.0;
    double growth = 0.0;  // cumulative-g growth over the second half
    bool inconclusive = false;
    bool holds = false;

    nlohmann::json to_json() const;
};

// Integral-ratio liminf comparison: ess-liminf of h/g over the tail cannot
// exceed the liminf of (int_0^r h)/(int_0^r g) when int g diverges.  The
// divergence hypothesis is witnessed by growth >= 1.2, else inconclusive.
LhopitalReport lhopital_liminf(const std::vector<double>& h, const std::vector<double>& g,
                               double dt);

struct AppendixConstants {
    double c0 = 0.0;
    double gamma = 0.0;
    double c0_star = 0.0;
    double C1p = 0.0;
    double C2p = 0.0;

    nlohmann::json to_json() const;
};

// gamma(c0) = m C3p int_{sqrt(c0)}^inf s^{m-1} e^{-C4p s^2} ds, evaluated via
// the upper incomplete gamma recursion (exact at integer/half-integer m/2).
double gamma_of_c0(double c0, double C3p, double C4p, int m);

// Bisects gamma(c0) = 3/4 on c0 > 2 and assembles the derived constants
//   c0* = 2 c0/(c0-2), C1p = (1-gamma) e^{-(2+c0/2+c0*) C}, C2p = 2 C.
AppendixConstants appendix_constants(double C3p, double C4p, int m, double C_harnack);

}  // namespace mgl
