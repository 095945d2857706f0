#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgl/mse.hpp"

namespace mgl {

// Inputs of the quantitative interior gradient estimate
//   W(x) <= max{sqrt(1+a0^2 g*^2), sqrt(a3/(a3-a2))} * (e^A - 1)/(e^B - 1)
// on a ball B_R(o), evaluated at points of B_R1(o).  kappa scales the ambient
// Ricci lower bound -(m-1) kappa^2, kbar the decaying curvature bound along
// the distance from o, gamma_star the normalized oscillation
// (sup_{B_R1} u - inf_{B_R} u)/R.
struct BoundInputs {
    int m = 3;
    double kappa = 0.0;
    double kbar = 0.0;
    double R = 1.0;
    double R1 = 0.5;
    double gamma_star = 1.0;

    double kbar0() const { return std::max(1.0, kbar); }
    void validate() const;

    static BoundInputs from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Free parameters of the cutoff construction.  Feasibility:
//   par_1b: (sqrt(eps^2+1) - sqrt((R1/R)^2+eps^2))/g* > q > 1/(sqrt(tau) a0 g*)
//   par_2:  a1 - a2 > (m-1) kappa^2
// with a1 = (1-tau)(q^2 - 1/(tau a0^2 g*^2)) L^2, a2 = (m+1) kbar0 L/(eps R),
// a3 = a1 - (m-1) kappa^2.
struct KorevaarParams {
    double eps = 0.5;
    double tau = 0.5;
    double q = 0.1;
    double a0 = 10.0;
    double L = 1.0;

    static KorevaarParams from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct DerivedConstants {
    double a1;
    double a2;
    double a3;
};

DerivedConstants derived_constants(const BoundInputs& in, const KorevaarParams& p);

struct ConstraintSlack {
    std::string name;
    double slack;
    bool ok;
};

struct ValidityReport {
    bool pass = false;
    DerivedConstants consts{0, 0, 0};
    std::vector<ConstraintSlack> constraints;

    nlohmann::json to_json() const;
};

ValidityReport validate_params(const BoundInputs& in, const KorevaarParams& p);

// Bound values are carried in the log domain; `value` is exp(log_value) and
// overflows to +inf without harming the log.
struct BoundValue {
    double log_value;
    double value;
};

// log(e^x - 1) for x > 0, stable for both tiny and huge x.
double log_expm1(double x);

// The gradient bound at distance r from the center, oscillation value gamma.
// Requires validate_params(in, p) to pass, 0 <= r <= R1, 0 <= gamma <= gamma_star.
BoundValue korevaar_bound(const BoundInputs& in, const KorevaarParams& p, double r, double gamma);

// Closed-form parameter choice behind the oscillation corollary:
//   tau = 1/2, eps = delta, q = (1-delta)/(2 sqrt(2) g*), a0 = 2/(q g*),
//   L = 8(m+1) kbar0/(delta R q^2);
// yields a3 = L^2 q^2/4 = 2 a2 when kappa = 0.  Valid for delta in [1/2, 1).
KorevaarParams canonical_params(double delta, double gamma_star, int m, double kbar0, double R);

// Explicit oscillation bound, independent of R:
//   max{sqrt(1+32 g*^2/(1-delta)^2), sqrt(2)} * C * exp(K (C-1) g*^2),
// C = 2/(delta(1-delta)), K = 16 sqrt(2) (m+1) kbar0/(delta(1-delta)).
BoundValue corollary_bound(double delta, double gamma_star, int m, double kbar0);

// Entire-solution slope bound: corollary_bound at delta = 1/2 with the
// linear growth rate a in place of gamma_star.
BoundValue entire_bound(double a, int m, double kbar0);

struct OptimizeResult {
    bool feasible = false;
    KorevaarParams params;
    BoundValue bound{0, 0};
    int evals = 0;
    bool canonical_fallback = false;

    nlohmann::json to_json() const;
};

// Direct-search minimization of the bound at (r, gamma) over feasible
// parameters; deterministic for a fixed seed.  Never worse than the best
// feasible canonical choice.
OptimizeResult optimize_params(const BoundInputs& in, double r, double gamma,
                               std::uint64_t seed = 0, int budget = 2000);

// A sampled section of a solution: for each point, an upper bound on the
// slope W, the distance from the ball center, and the normalized oscillation
// gamma = (u - inf_{B_R} u)/R (any upper bound keeps the check valid, since
// the bound grows in both r and gamma).
struct SectionPoint {
    double r;
    double gamma;
    double W;
};

struct SolutionSection {
    std::string label;
    double gamma_star = 0.0;
    std::vector<SectionPoint> pts;
};

// Diametral section of a ball B_R(x0) around radius `center` inside the
// domain of a rotationally symmetric graph; distances are Euclidean along
// the radial axis, the worst case for both W and gamma.
SolutionSection offset_ball_section(const RadialGraph& g, double center, double R, double R1);

// Section of the affine t-graph u = slope*t over a ball centered at the
// warped-product origin.  f_lower must lower-bound the fiber warp f on the
// whole manifold; membership and distances use f(0)|t| + r >= dist.
SolutionSection t_graph_section(const TGraph& g, double R, double R1,
                                double f_lower, int nt, int nr);

struct BoundCheckReport {
    bool pass = false;
    double min_margin = 0.0;  // min over points of log(bound) - log(W)
    double at_r = 0.0;
    KorevaarParams params;
    ValidityReport validity;
    std::string assumption;

    nlohmann::json to_json() const;
};

// Checks W <= korevaar_bound at every section point.  The curvature
// hypotheses behind (in.kappa, in.kbar) are the caller's responsibility;
// `assumption` is recorded verbatim in the report.
BoundCheckReport verify_solution_bound(const SolutionSection& sec, const BoundInputs& in,
                                       const KorevaarParams& p, const std::string& assumption);

// Same, with the canonical delta = R1/R parameter choice.
BoundCheckReport verify_solution_bound(const SolutionSection& sec, const BoundInputs& in,
                                       const std::string& assumption);

}  // namespace mgl
