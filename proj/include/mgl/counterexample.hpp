#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mgl/manifold.hpp"

namespace mgl {

// Parameters of the doubly warped manifold
//   f(r)^2 dt^2 + dr^2 + eta(r)^2 g_S,
// eta built from the smoothed zeta profile with tail exponent alpha,
// f(r) = (b + r^2)^p + c with p = (beta + 3 - m)/2.
struct KWSpec {
    int m = 4;
    double alpha = 0.4;
    double beta = 0.4;
    double b = 100.0;
    double c = 100.0;

    double p() const { return 0.5 * (beta + 3.0 - m); }
    void validate() const;

    static KWSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

ModelManifold build_kw_manifold(const KWSpec& spec);

// One of the nine two-plane curvature brackets 2 Ric^(2) can reach.
struct BracketResult {
    std::string label;
    double min_value;
    double at_r;
    double min_scaled;     // min over the grid of (1 + r^2) * value
    double fitted_power;   // least-squares slope of log|value| vs log r on the tail
    int tail_sign;         // sign of the bracket on the sampled tail (0 if mixed)
};

struct ClaimResult {
    std::string name;
    bool pass = false;
    bool indeterminate = false;
    double worst = 0.0;
    double at_r = 0.0;
};

struct Certificate {
    KWSpec spec;
    double r_lo = 0.0;
    double r_max = 0.0;
    int n = 0;

    std::vector<BracketResult> brackets;

    // Diagonal Ricci minima; `printed` uses the alternative multiplicity
    // (m-3) on the tangent and radial entries.
    double ric_tangent_min = 0.0, ric_radial_min = 0.0, ric_spherical_min = 0.0;
    double ric_tangent_printed_min = 0.0, ric_radial_printed_min = 0.0;

    double sup_abs_sec = 0.0;     // kappa_bar^2 with |Sec| <= kappa_bar^2
    double kappa_decay = 0.0;     // Ric^(m-2)(grad r) (1+r^2) >= -kappa_decay^2
    double t_residual_max = 0.0;  // affine t-graph divergence residual
    double sup_grad = 0.0;        // sup |Du| = a / min f at unit slope
    double min_f = 0.0;

    std::vector<ClaimResult> claims;

    bool claims_pass() const;  // all non-indeterminate claims
    nlohmann::json to_json() const;
};

Certificate certify(const KWSpec& spec, double r_max = 200.0, int n = 8192);

struct SearchResult {
    bool found = false;
    double b = 0.0;
    double c = 0.0;
    double objective = 0.0;  // min over the grid of min diag Ricci * (1+r^2)
    Certificate cert;

    nlohmann::json to_json() const;
};

// Logarithmic grid search of (b, c) in [10, 1e6]^2 maximizing the worst
// scaled Ricci margin; the winner is re-certified at full resolution.
SearchResult search_bc(int m, double alpha, double beta, int budget = 49);

}  // namespace mgl
