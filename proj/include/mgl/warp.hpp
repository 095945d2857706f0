#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgl/hermite.hpp"

namespace mgl {

using json = nlohmann::json;

struct WarpEval {
    double value;
    double d1;
    double d2;
};

// Warp profile eta(r) = r/2 + (1/(2 zeta2(0))) int_0^r zeta2, built from
//   zeta1(t) = t on [0,1],  t^(-1-alpha) on [2,inf),
//   zeta2(t) = int_t^inf zeta1.
// The bridge of zeta1 over [1,2] is a quintic matching value and two
// derivatives at both ends, so zeta2 and its integral have exact piecewise
// antiderivatives. eta is concave with eta'(0)=1 and eta' decreasing to 1/2.
class KwEtaCurve {
  public:
    explicit KwEtaCurve(double alpha);

    double alpha() const { return alpha_; }
    double zeta1(double t) const;
    double zeta1_d1(double t) const;
    double zeta2(double t) const;    // int_t^inf zeta1
    double zeta2_zero() const { return z0_; }
    double zeta2_integral(double r) const;  // int_0^r zeta2
    WarpEval eta(double r) const;

  private:
    double alpha_;
    QuinticSegment bridge_;  // zeta1 on [1,2]
    double p_;               // int_1^2 zeta1
    double z2_, z1_, z0_;    // zeta2 at t = 2, 1, 0
    double i1_, i2_;         // int_0^r zeta2 at r = 1, 2
};

// Fiber warp f(r) = (b + r^2)^p + c with p = (beta + 3 - m)/2 < 0.
// Positive, strictly decreasing for r > 0, inf f = c, f'(0) = 0.
struct KwFiberWarp {
    int m;
    double beta, b, c, p;
    KwFiberWarp(int m, double beta, double b, double c);
    WarpEval eval(double r) const;
};

// One-dimensional warp factor with two derivatives and a validity interval.
class WarpFunction {
  public:
    WarpFunction() = default;

    static WarpFunction euclidean();          // r on [0, inf)
    static WarpFunction sphere();             // sin r on [0, pi]
    static WarpFunction hyperbolic();         // sinh r on [0, inf)
    static WarpFunction kw_eta(double alpha);
    static WarpFunction kw_f(int m, double beta, double b, double c);
    // Knots are rows (t, value, d1, d2); consecutive knots are joined by
    // quintic segments matching all supplied data.
    static WarpFunction piecewise(const std::vector<std::array<double, 4>>& knots);

    static WarpFunction from_json(const json& spec);
    json to_json() const;

    // Throws std::domain_error outside [lo, hi].
    WarpEval eval(double r) const;

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::string& form() const { return form_; }

  private:
    std::function<WarpEval(double)> fn_;
    double lo_ = 0.0;
    double hi_ = std::numeric_limits<double>::infinity();
    std::string form_;
    json params_ = json::object();
};

}  // namespace mgl
