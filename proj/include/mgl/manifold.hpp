#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mgl/warp.hpp"

namespace mgl {

enum class ManifoldKind { RotSym, DoublyWarped };

// Rotationally symmetric model dr^2 + eta(r)^2 g_S  (dimension m), or the
// doubly warped model f(r)^2 dt^2 + dr^2 + eta(r)^2 g_S (dimension m, fiber
// sphere of dimension m-2). Closure at the pole (eta(0)=0, eta'(0)=1, and
// f'(0)=0 for the warped factor) is checked numerically on construction.
class ModelManifold {
  public:
    static ModelManifold rotsym(int m, WarpFunction eta);
    static ModelManifold doubly_warped(int m, WarpFunction eta, WarpFunction f);
    static ModelManifold from_json(const json& spec);
    json to_json() const;

    ManifoldKind kind() const { return kind_; }
    int dim() const { return m_; }
    const WarpFunction& eta() const { return eta_; }
    const WarpFunction& fiber_f() const;

    // Curvature formulas are evaluated only for r >= pole_cutoff.
    static constexpr double pole_cutoff = 1e-4;

  private:
    ModelManifold(ManifoldKind k, int m, WarpFunction eta,
                  std::optional<WarpFunction> f);
    ManifoldKind kind_;
    int m_;
    WarpFunction eta_;
    WarpFunction f_;
    bool has_f_ = false;
};

// Sectional curvatures of the coordinate 2-planes, constant over each plane
// type by symmetry. t = warped line direction, r = radial, a/b = two
// distinct sphere directions.
struct SectionalSpectrum {
    double k_ra = 0.0;  // r^a plane: -eta''/eta
    double k_ab = 0.0;  // a^b plane: (1 - eta'^2)/eta^2
    double k_tr = 0.0;  // t^r plane: -f''/f
    double k_ta = 0.0;  // t^a plane: -eta' f'/(eta f)
    bool has_t = false;
    bool has_ab = false;
};

SectionalSpectrum simple_plane_sectionals(const ModelManifold& man, double r);

// Diagonal Ricci entries in the orthonormal coordinate frame, computed by
// tracing the plane spectrum with the actual index multiplicities.
struct RicciDiagonal {
    double radial = 0.0;
    double spherical = 0.0;
    double tangent = 0.0;
    bool has_t = false;
};

RicciDiagonal ricci_diag(const ModelManifold& man, double r);

// Lower bound for the partial Ricci curvature Ric^(l): (1/l) times the
// minimal sum of l plane curvatures. For rotationally symmetric models the
// enumeration is exact per frame direction. For doubly warped models the
// enumeration ranges over l-multisets of plane types with the t^r type
// available once, which reproduces the classical nine-bracket display at
// l = 2 and is a valid (conservative) lower bound for every l.
struct RicciLTerm {
    std::string label;
    double value;  // already divided by l
};

struct RicciLBound {
    double value;
    std::vector<RicciLTerm> terms;
};

RicciLBound ricci_l_lower(const ModelManifold& man, double r, int l);

// Ric^(l) in the radial direction: average of the l smallest curvatures of
// the coordinate planes through e_r.
double ricci_l_radial(const ModelManifold& man, double r, int l);

// Area of the unit sphere S^(m-1) in R^m.
double unit_sphere_area(int m);

// Riemannian volume of the metric ball B_R around the pole; rotationally
// symmetric models only. Relative quadrature error below 1e-10.
double volume_ball(const ModelManifold& man, double R);

// Volume comparison offsets: given |B_R(x)| and d = d(x,y), the geometric
// mean sqrt(|B_R(x)||B_R(y)|) lies within [first, second] whenever the
// Bishop-Gromov ratio bound applies.
std::pair<double, double> ball_offset_bound(double vol_x, double d, double R,
                                            int m);

}  // namespace mgl
