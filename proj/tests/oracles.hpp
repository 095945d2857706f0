#pragma once

// Independent cross-checks for the test suite: finite differences, adaptive
// quadrature, random-frame curvature sampling, and a direct linear-domain
// evaluation of the slope bound. Nothing here calls back into the library
// numerics it is used to verify.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Reference values frozen from closed forms.
inline constexpr double kSinh5 = 74.20321057778875;

// Canonical parameters at delta = 1/2, gamma* = 1, m = 3, kbar0 = 1, R = 10:
// q = 1/(4 sqrt 2), a0 = 8 sqrt 2, L = 32/(5 q^2) = 204.8.
inline constexpr double kCanonQ = 0.17677669529663687;
inline constexpr double kCanonA0 = 11.313708498984761;
inline constexpr double kCanonL = 204.8;
// Entire-solution bound at slope 0: sqrt(2) * 2/(delta(1-delta)) at delta = 1/2.
inline constexpr double kEntireAtZero = 11.313708498984761;

// Unit sphere areas: 2 pi, 4 pi, 2 pi^2.
inline constexpr double kArea2 = 6.283185307179586;
inline constexpr double kArea3 = 12.566370614359172;
inline constexpr double kArea4 = 19.739208802178716;

struct Fd2 {
    double value, d1, d2;
};

// Central differences; h = 1e-4 keeps truncation near 1e-9 for smooth data.
inline Fd2 fd2(const std::function<double(double)>& f, double x, double h = 1e-4) {
    const double fp = f(x + h), fm = f(x - h), f0 = f(x);
    return {f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
}

struct FdSectionals {
    double k_ra, k_ab, k_tr, k_ta;
};

// Plane curvatures rebuilt from value-only warp samples.
inline FdSectionals fd_sectionals(const std::function<double(double)>& eta,
                                  const std::function<double(double)>* f, double r,
                                  double h = 1e-4) {
    const Fd2 e = fd2(eta, r, h);
    FdSectionals s{-e.d2 / e.value, (1.0 - e.d1 * e.d1) / (e.value * e.value), 0.0, 0.0};
    if (f) {
        const Fd2 w = fd2(*f, r, h);
        s.k_tr = -w.d2 / w.value;
        s.k_ta = -e.d1 * w.d1 / (e.value * w.value);
    }
    return s;
}

inline double simpson_panel(const std::function<double(double)>& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

// Recursive adaptive Simpson with Richardson correction.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 48) {
    const double c = 0.5 * (a + b);
    const double whole = simpson_panel(f, a, b);
    const double left = simpson_panel(f, a, c);
    const double right = simpson_panel(f, c, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) < 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, c, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, c, b, 0.5 * tol, depth - 1);
}

// gamma(c0) = m C3p int_{sqrt(c0)}^inf s^(m-1) e^(-C4p s^2) ds by direct
// quadrature; the tail beyond sqrt(c0) + 40/sqrt(C4p) is below 1e-300.
inline double gamma_of_c0_quadrature(double c0, double C3p, double C4p, int m) {
    const double lo = std::sqrt(c0);
    const double hi = lo + 40.0 / std::sqrt(C4p);
    const double integral = adaptive_simpson(
        [=](double s) { return std::pow(s, m - 1) * std::exp(-C4p * s * s); }, lo, hi, 1e-14);
    return m * C3p * integral;
}

// Random unit vector in R^d, optionally orthogonalized against prior rows.
inline std::vector<double> random_unit(std::size_t d, std::mt19937_64& rng,
                                       const std::vector<std::vector<double>>& prior = {}) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        std::vector<double> v(d);
        for (double& x : v) x = gauss(rng);
        for (const auto& w : prior) {
            double dot = 0.0;
            for (std::size_t j = 0; j < d; ++j) dot += v[j] * w[j];
            for (std::size_t j = 0; j < d; ++j) v[j] -= dot * w[j];
        }
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm < 1e-6) continue;
        for (double& x : v) x /= nrm;
        return v;
    }
}

// <R(v,w)w,v> for orthonormal v,w on a model whose curvature operator is
// diagonal over coordinate 2-planes: sum of squared wedge coefficients
// weighted by the plane curvatures K[a][b].
inline double plane_sample(const std::vector<double>& v, const std::vector<double>& w,
                           const std::vector<std::vector<double>>& K) {
    double sum = 0.0;
    const std::size_t d = v.size();
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) {
            const double wedge = v[a] * w[b] - v[b] * w[a];
            sum += wedge * wedge * K[a][b];
        }
    return sum;
}

// One random partial-Ricci sample: mean of <R(v,e_i)e_i,v> over a random
// orthonormal l-frame orthogonal to v.
inline double random_partial_ricci(const std::vector<double>& v,
                                   const std::vector<std::vector<double>>& K, int l,
                                   std::mt19937_64& rng) {
    std::vector<std::vector<double>> frame{v};
    double sum = 0.0;
    for (int i = 0; i < l; ++i) {
        frame.push_back(random_unit(v.size(), rng, frame));
        sum += plane_sample(v, frame.back(), K);
    }
    return sum / l;
}

// Coordinate plane curvature matrix. Doubly warped order (t, r, a...),
// rotationally symmetric order (r, a...).
inline std::vector<std::vector<double>> plane_matrix_dw(int m, double k_tr, double k_ta,
                                                        double k_ra, double k_ab) {
    std::vector<std::vector<double>> K(m, std::vector<double>(m, 0.0));
    K[0][1] = K[1][0] = k_tr;
    for (int a = 2; a < m; ++a) {
        K[0][a] = K[a][0] = k_ta;
        K[1][a] = K[a][1] = k_ra;
        for (int b = a + 1; b < m; ++b) K[a][b] = K[b][a] = k_ab;
    }
    return K;
}

inline std::vector<std::vector<double>> plane_matrix_rotsym(int m, double k_ra, double k_ab) {
    std::vector<std::vector<double>> K(m, std::vector<double>(m, 0.0));
    for (int a = 1; a < m; ++a) {
        K[0][a] = K[a][0] = k_ra;
        for (int b = a + 1; b < m; ++b) K[a][b] = K[b][a] = k_ab;
    }
    return K;
}

// Slope bound evaluated directly in the linear domain; agrees with the
// log-domain route while exp(A) stays finite.
inline double direct_bound(int m, double kappa, double kbar0, double R, double gamma_star,
                           double eps, double tau, double q, double a0, double L, double r,
                           double gamma) {
    const double g2 = gamma_star * gamma_star;
    const double a1 = (1.0 - tau) * (q * q - 1.0 / (tau * a0 * a0 * g2)) * L * L;
    const double a2 = (m + 1) * kbar0 * L / (eps * R);
    const double a3 = a1 - (m - 1) * kappa * kappa;
    const double A = L * R * (std::sqrt(eps * eps + 1.0) - eps);
    const double B =
        L * R * (std::sqrt(eps * eps + 1.0) - std::sqrt(eps * eps + (r / R) * (r / R)) - q * gamma);
    const double fac = std::sqrt(std::max(1.0 + a0 * a0 * g2, a3 / (a3 - a2)));
    return fac * std::expm1(A) / std::expm1(B);
}

}  // namespace oracle
