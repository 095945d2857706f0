#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mgl {

// Degree-5 polynomial on [t0,t1] matching value and first two derivatives at
// both ends. Coefficients are in the scaled variable s = (t-t0)/(t1-t0).
class QuinticSegment {
  public:
    QuinticSegment() = default;
    QuinticSegment(double t0, double t1, double v0, double d0, double a0,
                   double v1, double d1, double a1)
        : t0_(t0), dt_(t1 - t0) {
        if (!(dt_ > 0.0))
            throw std::invalid_argument("QuinticSegment: t1 <= t0");
        c_[0] = v0;
        c_[1] = d0 * dt_;
        c_[2] = 0.5 * a0 * dt_ * dt_;
        const double A = v1 - (c_[0] + c_[1] + c_[2]);
        const double B = d1 * dt_ - (c_[1] + 2.0 * c_[2]);
        const double C = a1 * dt_ * dt_ - 2.0 * c_[2];
        c_[3] = 10.0 * A - 4.0 * B + 0.5 * C;
        c_[4] = -15.0 * A + 7.0 * B - C;
        c_[5] = 6.0 * A - 3.0 * B + 0.5 * C;
    }

    double t0() const { return t0_; }
    double t1() const { return t0_ + dt_; }

    double value(double t) const {
        const double s = (t - t0_) / dt_;
        double v = 0.0;
        for (int k = 5; k >= 0; --k) v = v * s + c_[k];
        return v;
    }

    double deriv1(double t) const {
        const double s = (t - t0_) / dt_;
        double v = 0.0;
        for (int k = 5; k >= 1; --k) v = v * s + k * c_[k];
        return v / dt_;
    }

    double deriv2(double t) const {
        const double s = (t - t0_) / dt_;
        double v = 0.0;
        for (int k = 5; k >= 2; --k) v = v * s + k * (k - 1) * c_[k];
        return v / (dt_ * dt_);
    }

    // Integral of the segment over [t0, t], t within the segment.
    double integral_from_t0(double t) const {
        const double s = (t - t0_) / dt_;
        double v = 0.0;
        for (int k = 5; k >= 0; --k) v = v * s + c_[k] / (k + 1);
        return v * s * dt_;
    }

    double integral_full() const { return integral_from_t0(t0_ + dt_); }

    // Iterated integral: int_{t0}^{t} int_{t0}^{tau} p  d tau.
    double integral2_from_t0(double t) const {
        const double s = (t - t0_) / dt_;
        double v = 0.0;
        for (int k = 5; k >= 0; --k)
            v = v * s + c_[k] / ((k + 1) * (k + 2));
        return v * s * s * dt_ * dt_;
    }

  private:
    double t0_ = 0.0;
    double dt_ = 1.0;
    std::array<double, 6> c_{};
};

// Cubic Hermite interpolation of (h, h') samples on an increasing grid.
// value() is C1 across knots; deriv() is the interpolant's exact derivative.
class CubicHermite {
  public:
    CubicHermite() = default;
    CubicHermite(std::vector<double> t, std::vector<double> h,
                 std::vector<double> dh)
        : t_(std::move(t)), h_(std::move(h)), dh_(std::move(dh)) {
        if (t_.size() < 2 || t_.size() != h_.size() ||
            t_.size() != dh_.size())
            throw std::invalid_argument("CubicHermite: bad sample arrays");
        for (std::size_t i = 1; i < t_.size(); ++i)
            if (!(t_[i] > t_[i - 1]))
                throw std::invalid_argument("CubicHermite: grid not sorted");
    }

    double lo() const { return t_.front(); }
    double hi() const { return t_.back(); }

    double value(double t) const {
        const auto [i, s, dt] = locate(t);
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * h_[i] + (s3 - 2 * s2 + s) * dt * dh_[i] +
               (-2 * s3 + 3 * s2) * h_[i + 1] + (s3 - s2) * dt * dh_[i + 1];
    }

    double deriv(double t) const {
        const auto [i, s, dt] = locate(t);
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) * h_[i] + (3 * s2 - 4 * s + 1) * dt * dh_[i] +
                (-6 * s2 + 6 * s) * h_[i + 1] + (3 * s2 - 2 * s) * dt *
                    dh_[i + 1]) /
               dt;
    }

  private:
    std::tuple<std::size_t, double, double> locate(double t) const {
        if (!(t >= t_.front() && t <= t_.back()))
            throw std::domain_error("CubicHermite: t outside sample range");
        std::size_t lo = 0, hi = t_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (t_[mid] <= t ? lo : hi) = mid;
        }
        const double dt = t_[lo + 1] - t_[lo];
        return {lo, (t - t_[lo]) / dt, dt};
    }

    std::vector<double> t_, h_, dh_;
};

}  // namespace mgl
