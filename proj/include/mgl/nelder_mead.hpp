#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace mgl {

struct SimplexResult {
    std::vector<double> x;
    double value;
    int evals;
};

// Nelder-Mead downhill simplex with standard coefficients
// (reflect 1, expand 2, contract 1/2, shrink 1/2).  The objective must be
// total (return a finite penalty outside the feasible region, not throw).
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& start,
                                 double step,
                                 int max_evals,
                                 double tol) {
    const std::size_t n = start.size();
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<std::vector<double>> pts(n + 1, start);
    std::vector<double> val(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) val[i] = eval(pts[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        std::vector<std::vector<double>> p2(n + 1);
        std::vector<double> v2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            p2[i] = pts[idx[i]];
            v2[i] = val[idx[i]];
        }
        pts.swap(p2);
        val.swap(v2);
    };

    while (evals < max_evals) {
        order();
        if (val[n] - val[0] < tol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / double(n);

        auto blend = [&](double c) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + c * (centroid[j] - pts[n][j]);
            return x;
        };

        std::vector<double> xr = blend(1.0);
        double fr = eval(xr);
        if (fr < val[0]) {
            std::vector<double> xe = blend(2.0);
            double fe = eval(xe);
            if (fe < fr) {
                pts[n] = std::move(xe);
                val[n] = fe;
            } else {
                pts[n] = std::move(xr);
                val[n] = fr;
            }
        } else if (fr < val[n - 1]) {
            pts[n] = std::move(xr);
            val[n] = fr;
        } else {
            std::vector<double> xc = blend(fr < val[n] ? 0.5 : -0.5);
            double fc = eval(xc);
            if (fc < std::min(fr, val[n])) {
                pts[n] = std::move(xc);
                val[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
                    val[i] = eval(pts[i]);
                }
            }
        }
    }
    order();
    return {pts[0], val[0], evals};
}

}  // namespace mgl
