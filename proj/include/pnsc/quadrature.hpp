#pragma once

// Adaptive Gauss-Kronrod (7/15) integration and Wynn epsilon acceleration.
// Templates so the hot loops in the pdf/cdf code inline the integrand.

#include "pnsc/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace pnsc::quad {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b, value, error, magnitude;  // magnitude: integral of |f|
    bool operator<(const Piece& o) const { return error < o.error; }
};

template <class F>
Piece kronrod15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * wgk[7];
    double resg = fc * wg[3];
    double resabs = std::abs(fc) * wgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += wgk[j] * (f1 + f2);
        resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    const double err = std::abs((resk - resg) * h);
    return {a, b, resk * h, err, resabs * std::abs(h)};
}

}  // namespace detail

// Adaptive bisection driven by the largest local error estimate.
// Never throws; callers inspect `converged`.
template <class F>
Result integrate(F&& f, double a, double b, const QuadControl& ctl = {}) {
    Result out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<detail::Piece> heap;
    auto first = detail::kronrod15(f, a, b);
    double total = first.value;
    double err = first.error;
    double magnitude = first.magnitude;
    heap.push(first);
    int n = 1;
    const double tiny = 50.0 * std::numeric_limits<double>::epsilon();
    // Error estimates cannot drop below the rounding noise of the integrand.
    auto target = [&] { return std::max({ctl.abs_tol, ctl.rel_tol * std::abs(total), tiny * magnitude}); };
    while (err > target() && n < ctl.max_subdivisions) {
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (std::abs(worst.b - worst.a) <= tiny * std::max(1.0, std::abs(mid))) break;
        heap.pop();
        auto left = detail::kronrod15(f, worst.a, mid);
        auto right = detail::kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        magnitude += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
        ++n;
    }
    // Re-sum to shed the drift accumulated by incremental updates.
    total = 0.0;
    err = 0.0;
    magnitude = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        magnitude += heap.top().magnitude;
        heap.pop();
    }
    out.value = total;
    out.abs_error = err;
    out.intervals = n;
    out.converged = err <= target();
    return out;
}

struct Extrapolated {
    double value = 0.0;
    double error = 0.0;
};

// Wynn's epsilon algorithm applied to a sequence of partial sums.
inline Extrapolated wynn_epsilon(const std::vector<double>& s) {
    Extrapolated best;
    if (s.empty()) return best;
    best.value = s.back();
    best.error = s.size() > 1 ? std::abs(s.back() - s[s.size() - 2]) : std::numeric_limits<double>::infinity();
    std::vector<double> prev(s.size() + 1, 0.0);
    std::vector<double> cur = s;
    for (std::size_t k = 1; cur.size() > 1; ++k) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const double d = cur[i + 1] - cur[i];
            if (d == 0.0) return best;
            next[i] = prev[i + 1] + 1.0 / d;
        }
        if (k % 2 == 0 && next.size() >= 2) {
            const double e = std::abs(next.back() - next[next.size() - 2]);
            if (e < best.error && std::isfinite(next.back())) {
                best.value = next.back();
                best.error = e;
            }
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return best;
}

}  // namespace pnsc::quad
