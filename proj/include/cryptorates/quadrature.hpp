#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "cryptorates/errors.hpp"

namespace cryptorates {

/// Tolerances and domain for adaptive quadrature. The integral is accepted
/// once the accumulated error estimate drops below
/// max(abs_tol, rel_tol * |value|).
struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 400;
    double lower = 0.0;
    double upper = 1.0;
    /// When set, integrate on [lower, inf); `upper` is ignored and the
    /// integrand is mapped through x = lower + t/(1-t), dx = dt/(1-t)^2.
    bool half_line = false;

    static QuadratureSpec interval(double a, double b) {
        QuadratureSpec s;
        s.lower = a;
        s.upper = b;
        return s;
    }

    static QuadratureSpec half_infinite(double a = 0.0) {
        QuadratureSpec s;
        s.lower = a;
        s.half_line = true;
        return s;
    }
};

struct QuadratureResult {
    double value = 0.0;
    double err_est = 0.0;
    int panels = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
// Column 0: abscissa, column 1: Gauss weight, column 2: Kronrod weight.
inline constexpr double kG7K15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class F>
void g7k15_panel(const F& f, double a, double b, double& value, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = kG7K15[0][1] * f0;
    double k15 = kG7K15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kG7K15[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += kG7K15[i][1] * fi;
        k15 += kG7K15[i][2] * fi;
    }
    value = k15 * half;
    err = std::abs((k15 - g7) * half);
}

struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class F>
QuadratureResult integrate_finite(const F& f, double a, double b, const QuadratureSpec& spec) {
    std::priority_queue<Panel> panels;
    Panel p{a, b, 0.0, 0.0};
    g7k15_panel(f, a, b, p.value, p.err);
    panels.push(p);
    double total = p.value;
    double total_err = p.err;
    int n = 1;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (n >= spec.max_subdivisions) {
            throw ConvergenceError("quadrature: subdivision limit reached", total, total_err);
        }
        Panel worst = panels.top();
        panels.pop();
        total -= worst.value;
        total_err -= worst.err;
        const double m = 0.5 * (worst.a + worst.b);
        for (const auto& [lo, hi] : {std::pair{worst.a, m}, std::pair{m, worst.b}}) {
            Panel child{lo, hi, 0.0, 0.0};
            g7k15_panel(f, lo, hi, child.value, child.err);
            panels.push(child);
            total += child.value;
            total_err += child.err;
        }
        ++n;
    }
    return {total, total_err, n};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over the domain in
/// `spec`, bisecting the panel with the largest error estimate until the
/// tolerance is met. Throws ConvergenceError (carrying the best estimate)
/// if max_subdivisions is exhausted first.
template <class F>
QuadratureResult integrate(const F& f, const QuadratureSpec& spec = {}) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1) {
        throw std::domain_error("quadrature: tolerances must be positive");
    }
    if (spec.half_line) {
        const double a = spec.lower;
        auto mapped = [&f, a](double t) {
            const double w = 1.0 - t;
            return f(a + t / w) / (w * w);
        };
        return detail::integrate_finite(mapped, 0.0, 1.0, spec);
    }
    return detail::integrate_finite(f, spec.lower, spec.upper, spec);
}

}  // namespace cryptorates
