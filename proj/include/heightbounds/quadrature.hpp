#pragma once

// Globally adaptive Gauss-Kronrod (G7/K15) quadrature over a list of finite
// intervals. The interval with the largest error estimate is bisected until
// the summed estimate drops below the tolerance or the evaluation budget runs
// out.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace heightbounds {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long long evaluations = 0;
};

namespace quad {

namespace detail {

// Kronrod abscissae on [-1, 1] (non-negative half), Kronrod and Gauss weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the 7-point rule, attached to kXgk[1], kXgk[3], kXgk[5], kXgk[7].
inline constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                              0.381830050505118944950369775488975,
                                              0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    int depth;
    std::size_t piece;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15(F& f, double a, double b, int depth, std::size_t piece, long long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[static_cast<std::size_t>(j)];
        const double s = f(c - dx) + f(c + dx);
        kron += kWgk[static_cast<std::size_t>(j)] * s;
        if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * s;
    }
    evals += 15;
    kron *= h;
    gauss *= h;
    return Segment{a, b, kron, std::abs(kron - gauss), depth, piece};
}

}  // namespace detail

/// One integrand on one finite parameter interval.
struct Piece {
    std::function<double(double)> f;
    double a;
    double b;
};

/// Sums the integrals of all pieces to absolute tolerance `tol`, always
/// refining the segment with the largest error estimate. Throws
/// tolerance_not_met when `max_evaluations` is exhausted first.
inline QuadratureResult integrate_pieces(std::vector<Piece> pieces, double tol, long long max_evaluations = 4'000'000) {
    if (!(tol > 0.0)) throw domain_error("integrate: tol must be positive");
    std::priority_queue<detail::Segment> heap;
    QuadratureResult out;
    double err = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!(pieces[i].b > pieces[i].a)) continue;
        auto s = detail::gk15(pieces[i].f, pieces[i].a, pieces[i].b, 0, i, out.evaluations);
        err += s.error;
        heap.push(s);
    }
    // Segments that cannot be split further in double precision are retired.
    double retired_error = 0.0;
    double retired_value = 0.0;
    while (err > tol && !heap.empty()) {
        if (out.evaluations + 30 > max_evaluations) {
            throw tolerance_not_met("integrate: budget of " + std::to_string(max_evaluations) +
                                    " evaluations exhausted with error estimate " + std::to_string(err));
        }
        const detail::Segment s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b) || s.depth > 200) {
            retired_error += s.error;
            retired_value += s.value;
            if (retired_error > tol) {
                throw tolerance_not_met("integrate: interval resolution exhausted with error estimate " +
                                        std::to_string(err));
            }
            continue;
        }
        auto& f = pieces[s.piece].f;
        auto left = detail::gk15(f, s.a, mid, s.depth + 1, s.piece, out.evaluations);
        auto right = detail::gk15(f, mid, s.b, s.depth + 1, s.piece, out.evaluations);
        err += left.error + right.error - s.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum from the leaves to shed the drift of incremental updates.
    double value = retired_value;
    double error = retired_error;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = value;
    out.abs_error_estimate = error;
    if (out.evaluations == 0) out.evaluations = 1;
    return out;
}

/// Integrates a single function over the union of finite intervals.
template <class F>
QuadratureResult integrate(F&& f, const std::vector<std::pair<double, double>>& intervals, double tol,
                           long long max_evaluations = 4'000'000) {
    std::vector<Piece> pieces;
    pieces.reserve(intervals.size());
    for (const auto& [a, b] : intervals) pieces.push_back(Piece{std::function<double(double)>(f), a, b});
    return integrate_pieces(std::move(pieces), tol, max_evaluations);
}

/// Quintic smoothstep 10t^3 - 15t^4 + 6t^5 and its derivative. Its Jacobian
/// vanishes to second order at both ends, which tames endpoint logarithms.
inline double smoothstep(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
inline double smoothstep_derivative(double t) {
    const double s = t * (1.0 - t);
    return 30.0 * s * s;
}

}  // namespace quad
}  // namespace heightbounds
