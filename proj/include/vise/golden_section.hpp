#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace vise {

struct ScalarMaximum {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops once the bracket is narrower than `tol`.
template <class F>
ScalarMaximum golden_section_maximize(F&& f, double lo, double hi, double tol, int max_iterations = 500) {
    if (!(lo < hi)) throw std::invalid_argument("golden_section_maximize: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("golden_section_maximize: tol must be positive");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    int it = 0;
    for (; it < max_iterations && (b - a) > tol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x), it};
}

/// Golden-section search driven by a comparison: `better(x, y)` is true when
/// the objective at x is at least its value at y. Lets callers compare through
/// a difference that keeps more precision than two rounded values.
template <class Better>
double golden_section_argmax(Better&& better, double lo, double hi, double tol, int max_iterations = 500) {
    if (!(lo < hi)) throw std::invalid_argument("golden_section_argmax: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("golden_section_argmax: tol must be positive");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    for (int it = 0; it < max_iterations && (b - a) > tol; ++it) {
        if (better(c, d)) {
            b = d;
            d = c;
            c = b - inv_phi * (b - a);
        } else {
            a = c;
            c = d;
            d = a + inv_phi * (b - a);
        }
    }
    return 0.5 * (a + b);
}

/// Largest value of f over `count` evenly spaced points of [lo, hi]. Ties go
/// to the first point.
template <class F>
ScalarMaximum grid_maximize(F&& f, double lo, double hi, std::size_t count) {
    if (count < 2) throw std::invalid_argument("grid_maximize: need at least two points");
    ScalarMaximum best{lo, f(lo), 0};
    for (std::size_t i = 1; i < count; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        const double v = f(x);
        if (v > best.value) best = {x, v, 0};
    }
    best.iterations = static_cast<int>(count);
    return best;
}

}  // namespace vise
