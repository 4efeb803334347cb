#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace dtlab::quad {

// 15-point Gauss-Legendre rule on [-1,1].
inline constexpr std::array<double, 8> kGlNodes = {
    0.0,
    0.2011940939974345223006283033945962078128,
    0.3941513470775633698972073709810454683627,
    0.5709721726085388475372267372539106412383,
    0.7244177313601700474161860546139380096308,
    0.8482065834104272162006483207742168513662,
    0.9372733924007059043077589477102094712439,
    0.9879925180204854284895657185866125811469,
};

inline constexpr std::array<double, 8> kGlWeights = {
    0.2025782419255612728806201999675193148119,
    0.1984314853271115764561183264438393248186,
    0.1861610000155622110268005618664228245062,
    0.1662692058169939335532008604812088111309,
    0.1395706779261543144478047945110283225208,
    0.1071592204671719350118695466858693034845,
    0.0703660474881081247092674164506673384667,
    0.0307532419961172683546283935772044177217,
};

template <class F>
double gauss_legendre_15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = kGlWeights[0] * f(mid);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kGlNodes[i];
        s += kGlWeights[i] * (f(mid + dx) + f(mid - dx));
    }
    return s * half;
}

struct Result {
    double value = 0.0;
    double residual = 0.0; // sum of |refined - coarse| over accepted panels
    int panels = 0;
};

// Composite Gauss-Legendre with adaptive panel bisection: a panel is accepted
// once bisecting it moves the estimate by less than its share of `tol`.
// Depth is capped; panels stopped at the cap contribute to `residual` so the
// caller can see what was left unresolved instead of trusting a guess.
template <class F>
Result integrate(F&& f, double a, double b, double tol = 1e-11, int max_depth = 40) {
    Result out;
    const double span = b - a;
    if (span == 0.0) return out;

    struct Frame {
        double a, b, coarse;
        int depth;
    };
    // Explicit stack; worst case 2*max_depth frames alive.
    std::array<Frame, 2048> stack;
    int top = 0;
    stack[top++] = {a, b, gauss_legendre_15(f, a, b), 0};

    while (top > 0) {
        const Frame fr = stack[--top];
        const double mid = 0.5 * (fr.a + fr.b);
        const double left = gauss_legendre_15(f, fr.a, mid);
        const double right = gauss_legendre_15(f, mid, fr.b);
        const double refined = left + right;
        const double diff = std::fabs(refined - fr.coarse);
        const double budget = tol * std::fabs((fr.b - fr.a) / span);
        if (diff <= budget || fr.depth >= max_depth || top + 2 > static_cast<int>(stack.size())) {
            out.value += refined;
            out.residual += diff;
            ++out.panels;
        } else {
            stack[top++] = {fr.a, mid, left, fr.depth + 1};
            stack[top++] = {mid, fr.b, right, fr.depth + 1};
        }
    }
    return out;
}

template <class F>
double integral(F&& f, double a, double b, double tol = 1e-11, int max_depth = 40) {
    return integrate(std::forward<F>(f), a, b, tol, max_depth).value;
}

} // namespace dtlab::quad
