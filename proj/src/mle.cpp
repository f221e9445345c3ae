#include "poislrt/mle.hpp"

#include <cmath>

#include "poislrt/errors.hpp"

namespace poislrt {

namespace {
constexpr int kMaxIterations = 200;
constexpr double kEdge = 1.0 - 1e-12;   // relative offset of the right probe
constexpr double kZeroFloor = 1e-13;    // bracket collapsed onto the origin
constexpr double kTieSlack = 1e-12;     // separates exact rational ties from
                                        // true positive score at the origin
}  // namespace

bool positivity_screen(const SufficientStats& stats) {
    // Count data produce exact ties (mixed moment == product of means) with
    // positive probability; those have l'(0) = 0 and belong to the boundary,
    // so the comparison must not be decided by rounding of the product.
    return stats.mixed_moment > stats.mean_product * (1.0 + kTieSlack);
}

namespace {

MleResult boundary_result(const LikelihoodContext& ctx, int iters) {
    MleResult res;
    res.lambda_hat = 0.0;
    res.loglik_at_hat = loglik(0.0, ctx);
    res.at_boundary = true;
    res.iterations = iters;
    return res;
}

// Bisection on l' over [lo, hi] with l'(lo) > 0 > l'(hi).
MleResult bisect(const LikelihoodContext& ctx, double lo, double hi, double rel_tol) {
    const double upper = ctx.lambda_upper();
    int iters = 0;
    while (hi - lo > rel_tol * hi) {
        if (hi <= upper * kZeroFloor) return boundary_result(ctx, iters);
        if (++iters > kMaxIterations)
            throw ConvergenceError("fit_lambda: bisection exceeded max iterations", lo, hi);
        double mid = 0.5 * (lo + hi);
        if (dloglik(mid, ctx) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    MleResult res;
    res.lambda_hat = 0.5 * (lo + hi);
    res.loglik_at_hat = loglik(res.lambda_hat, ctx);
    res.at_boundary = false;
    res.iterations = iters;
    return res;
}

}  // namespace

MleResult fit_lambda(const LikelihoodContext& ctx, double rel_tol) {
    if (!positivity_screen(ctx.stats())) return boundary_result(ctx, 0);
    // Screen positive forces every column mean > 0, so the interval is open.
    const double upper = ctx.lambda_upper();
    const double edge = upper * kEdge;
    if (dloglik(edge, ctx) <= 0.0) return bisect(ctx, 0.0, edge, rel_tol);

    // l' is still positive at the open right edge. Either l increases all the
    // way (every row attains its minimum in the binding column) or an interior
    // hump hides a sign change; probe a coarse grid for one and keep whichever
    // candidate scores higher.
    MleResult pinned;
    pinned.lambda_hat = edge;
    pinned.loglik_at_hat = loglik(edge, ctx);
    pinned.at_boundary = false;
    pinned.iterations = 1;
    double prev = 0.0;
    for (int g = 1; g < 32; ++g) {
        double x = edge * g / 32.0;
        if (dloglik(x, ctx) <= 0.0) {
            MleResult interior = bisect(ctx, prev, x, rel_tol);
            return interior.loglik_at_hat >= pinned.loglik_at_hat ? interior : pinned;
        }
        prev = x;
    }
    return pinned;
}

MleResult fit_lambda(const CountMatrix& data, double rel_tol) {
    LikelihoodContext ctx(data);
    return fit_lambda(ctx, rel_tol);
}

}  // namespace poislrt
