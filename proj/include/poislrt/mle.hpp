#ifndef POISLRT_MLE_HPP
#define POISLRT_MLE_HPP

#include "poislrt/likelihood.hpp"
#include "poislrt/model.hpp"

namespace poislrt {

struct MleResult {
    double lambda_hat = 0.0;
    double loglik_at_hat = 0.0;
    bool at_boundary = true;  // true iff lambda_hat == 0
    int iterations = 0;
    bool converged = true;
};

// Sign of l'(0): true iff the mixed sample moment exceeds the product of the
// column means. False whenever that product is zero.
bool positivity_screen(const SufficientStats& stats);

// Constrained MLE of lambda on [0, min_j col_mean). When the screen is
// negative the boundary value 0 is returned immediately (the sign of l'(0)
// decides the boundary; for rare small-sample datasets the surface is
// multimodal and a higher mode can exist elsewhere — the boundary rule is
// kept regardless, matching the test's conditioning convention). Otherwise a
// bisection bracket on l' — positive at 0, negative approaching the upper
// bound — is shrunk until its relative width falls below rel_tol.
//
// If l' stays positive all the way to the upper bound (possible when every
// row attains its minimum in the binding column) the supremum is at the open
// right edge; the estimate is then pinned just inside it.
MleResult fit_lambda(const CountMatrix& data, double rel_tol = 1e-10);

// Same, reusing an already-built context (hot path for the Monte Carlo runs).
MleResult fit_lambda(const LikelihoodContext& ctx, double rel_tol = 1e-10);

}  // namespace poislrt

#endif
