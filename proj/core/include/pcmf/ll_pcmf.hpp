#pragma once

#include <vector>

#include "pcmf/cluster_path.hpp"
#include "pcmf/convex_cluster.hpp"

namespace pcmf {

/// Rank-1 locally linear state: one shared unit score vector and one unit
/// loading column per observation.
struct LlState {
    Vector u;  // N, ||u|| = 1
    Matrix v;  // p x N, unit columns
};

struct LlPathPoint {
    double lambda = 0.0;
    LlState state;
    std::vector<int> labels;
    int n_clusters = 0;
};

struct LlReport {
    int degenerate_projections = 0;
    int descent_sweeps = 0;  // outer sweeps with non-increasing total objective
    int total_sweeps = 0;
    bool input_unstandardized = false;
};

/// Objective with unit-norm factors held as given: sum_i 1/2 ||x_i - u_i v_i||^2
/// + lambda (sum w |u_i - u_j| + sum w ||v_i - v_j||_q).
double llpcmf_objective(const Matrix& x, const EdgeGraph& graph, const LlState& s, double lambda,
                        Norm q);

/// Penalized alternating least squares along the path: each half step is a
/// constrained convex clustering problem (scores in 1-D, loadings in p-D)
/// followed by sphere projection. Expects centered, scaled input.
std::vector<LlPathPoint> llpcmf_fit(const Matrix& x, const EdgeGraph& graph,
                                    const LambdaPath& path, const AdmmConfig& cfg,
                                    LlReport* report = nullptr);

/// Per-observation projection deflation: x_i <- x_i - (x_i^T v_i) v_i.
Matrix llpcmf_deflate(const Matrix& x, const LlState& state);

/// Verified full-fusion penalty for the PALS subproblems, derived from the
/// initial update targets.
double llpcmf_lambda_max(const Matrix& x, const EdgeGraph& graph, const AdmmConfig& cfg);

}  // namespace pcmf
