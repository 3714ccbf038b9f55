#pragma once

#include <utility>
#include <vector>

#include "pcmf/cluster_path.hpp"
#include "pcmf/convex_cluster.hpp"

namespace pcmf {

/// Paired views over the same observations; both centered (and usually
/// scaled) before fitting.
struct MultiviewData {
    Matrix x;  // N x p_x
    Matrix y;  // N x p_y

    void validate() const;
};

/// Per-observation canonical direction pairs, one unit row per observation.
struct P3caState {
    Matrix u;  // N x p_x
    Matrix v;  // N x p_y
};

struct P3caPathPoint {
    double lambda = 0.0;
    P3caState state;
    std::vector<int> labels;
    int n_clusters = 0;
};

struct P3caReport {
    int degenerate_projections = 0;
    int pair_sign_flips = 0;
};

/// Alternating constrained convex clustering on canonical directions along a
/// decreasing path. Each half-step clusters the relaxed targets
/// x~_i = x_i (y_i^T v_i) (resp. y~_i = y_i (x_i^T u_i)) and projects rows
/// back to the unit sphere; (u_i, v_i) pairs are sign-aligned after every
/// sweep so per-observation flips cannot fragment clusters.
std::vector<P3caPathPoint> p3ca_fit(const MultiviewData& data, const EdgeGraph& graph,
                                    const LambdaPath& path, const AdmmConfig& cfg,
                                    P3caReport* report = nullptr);

/// score_x(i) = x_i^T u_i and score_y(i) = y_i^T v_i.
std::pair<Vector, Vector> p3ca_scores(const P3caState& state, const MultiviewData& data);

/// Verified full-fusion penalty from the initial update targets.
double p3ca_lambda_max(const MultiviewData& data, const EdgeGraph& graph, const AdmmConfig& cfg);

}  // namespace pcmf
