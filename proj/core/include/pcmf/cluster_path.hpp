#pragma once

#include <string>
#include <vector>

#include "pcmf/graph.hpp"

namespace pcmf {

/// Clusters at one path point: connected components of the fused edge set.
struct ClusterAssignment {
    double lambda = 0.0;
    std::vector<int> labels;         // component ids by smallest member index
    int n_clusters = 0;
    std::vector<Index> fused_edges;  // indices into graph.edges
};

/// Default relative fusion tolerance for label extraction.
inline constexpr double kFusionEps = 1e-3;

/// Edge l is fused iff ||edge_diffs.row(l)|| <= eps * scale; labels are the
/// connected components over fused edges, ids ordered by smallest member.
ClusterAssignment extract_assignment(const Matrix& edge_diffs, const EdgeGraph& graph, double eps,
                                     double scale, double lambda);

/// Median edge-difference norm, the scale reference for fusion thresholds.
double median_edge_norm(const Matrix& edge_diffs);

/// Merge tree over observations with lambda-valued heights. Leaves are node
/// ids 0..N-1; merge t creates node N+t.
struct Dendrogram {
    struct Merge {
        int left = 0;
        int right = 0;
        double height = 0.0;
        Vector centroid;  // embedding summary of the merged cluster (may be empty)
    };

    Index n_leaves = 0;
    std::vector<Merge> merges;
    bool reached_root = false;

    /// Labels induced by cutting just below the given height.
    std::vector<int> cut(double height) const;
    int n_clusters_at(double height) const;
};

/// Builds the merge tree from assignments sorted by decreasing lambda (the
/// solve order). Cluster-switching observations are smoothed by a stable-onset
/// rule: a pair merges at the first lambda where it is co-clustered and stays
/// co-clustered in at least half of the remaining (larger-lambda) path points.
/// `states`, when given, is aligned with `assignments` and supplies N x d
/// embedding rows for merge-node centroids.
Dendrogram build_dendrogram(const std::vector<ClusterAssignment>& assignments,
                            const std::vector<Matrix>* states = nullptr);

std::string to_newick(const Dendrogram& d);
std::string dendrogram_to_json(const Dendrogram& d);

/// BIC with a shared spherical Gaussian residual model around per-cluster
/// means in the score space; parameter count is k * dim(score).
double bic_score(const std::vector<int>& labels, int n_clusters, const Matrix& scores);

/// Walks the path from one cluster toward more, accepting a split only when
/// it lowers the BIC; returns the index of the last accepted assignment.
int select_model(const std::vector<ClusterAssignment>& assignments, const Matrix& scores,
                 std::vector<double>* bic_trace = nullptr);

/// Clustering accuracy: best one-to-one matching of predicted to true labels
/// (optimal assignment on the confusion matrix).
double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

struct CosineStability {
    double mean = 0.0;
    double sd = 0.0;
    Index n_values = 0;
};

/// Mean +/- sd of |cosine| between matched per-observation coefficient rows
/// across repeated fits; ids[f] holds the observation ids of fit f and
/// coefs[f] the corresponding rows.
CosineStability cosine_stability(const std::vector<std::vector<Index>>& ids,
                                 const std::vector<Matrix>& coefs);

}  // namespace pcmf
