#pragma once

#include <Eigen/SparseCore>
#include <utility>
#include <vector>

#include "pcmf/common.hpp"

namespace pcmf {

/// Undirected weighted nearest-neighbor graph over observations. Edges are
/// stored as (i, j) with i < j in lexicographic order; the graph is always
/// connected (disconnected k-NN graphs are repaired with MST bridge edges).
struct EdgeGraph {
    Index n_nodes = 0;
    std::vector<std::pair<Index, Index>> edges;
    std::vector<double> weights;

    Index n_edges() const { return static_cast<Index>(edges.size()); }
};

/// Symmetrized k-nearest-neighbor graph (Euclidean metric on rows, distance
/// ties broken by lower index), augmented to connectivity. Weights start at 1.
EdgeGraph build_knn_graph(const Matrix& x, Index k);

/// Gaussian kernel weights w_ij = exp(-gamma ||x_i - x_j||^2) on the edges.
EdgeGraph apply_rbf_weights(const Matrix& x, EdgeGraph graph, double gamma);

/// Median heuristic: 1 / (2 * median of squared edge distances).
double rbf_auto_gamma(const Matrix& x, const EdgeGraph& graph);

/// Sparse |E| x N incidence operator: row l for edge (i, j) has +1 at i and
/// -1 at j, so (D x) stacks edge-wise row differences.
Eigen::SparseMatrix<double> incidence_matrix(const EdgeGraph& graph);

/// Edge-wise row differences x_i - x_j as an |E| x p matrix.
Matrix edge_row_differences(const Matrix& rows, const EdgeGraph& graph);

/// Number of connected components of the edge set.
int count_components(const EdgeGraph& graph);

}  // namespace pcmf
