#include "pcmf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace pcmf {

namespace {

struct UnionFind {
    std::vector<Index> parent;
    explicit UnionFind(Index n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), Index{0});
    }
    Index find(Index a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    bool unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[static_cast<size_t>(b)] = a;
        return true;
    }
};

Matrix squared_distances(const Matrix& x) {
    const Index n = x.rows();
    Vector sq = x.rowwise().squaredNorm();
    Matrix d2 = -2.0 * x * x.transpose();
    d2.colwise() += sq;
    d2.rowwise() += sq.transpose();
    return d2.cwiseMax(0.0);
}

}  // namespace

EdgeGraph build_knn_graph(const Matrix& x, Index k) {
    require_data_matrix(x, "knn graph input");
    const Index n = x.rows();
    if (k < 1 || k >= n) {
        throw InvalidInput("build_knn_graph: k must satisfy 1 <= k < N (k=" + std::to_string(k) +
                           ", N=" + std::to_string(n) + ")");
    }

    const Matrix d2 = squared_distances(x);
    std::set<std::pair<Index, Index>> edge_set;
    std::vector<Index> order(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) {
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(), [&](Index a, Index b) {
            if (d2(i, a) != d2(i, b)) return d2(i, a) < d2(i, b);
            return a < b;
        });
        Index taken = 0;
        for (Index j : order) {
            if (j == i) continue;
            edge_set.emplace(std::min(i, j), std::max(i, j));
            if (++taken == k) break;
        }
    }

    EdgeGraph g;
    g.n_nodes = n;
    g.edges.assign(edge_set.begin(), edge_set.end());
    g.weights.assign(g.edges.size(), 1.0);

    // Connectivity repair: add the MST edges of the complete Euclidean graph
    // that bridge components of the symmetrized k-NN graph.
    UnionFind uf(n);
    for (const auto& e : g.edges) uf.unite(e.first, e.second);
    bool connected = true;
    for (Index i = 1; i < n; ++i) {
        if (uf.find(i) != uf.find(0)) {
            connected = false;
            break;
        }
    }
    if (!connected) {
        // Prim on the full distance matrix; ties broken by lower index.
        std::vector<bool> in_tree(static_cast<size_t>(n), false);
        std::vector<double> best(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
        std::vector<Index> from(static_cast<size_t>(n), 0);
        in_tree[0] = true;
        for (Index j = 1; j < n; ++j) {
            best[static_cast<size_t>(j)] = d2(0, j);
        }
        for (Index step = 1; step < n; ++step) {
            Index pick = -1;
            double pick_d = std::numeric_limits<double>::infinity();
            for (Index j = 0; j < n; ++j) {
                if (!in_tree[static_cast<size_t>(j)] && best[static_cast<size_t>(j)] < pick_d) {
                    pick_d = best[static_cast<size_t>(j)];
                    pick = j;
                }
            }
            in_tree[static_cast<size_t>(pick)] = true;
            const Index a = std::min(pick, from[static_cast<size_t>(pick)]);
            const Index b = std::max(pick, from[static_cast<size_t>(pick)]);
            if (uf.unite(a, b)) {
                edge_set.emplace(a, b);
            }
            for (Index j = 0; j < n; ++j) {
                if (!in_tree[static_cast<size_t>(j)] && d2(pick, j) < best[static_cast<size_t>(j)]) {
                    best[static_cast<size_t>(j)] = d2(pick, j);
                    from[static_cast<size_t>(j)] = pick;
                }
            }
        }
        g.edges.assign(edge_set.begin(), edge_set.end());
        g.weights.assign(g.edges.size(), 1.0);
    }
    return g;
}

EdgeGraph apply_rbf_weights(const Matrix& x, EdgeGraph graph, double gamma) {
    if (gamma <= 0.0) throw InvalidInput("apply_rbf_weights: gamma must be positive");
    if (x.rows() != graph.n_nodes) throw InvalidInput("apply_rbf_weights: graph/data node mismatch");
    for (size_t l = 0; l < graph.edges.size(); ++l) {
        const auto [i, j] = graph.edges[l];
        const double d2 = (x.row(i) - x.row(j)).squaredNorm();
        graph.weights[l] = std::exp(-gamma * d2);
    }
    return graph;
}

double rbf_auto_gamma(const Matrix& x, const EdgeGraph& graph) {
    if (graph.n_edges() == 0) throw InvalidInput("rbf_auto_gamma: empty graph");
    std::vector<double> d2(graph.edges.size());
    for (size_t l = 0; l < graph.edges.size(); ++l) {
        const auto [i, j] = graph.edges[l];
        d2[l] = (x.row(i) - x.row(j)).squaredNorm();
    }
    std::sort(d2.begin(), d2.end());
    const size_t m = d2.size();
    const double median = (m % 2 == 1) ? d2[m / 2] : 0.5 * (d2[m / 2 - 1] + d2[m / 2]);
    if (median < 1e-24) return 1.0;  // duplicate-heavy data; weights stay ~1
    return 1.0 / (2.0 * median);
}

Eigen::SparseMatrix<double> incidence_matrix(const EdgeGraph& graph) {
    Eigen::SparseMatrix<double> d(graph.n_edges(), graph.n_nodes);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * graph.edges.size());
    for (size_t l = 0; l < graph.edges.size(); ++l) {
        trip.emplace_back(static_cast<int>(l), static_cast<int>(graph.edges[l].first), 1.0);
        trip.emplace_back(static_cast<int>(l), static_cast<int>(graph.edges[l].second), -1.0);
    }
    d.setFromTriplets(trip.begin(), trip.end());
    return d;
}

Matrix edge_row_differences(const Matrix& rows, const EdgeGraph& graph) {
    if (rows.rows() != graph.n_nodes) throw InvalidInput("edge_row_differences: node count mismatch");
    Matrix out(graph.n_edges(), rows.cols());
    for (Index l = 0; l < graph.n_edges(); ++l) {
        const auto& e = graph.edges[static_cast<size_t>(l)];
        out.row(l) = rows.row(e.first) - rows.row(e.second);
    }
    return out;
}

int count_components(const EdgeGraph& graph) {
    UnionFind uf(graph.n_nodes);
    for (const auto& e : graph.edges) uf.unite(e.first, e.second);
    std::set<Index> roots;
    for (Index i = 0; i < graph.n_nodes; ++i) roots.insert(uf.find(i));
    return static_cast<int>(roots.size());
}

}  // namespace pcmf
