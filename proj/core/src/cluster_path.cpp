#include "pcmf/cluster_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pcmf {

namespace {

std::vector<int> components_from_edges(Index n, const std::vector<std::pair<Index, Index>>& edges) {
    std::vector<Index> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), Index{0});
    const auto find = [&](Index a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    };
    for (const auto& e : edges) {
        Index a = find(e.first), b = find(e.second);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
    // Component ids ordered by smallest member index.
    std::vector<int> labels(static_cast<size_t>(n), -1);
    int next = 0;
    for (Index i = 0; i < n; ++i) {
        const Index r = find(i);
        if (labels[static_cast<size_t>(r)] < 0) labels[static_cast<size_t>(r)] = next++;
        labels[static_cast<size_t>(i)] = labels[static_cast<size_t>(r)];
    }
    return labels;
}

}  // namespace

double median_edge_norm(const Matrix& edge_diffs) {
    if (edge_diffs.rows() == 0) return 0.0;
    std::vector<double> norms(static_cast<size_t>(edge_diffs.rows()));
    for (Index l = 0; l < edge_diffs.rows(); ++l) norms[static_cast<size_t>(l)] = edge_diffs.row(l).norm();
    std::sort(norms.begin(), norms.end());
    const size_t m = norms.size();
    return (m % 2 == 1) ? norms[m / 2] : 0.5 * (norms[m / 2 - 1] + norms[m / 2]);
}

ClusterAssignment extract_assignment(const Matrix& edge_diffs, const EdgeGraph& graph, double eps,
                                     double scale, double lambda) {
    if (eps <= 0.0) throw InvalidInput("extract_assignment: eps must be positive");
    if (edge_diffs.rows() != graph.n_edges()) {
        throw InvalidInput("extract_assignment: edge difference row count mismatch");
    }
    ClusterAssignment a;
    a.lambda = lambda;
    const double thresh = eps * scale;
    std::vector<std::pair<Index, Index>> fused;
    for (Index l = 0; l < graph.n_edges(); ++l) {
        if (edge_diffs.row(l).norm() <= thresh) {
            a.fused_edges.push_back(l);
            fused.push_back(graph.edges[static_cast<size_t>(l)]);
        }
    }
    a.labels = components_from_edges(graph.n_nodes, fused);
    a.n_clusters = a.labels.empty() ? 0 : 1 + *std::max_element(a.labels.begin(), a.labels.end());
    return a;
}

std::vector<int> Dendrogram::cut(double height) const {
    std::vector<std::pair<Index, Index>> joins;
    // Walk merges with height <= cut height; node ids > n_leaves map back to
    // the smallest leaf in their subtree via a representative table.
    std::vector<Index> rep(static_cast<size_t>(n_leaves) + merges.size());
    std::iota(rep.begin(), rep.end(), Index{0});
    size_t t = 0;
    for (const auto& m : merges) {
        const Index node = n_leaves + static_cast<Index>(t);
        const Index lr = rep[static_cast<size_t>(m.left)];
        const Index rr = rep[static_cast<size_t>(m.right)];
        rep[static_cast<size_t>(node)] = std::min(lr, rr);
        if (m.height <= height) joins.emplace_back(lr, rr);
        ++t;
    }
    return components_from_edges(n_leaves, joins);
}

int Dendrogram::n_clusters_at(double height) const {
    const auto labels = cut(height);
    return labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
}

Dendrogram build_dendrogram(const std::vector<ClusterAssignment>& assignments,
                            const std::vector<Matrix>* states) {
    if (assignments.empty()) throw InvalidInput("build_dendrogram: no assignments");
    for (size_t i = 1; i < assignments.size(); ++i) {
        if (assignments[i].lambda >= assignments[i - 1].lambda) {
            throw InvalidInput("build_dendrogram: assignments must be sorted by decreasing lambda");
        }
    }
    if (states && states->size() != assignments.size()) {
        throw InvalidInput("build_dendrogram: states/assignments length mismatch");
    }

    const Index n = static_cast<Index>(assignments.front().labels.size());
    const int T = static_cast<int>(assignments.size());
    // Reversed order: t = 0 is the smallest lambda (finest partition).
    const auto& rev = [&](int t) -> const ClusterAssignment& {
        return assignments[static_cast<size_t>(T - 1 - t)];
    };

    // Finest units: clusters of the smallest-lambda assignment.
    const auto& finest = rev(0);
    const int m = finest.n_clusters;
    std::vector<std::vector<Index>> unit_members(static_cast<size_t>(m));
    for (Index i = 0; i < n; ++i) {
        unit_members[static_cast<size_t>(finest.labels[static_cast<size_t>(i)])].push_back(i);
    }

    // Majority label of each unit at each path point.
    std::vector<std::vector<int>> unit_label(static_cast<size_t>(T), std::vector<int>(static_cast<size_t>(m)));
    for (int t = 0; t < T; ++t) {
        const auto& labels = rev(t).labels;
        for (int u = 0; u < m; ++u) {
            const auto& members = unit_members[static_cast<size_t>(u)];
            if (members.size() == 1) {
                unit_label[static_cast<size_t>(t)][static_cast<size_t>(u)] =
                    labels[static_cast<size_t>(members[0])];
            } else {
                std::map<int, int> counts;
                for (Index i : members) ++counts[labels[static_cast<size_t>(i)]];
                int best = -1, best_count = -1;
                for (const auto& [lab, c] : counts) {
                    if (c > best_count) {
                        best = lab;
                        best_count = c;
                    }
                }
                unit_label[static_cast<size_t>(t)][static_cast<size_t>(u)] = best;
            }
        }
    }

    // Stable onset per unit pair: first t where the pair is co-clustered and
    // remains co-clustered in at least half of the points from t upward.
    struct PairOnset {
        int t;
        int a, b;
    };
    std::vector<PairOnset> onsets;
    std::vector<char> co(static_cast<size_t>(T));
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            for (int t = 0; t < T; ++t) {
                co[static_cast<size_t>(t)] =
                    unit_label[static_cast<size_t>(t)][static_cast<size_t>(a)] ==
                    unit_label[static_cast<size_t>(t)][static_cast<size_t>(b)];
            }
            int suffix = 0;
            int onset = -1;
            for (int t = T - 1; t >= 0; --t) {
                suffix += co[static_cast<size_t>(t)];
                if (co[static_cast<size_t>(t)] && 2 * suffix >= (T - t)) onset = t;
            }
            if (onset >= 0) onsets.push_back({onset, a, b});
        }
    }
    std::sort(onsets.begin(), onsets.end(), [](const PairOnset& x, const PairOnset& y) {
        if (x.t != y.t) return x.t < y.t;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    Dendrogram dg;
    dg.n_leaves = n;

    // Active tree node per observation set; start with leaves, pre-merging
    // multi-member units at the smallest lambda.
    std::vector<int> unit_node(static_cast<size_t>(m));

    const auto centroid_at = [&](int t, const std::vector<Index>& members) -> Vector {
        if (!states) return Vector();
        const Matrix& s = (*states)[static_cast<size_t>(T - 1 - t)];
        Vector c = Vector::Zero(s.cols());
        for (Index i : members) c += s.row(i).transpose();
        return c / static_cast<double>(members.size());
    };

    std::vector<std::vector<Index>> comp_members(static_cast<size_t>(m));
    for (int u = 0; u < m; ++u) comp_members[static_cast<size_t>(u)] = unit_members[static_cast<size_t>(u)];

    const double lambda_finest = rev(0).lambda;
    for (int u = 0; u < m; ++u) {
        const auto& members = unit_members[static_cast<size_t>(u)];
        int node = static_cast<int>(members[0]);
        std::vector<Index> acc = {members[0]};
        for (size_t i = 1; i < members.size(); ++i) {
            acc.push_back(members[i]);
            Dendrogram::Merge mg;
            mg.left = node;
            mg.right = static_cast<int>(members[i]);
            mg.height = lambda_finest;
            mg.centroid = centroid_at(0, acc);
            node = static_cast<int>(n) + static_cast<int>(dg.merges.size());
            dg.merges.push_back(std::move(mg));
        }
        unit_node[static_cast<size_t>(u)] = node;
    }

    // Union-find over units with component -> tree node tracking.
    std::vector<int> parent(static_cast<size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    };

    for (const auto& po : onsets) {
        int ra = find(po.a), rb = find(po.b);
        if (ra == rb) continue;
        if (rb < ra) std::swap(ra, rb);
        Dendrogram::Merge mg;
        mg.left = unit_node[static_cast<size_t>(ra)];
        mg.right = unit_node[static_cast<size_t>(rb)];
        mg.height = rev(po.t).lambda;
        std::vector<Index> members = comp_members[static_cast<size_t>(ra)];
        members.insert(members.end(), comp_members[static_cast<size_t>(rb)].begin(),
                       comp_members[static_cast<size_t>(rb)].end());
        mg.centroid = centroid_at(po.t, members);
        const int node = static_cast<int>(n) + static_cast<int>(dg.merges.size());
        dg.merges.push_back(std::move(mg));
        parent[static_cast<size_t>(rb)] = ra;
        unit_node[static_cast<size_t>(ra)] = node;
        comp_members[static_cast<size_t>(ra)] = std::move(members);
    }

    dg.reached_root = static_cast<Index>(dg.merges.size()) == n - 1;
    return dg;
}

namespace {

// Prints "subtree:branch" where branch = height(parent) - height(node).
void newick_node(const Dendrogram& d, int node, double parent_height, std::ostringstream& os) {
    const int n = static_cast<int>(d.n_leaves);
    if (node < n) {
        os << node << ":" << std::max(0.0, parent_height);
        return;
    }
    const auto& m = d.merges[static_cast<size_t>(node - n)];
    os << "(";
    newick_node(d, m.left, m.height, os);
    os << ",";
    newick_node(d, m.right, m.height, os);
    os << "):" << std::max(0.0, parent_height - m.height);
}

std::vector<int> dendrogram_roots(const Dendrogram& d) {
    const int total = static_cast<int>(d.n_leaves) + static_cast<int>(d.merges.size());
    std::vector<bool> is_child(static_cast<size_t>(total), false);
    for (const auto& m : d.merges) {
        is_child[static_cast<size_t>(m.left)] = true;
        is_child[static_cast<size_t>(m.right)] = true;
    }
    std::vector<int> roots;
    for (int v = 0; v < total; ++v) {
        if (!is_child[static_cast<size_t>(v)]) roots.push_back(v);
    }
    return roots;
}

double node_height(const Dendrogram& d, int node) {
    return node < static_cast<int>(d.n_leaves)
               ? 0.0
               : d.merges[static_cast<size_t>(node - static_cast<int>(d.n_leaves))].height;
}

}  // namespace

std::string to_newick(const Dendrogram& d) {
    std::ostringstream os;
    os.precision(17);
    const auto roots = dendrogram_roots(d);
    if (roots.size() == 1) {
        const int r = roots[0];
        if (r < static_cast<int>(d.n_leaves)) {
            os << r << ":0;";
            return os.str();
        }
        const auto& m = d.merges[static_cast<size_t>(r - static_cast<int>(d.n_leaves))];
        os << "(";
        newick_node(d, m.left, m.height, os);
        os << ",";
        newick_node(d, m.right, m.height, os);
        os << ");";
        return os.str();
    }
    // Forest: join roots under a zero-length pseudo-root.
    os << "(";
    for (size_t i = 0; i < roots.size(); ++i) {
        if (i > 0) os << ",";
        const int r = roots[i];
        if (r < static_cast<int>(d.n_leaves)) {
            os << r << ":0";
        } else {
            const auto& m = d.merges[static_cast<size_t>(r - static_cast<int>(d.n_leaves))];
            os << "(";
            newick_node(d, m.left, m.height, os);
            os << ",";
            newick_node(d, m.right, m.height, os);
            os << "):0";
        }
    }
    os << ");";
    return os.str();
}

std::string dendrogram_to_json(const Dendrogram& d) {
    nlohmann::json j;
    j["n_leaves"] = d.n_leaves;
    j["reached_root"] = d.reached_root;
    nlohmann::json merges = nlohmann::json::array();
    for (const auto& m : d.merges) {
        nlohmann::json jm;
        jm["left"] = m.left;
        jm["right"] = m.right;
        jm["height"] = m.height;
        if (m.centroid.size() > 0) {
            jm["centroid"] = std::vector<double>(m.centroid.data(), m.centroid.data() + m.centroid.size());
        }
        merges.push_back(std::move(jm));
    }
    j["merges"] = std::move(merges);
    nlohmann::json roots = nlohmann::json::array();
    for (int r : dendrogram_roots(d)) {
        roots.push_back(nlohmann::json{{"node", r}, {"height", node_height(d, r)}});
    }
    j["roots"] = std::move(roots);
    return j.dump(2);
}

double bic_score(const std::vector<int>& labels, int n_clusters, const Matrix& scores) {
    const Index n = scores.rows();
    const Index d = scores.cols();
    if (static_cast<Index>(labels.size()) != n) throw InvalidInput("bic_score: label count mismatch");

    Matrix means = Matrix::Zero(n_clusters, d);
    std::vector<double> counts(static_cast<size_t>(n_clusters), 0.0);
    for (Index i = 0; i < n; ++i) {
        means.row(labels[static_cast<size_t>(i)]) += scores.row(i);
        counts[static_cast<size_t>(labels[static_cast<size_t>(i)])] += 1.0;
    }
    for (int k = 0; k < n_clusters; ++k) {
        if (counts[static_cast<size_t>(k)] > 0) means.row(k) /= counts[static_cast<size_t>(k)];
    }
    double sse = 0.0;
    for (Index i = 0; i < n; ++i) {
        sse += (scores.row(i) - means.row(labels[static_cast<size_t>(i)])).squaredNorm();
    }
    const double nd = static_cast<double>(n) * static_cast<double>(d);
    const double floor = 1e-12 * std::max(1.0, scores.squaredNorm() / nd);
    const double sigma2 = std::max(sse / nd, floor);
    const double neg2ll = nd * (std::log(2.0 * M_PI * sigma2) + 1.0);
    return neg2ll + std::log(static_cast<double>(n)) * static_cast<double>(n_clusters) *
                        static_cast<double>(d);
}

int select_model(const std::vector<ClusterAssignment>& assignments, const Matrix& scores,
                 std::vector<double>* bic_trace) {
    if (assignments.empty()) throw InvalidInput("select_model: no assignments");
    int current = 0;
    double current_bic = bic_score(assignments[0].labels, assignments[0].n_clusters, scores);
    if (bic_trace) bic_trace->assign(assignments.size(), std::numeric_limits<double>::quiet_NaN());
    if (bic_trace) (*bic_trace)[0] = current_bic;
    for (size_t i = 1; i < assignments.size(); ++i) {
        if (assignments[i].n_clusters <= assignments[static_cast<size_t>(current)].n_clusters) continue;
        const double b = bic_score(assignments[i].labels, assignments[i].n_clusters, scores);
        if (bic_trace) (*bic_trace)[i] = b;
        if (b < current_bic) {
            current = static_cast<int>(i);
            current_bic = b;
        }
    }
    return current;
}

namespace {

// Hungarian algorithm (potentials + augmenting paths) for a square min-cost
// assignment; O(n^3).
double min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<double> u(static_cast<size_t>(n + 1)), v(static_cast<size_t>(n + 1));
    std::vector<int> p(static_cast<size_t>(n + 1)), way(static_cast<size_t>(n + 1));
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n + 1), std::numeric_limits<double>::infinity());
        std::vector<bool> used(static_cast<size_t>(n + 1), false);
        do {
            used[static_cast<size_t>(j0)] = true;
            const int i0 = p[static_cast<size_t>(j0)];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const double cur = cost[static_cast<size_t>(i0 - 1)][static_cast<size_t>(j - 1)] -
                                   u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        if (p[static_cast<size_t>(j)] > 0) {
            total += cost[static_cast<size_t>(p[static_cast<size_t>(j)] - 1)][static_cast<size_t>(j - 1)];
        }
    }
    return total;
}

std::vector<int> normalize_labels(const std::vector<int>& labels, int* k_out) {
    std::map<int, int> remap;
    std::vector<int> out(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
        out[i] = it->second;
    }
    *k_out = static_cast<int>(remap.size());
    return out;
}

}  // namespace

double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.empty() || truth.empty()) throw InvalidInput("clustering_accuracy: empty labels");
    if (pred.size() != truth.size()) throw InvalidInput("clustering_accuracy: length mismatch");
    int kp = 0, kt = 0;
    const auto p = normalize_labels(pred, &kp);
    const auto t = normalize_labels(truth, &kt);
    const int k = std::max(kp, kt);
    std::vector<std::vector<double>> confusion(static_cast<size_t>(k),
                                               std::vector<double>(static_cast<size_t>(k), 0.0));
    for (size_t i = 0; i < p.size(); ++i) {
        confusion[static_cast<size_t>(p[i])][static_cast<size_t>(t[i])] += 1.0;
    }
    // Maximize matched counts == minimize negated counts.
    std::vector<std::vector<double>> cost(static_cast<size_t>(k),
                                          std::vector<double>(static_cast<size_t>(k), 0.0));
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            cost[static_cast<size_t>(a)][static_cast<size_t>(b)] = -confusion[static_cast<size_t>(a)][static_cast<size_t>(b)];
        }
    }
    const double matched = -min_cost_assignment(cost);
    return matched / static_cast<double>(p.size());
}

CosineStability cosine_stability(const std::vector<std::vector<Index>>& ids,
                                 const std::vector<Matrix>& coefs) {
    if (ids.size() != coefs.size() || ids.size() < 2) {
        throw InvalidInput("cosine_stability: need >= 2 fits with matching id lists");
    }
    std::vector<double> values;
    for (size_t f = 0; f < ids.size(); ++f) {
        for (size_t g = f + 1; g < ids.size(); ++g) {
            std::map<Index, Index> row_of;
            for (size_t r = 0; r < ids[f].size(); ++r) row_of[ids[f][r]] = static_cast<Index>(r);
            for (size_t r = 0; r < ids[g].size(); ++r) {
                const auto it = row_of.find(ids[g][r]);
                if (it == row_of.end()) continue;
                const Vector a = coefs[f].row(it->second).transpose();
                const Vector b = coefs[g].row(static_cast<Index>(r)).transpose();
                const double na = a.norm(), nb = b.norm();
                if (na < 1e-300 || nb < 1e-300) continue;
                values.push_back(std::abs(a.dot(b)) / (na * nb));
            }
        }
    }
    if (values.empty()) throw InvalidInput("cosine_stability: no shared observations across fits");
    CosineStability out;
    out.n_values = static_cast<Index>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double x : values) ss += (x - out.mean) * (x - out.mean);
    out.sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    return out;
}

}  // namespace pcmf
