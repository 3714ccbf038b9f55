#include "pcmf/p3ca.hpp"

#include <algorithm>
#include <cmath>

namespace pcmf {

void MultiviewData::validate() const {
    require_data_matrix(x, "multiview X");
    require_data_matrix(y, "multiview Y");
    if (x.rows() != y.rows()) {
        throw InvalidInput("multiview views must have the same number of observations");
    }
}

namespace {

// Row-replicated view mean per Algorithm-2 initialization; centered views
// have a vanishing mean, in which case the leading right singular vector
// seeds the directions instead.
Vector initial_direction(const Matrix& view) {
    Vector mean = view.colwise().mean();
    const double scale = std::max(1e-12, std::sqrt(view.squaredNorm() / static_cast<double>(view.size())));
    if (mean.norm() > 1e-8 * scale) return mean / mean.norm();
    TruncatedFactors top = truncated_svd(view, 1);
    if (top.rank() > 0) return top.V.col(0);
    return Vector::Unit(view.cols(), 0);
}

Matrix combined_rows(const P3caState& s) {
    Matrix r(s.u.rows(), s.u.cols() + s.v.cols());
    r.leftCols(s.u.cols()) = s.u;
    r.rightCols(s.v.cols()) = s.v;
    return r;
}

}  // namespace

std::vector<P3caPathPoint> p3ca_fit(const MultiviewData& data, const EdgeGraph& graph,
                                    const LambdaPath& path, const AdmmConfig& cfg,
                                    P3caReport* report) {
    path.validate();
    data.validate();
    const Index n = data.x.rows();
    if (n != graph.n_nodes) throw InvalidInput("p3ca: graph/data node mismatch");
    if (count_components(graph) != 1) throw InvalidInput("p3ca: graph must be connected");

    P3caReport rep;
    CcSolver solver(graph, cfg);

    P3caState s;
    s.u = initial_direction(data.x).transpose().replicate(n, 1);
    s.v = initial_direction(data.y).transpose().replicate(n, 1);

    std::vector<P3caPathPoint> out;
    out.reserve(path.values.size());
    for (double lambda : path.values) {
        for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
            // x~_i = Sigma_i v_i with Sigma_i = outer(x_i, y_i).
            Vector yv(n);
            for (Index i = 0; i < n; ++i) yv(i) = data.y.row(i).dot(s.v.row(i));
            Matrix xt = yv.asDiagonal() * data.x;
            Matrix uh = convex_cluster_sub(solver, xt, s.u, lambda);
            for (Index i = 0; i < n; ++i) {
                if (auto proj = project_sphere(uh.row(i).transpose())) {
                    s.u.row(i) = proj->transpose();
                } else {
                    ++rep.degenerate_projections;
                }
            }

            Vector xu(n);
            for (Index i = 0; i < n; ++i) xu(i) = data.x.row(i).dot(s.u.row(i));
            Matrix yt = xu.asDiagonal() * data.y;
            Matrix vh = convex_cluster_sub(solver, yt, s.v, lambda);
            for (Index i = 0; i < n; ++i) {
                if (auto proj = project_sphere(vh.row(i).transpose())) {
                    s.v.row(i) = proj->transpose();
                } else {
                    ++rep.degenerate_projections;
                }
            }

            // (u_i, v_i) -> (-u_i, -v_i) leaves every score product invariant;
            // align pairs with the mean direction so the penalty sees coherent
            // signs within clusters.
            Vector ubar = s.u.colwise().mean();
            if (ubar.norm() > 1e-9) {
                for (Index i = 0; i < n; ++i) {
                    if (s.u.row(i).dot(ubar.transpose()) < 0.0) {
                        s.u.row(i) = -s.u.row(i);
                        s.v.row(i) = -s.v.row(i);
                        ++rep.pair_sign_flips;
                    }
                }
                ubar = s.u.colwise().mean();
                Index imax = 0;
                ubar.cwiseAbs().maxCoeff(&imax);
                if (ubar(imax) < 0.0) {
                    s.u = -s.u;
                    s.v = -s.v;
                }
            }
        }
        P3caPathPoint pt;
        pt.lambda = lambda;
        pt.state = s;
        out.push_back(std::move(pt));
    }

    Matrix final_diffs = edge_row_differences(combined_rows(out.back().state), graph);
    double scale = median_edge_norm(final_diffs);
    if (scale < 1e-8) scale = 2.0;  // combined unit-pair rows
    for (auto& pt : out) {
        ClusterAssignment a = extract_assignment(edge_row_differences(combined_rows(pt.state), graph),
                                                 graph, kFusionEps, scale, pt.lambda);
        pt.labels = std::move(a.labels);
        pt.n_clusters = a.n_clusters;
    }
    if (report) *report = rep;
    return out;
}

std::pair<Vector, Vector> p3ca_scores(const P3caState& state, const MultiviewData& data) {
    const Index n = data.x.rows();
    if (state.u.rows() != n || state.v.rows() != n) {
        throw InvalidInput("p3ca_scores: state/data shape mismatch");
    }
    Vector sx(n), sy(n);
    for (Index i = 0; i < n; ++i) {
        sx(i) = data.x.row(i).dot(state.u.row(i));
        sy(i) = data.y.row(i).dot(state.v.row(i));
    }
    return {sx, sy};
}

double p3ca_lambda_max(const MultiviewData& data, const EdgeGraph& graph, const AdmmConfig& cfg) {
    data.validate();
    const Index n = data.x.rows();
    Vector u0 = initial_direction(data.x);
    Vector v0 = initial_direction(data.y);
    Vector yv(n), xu(n);
    for (Index i = 0; i < n; ++i) {
        yv(i) = data.y.row(i).dot(v0);
        xu(i) = data.x.row(i).dot(u0);
    }
    Matrix xt = yv.asDiagonal() * data.x;
    Matrix yt = xu.asDiagonal() * data.y;
    const double lx = find_lambda_max(xt, graph, cfg);
    const double ly = find_lambda_max(yt, graph, cfg);
    return 2.0 * std::max(lx, ly);
}

}  // namespace pcmf
