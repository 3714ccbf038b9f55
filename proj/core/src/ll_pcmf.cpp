#include "pcmf/ll_pcmf.hpp"

#include <algorithm>
#include <cmath>

namespace pcmf {

namespace {

LlState initial_state(const Matrix& x) {
    LlState s;
    const Index n = x.rows(), p = x.cols();
    TruncatedFactors top = truncated_svd(x, 1);
    Vector v0 = top.rank() > 0 ? Vector(top.V.col(0)) : Vector(Vector::Unit(p, 0));
    s.v = v0.replicate(1, n);
    Vector xu = x * v0;
    auto proj = project_sphere(xu);
    s.u = proj ? *proj : Vector(Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));
    return s;
}

Matrix state_rows(const LlState& s) {
    // Observation-wise rows [u_i, v_i^T] used for fusion extraction.
    Matrix r(s.u.size(), 1 + s.v.rows());
    r.col(0) = s.u;
    r.rightCols(s.v.rows()) = s.v.transpose();
    return r;
}

}  // namespace

double llpcmf_objective(const Matrix& x, const EdgeGraph& graph, const LlState& s, double lambda,
                        Norm q) {
    double fit = 0.0;
    for (Index i = 0; i < x.rows(); ++i) {
        fit += 0.5 * (x.row(i).transpose() - s.u(i) * s.v.col(i)).squaredNorm();
    }
    double pen = 0.0;
    for (size_t l = 0; l < graph.edges.size(); ++l) {
        const auto [i, j] = graph.edges[l];
        const double w = graph.weights[l];
        pen += w * std::abs(s.u(i) - s.u(j));
        Vector dv = s.v.col(i) - s.v.col(j);
        switch (q) {
            case Norm::L1: pen += w * dv.lpNorm<1>(); break;
            case Norm::L2: pen += w * dv.norm(); break;
            case Norm::Linf: pen += w * dv.lpNorm<Eigen::Infinity>(); break;
        }
    }
    return fit + lambda * pen;
}

std::vector<LlPathPoint> llpcmf_fit(const Matrix& x, const EdgeGraph& graph,
                                    const LambdaPath& path, const AdmmConfig& cfg,
                                    LlReport* report) {
    path.validate();
    require_data_matrix(x, "llpcmf input");
    if (x.rows() != graph.n_nodes) throw InvalidInput("llpcmf: graph/data node mismatch");
    if (count_components(graph) != 1) throw InvalidInput("llpcmf: graph must be connected");

    LlReport rep;
    const double col_scale = std::max(1e-12, std::sqrt(x.squaredNorm() / static_cast<double>(x.size())));
    rep.input_unstandardized = x.colwise().mean().cwiseAbs().maxCoeff() > 1e-6 * col_scale;

    CcSolver solver(graph, cfg);
    LlState s = initial_state(x);
    const Index n = x.rows(), p = x.cols();

    std::vector<LlPathPoint> out;
    out.reserve(path.values.size());
    for (double lambda : path.values) {
        for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
            const double obj_before = llpcmf_objective(x, graph, s, lambda, cfg.q);

            // Score half-step: 1-D fusion of y_u(i) = x_i^T v_i.
            Matrix yu(n, 1);
            for (Index i = 0; i < n; ++i) yu(i, 0) = x.row(i).dot(s.v.col(i));
            Matrix uh = convex_cluster_sub(solver, yu, Matrix(s.u), lambda);
            if (auto proj = project_sphere(uh.col(0))) {
                s.u = *proj;
            } else {
                ++rep.degenerate_projections;
            }

            // Loading half-step: p-D fusion of y_v(i) = u_i x_i.
            Matrix yv = s.u.asDiagonal() * x;
            Matrix vh = convex_cluster_sub(solver, yv, Matrix(s.v.transpose()), lambda);
            for (Index i = 0; i < n; ++i) {
                if (auto proj = project_sphere(vh.row(i).transpose())) {
                    s.v.col(i) = *proj;
                } else {
                    ++rep.degenerate_projections;
                }
            }

            const double obj_after = llpcmf_objective(x, graph, s, lambda, cfg.q);
            ++rep.total_sweeps;
            if (obj_after <= obj_before + 1e-12 * std::max(1.0, obj_before)) ++rep.descent_sweeps;
        }
        LlPathPoint pt;
        pt.lambda = lambda;
        pt.state = s;
        out.push_back(std::move(pt));
    }

    // Labels from the fused row states; the finest path point sets the scale.
    Matrix final_diffs = edge_row_differences(state_rows(out.back().state), graph);
    double scale = median_edge_norm(final_diffs);
    if (scale < 1e-8) scale = std::sqrt(2.0);
    for (auto& pt : out) {
        ClusterAssignment a = extract_assignment(edge_row_differences(state_rows(pt.state), graph),
                                                 graph, kFusionEps, scale, pt.lambda);
        pt.labels = std::move(a.labels);
        pt.n_clusters = a.n_clusters;
    }
    if (report) *report = rep;
    return out;
}

Matrix llpcmf_deflate(const Matrix& x, const LlState& state) {
    if (x.rows() != state.v.cols() || x.cols() != state.v.rows()) {
        throw InvalidInput("llpcmf_deflate: state/data shape mismatch");
    }
    Matrix out = x;
    for (Index i = 0; i < x.rows(); ++i) {
        const double score = x.row(i).dot(state.v.col(i));
        out.row(i) -= score * state.v.col(i).transpose();
    }
    return out;
}

double llpcmf_lambda_max(const Matrix& x, const EdgeGraph& graph, const AdmmConfig& cfg) {
    LlState s = initial_state(x);
    Matrix yu(x.rows(), 1);
    for (Index i = 0; i < x.rows(); ++i) yu(i, 0) = x.row(i).dot(s.v.col(i));
    Matrix yv = s.u.asDiagonal() * x;
    const double lu = find_lambda_max(yu, graph, cfg);
    const double lv = find_lambda_max(yv, graph, cfg);
    return 2.0 * std::max(lu, lv);
}

}  // namespace pcmf
