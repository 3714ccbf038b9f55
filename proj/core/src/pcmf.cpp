#include "pcmf/pcmf.hpp"

#include <algorithm>
#include <cmath>

namespace pcmf {

namespace {

Matrix pcmf_system_matrix(const Eigen::SparseMatrix<double>& d, double rho) {
    Matrix a = Matrix(d.transpose() * d) * rho;
    a.diagonal().array() += 1.0 + rho;
    return a;
}

}  // namespace

PcmfSolver::PcmfSolver(const Matrix& x, const EdgeGraph& graph, Index rank, const AdmmConfig& cfg)
    : x_(&x),
      graph_(&graph),
      rank_(rank),
      cfg_(cfg),
      d_(incidence_matrix(graph)),
      dt_(d_.transpose()),
      chol_(pcmf_system_matrix(d_, cfg.rho)) {
    cfg_.validate();
    require_data_matrix(x, "pcmf input");
    if (rank < 1 || rank > std::min(x.rows(), x.cols())) {
        throw InvalidInput("pcmf: rank " + std::to_string(rank) + " out of range for " +
                           std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + " data");
    }
    if (x.rows() != graph.n_nodes) throw InvalidInput("pcmf: graph/data node mismatch");
    if (count_components(graph) != 1) throw InvalidInput("pcmf: graph must be connected");

    const double col_scale = std::max(1e-12, std::sqrt(x.squaredNorm() / static_cast<double>(x.size())));
    input_uncentered_ = x.colwise().mean().cwiseAbs().maxCoeff() > 1e-8 * col_scale;

    state_.g = d_ * x;
    state_.z1 = state_.g;
    state_.xhat = Matrix::Zero(x.rows(), x.cols());
    state_.xhat.rowwise() += x.colwise().mean();
    state_.z2 = state_.xhat;
    // The mean-replicated start is rank 1; remaining directions come from the
    // data spectrum so every requested component is seeded.
    state_.factors = truncated_svd(x, rank_);
    fusion_scale_ = median_edge_norm(state_.g);
    if (fusion_scale_ <= 0.0) fusion_scale_ = 1.0;
}

void PcmfSolver::set_factor_prior(const Matrix* v_prior, double weight) {
    if (v_prior && (v_prior->rows() != x_->cols() || v_prior->cols() < 1)) {
        throw InvalidInput("pcmf factor prior: shape mismatch");
    }
    v_prior_ = v_prior;
    prior_weight_ = weight;
}

void PcmfSolver::update_factors() {
    const Matrix w = state_.xhat + state_.z2;
    if (!v_prior_ || prior_weight_ <= 0.0) {
        TruncatedFactors f = truncated_svd(w, rank_);
        if (f.rank() < rank_ && f.rank() < std::min(w.rows(), w.cols())) ++rank_shrink_events_;
        state_.factors = std::move(f);
        return;
    }
    // Tethered factor step: augment W with prior rows so the chosen loading
    // subspace is pulled toward the shared prior, then project W exactly.
    const Index rp = v_prior_->cols();
    Vector s_pad(rp);
    const double fallback = std::max(1e-12, w.norm() / std::sqrt(static_cast<double>(std::max<Index>(rank_, 1))));
    for (Index j = 0; j < rp; ++j) {
        if (j < state_.factors.rank()) {
            s_pad(j) = state_.factors.S(j);
        } else if (state_.factors.rank() > 0) {
            s_pad(j) = state_.factors.S(state_.factors.rank() - 1);
        } else {
            s_pad(j) = fallback;
        }
    }
    Matrix aug(w.rows() + rp, w.cols());
    aug.topRows(w.rows()) = w;
    aug.bottomRows(rp) = prior_weight_ * s_pad.asDiagonal() * v_prior_->transpose();

    TruncatedFactors sub = truncated_svd(aug, rank_);
    if (sub.rank() == 0) {
        state_.factors = sub;
        state_.factors.U.resize(w.rows(), 0);
        return;
    }
    Matrix b = w * sub.V;  // N x r'
    TruncatedFactors thin = truncated_svd(b, sub.rank());
    TruncatedFactors f;
    f.U = thin.U;
    f.S = thin.S;
    f.V = sub.V * thin.V;
    fix_factor_signs(f.U, f.V);
    if (f.rank() < rank_ && f.rank() < std::min(w.rows(), w.cols())) ++rank_shrink_events_;
    state_.factors = std::move(f);
}

void PcmfSolver::step(double lambda) {
    const double rho = cfg_.rho;
    Matrix recon = state_.factors.rank() > 0 ? state_.factors.reconstruct()
                                             : Matrix::Zero(x_->rows(), x_->cols());
    state_.xhat = chol_.solve(*x_ + rho * (dt_ * (state_.g - state_.z1)) + rho * (recon - state_.z2));
    Matrix dx = d_ * state_.xhat;
    state_.g = dx + state_.z1;
    if (lambda > 0.0) {
        std::vector<double> tau(graph_->weights.size());
        for (size_t l = 0; l < tau.size(); ++l) tau[l] = lambda * graph_->weights[l] / rho;
        prox_rows(state_.g, cfg_.q, tau);
    }
    update_factors();
    state_.z1 += dx - state_.g;
    state_.z2 += state_.xhat - (state_.factors.rank() > 0 ? state_.factors.reconstruct()
                                                          : Matrix::Zero(x_->rows(), x_->cols()));
    if (!state_.xhat.allFinite() || !state_.g.allFinite() || !state_.z2.allFinite()) {
        throw NumericalError("pcmf sweep produced non-finite values at lambda=" +
                             std::to_string(lambda));
    }
}

SweepReport PcmfSolver::run(double lambda, int max_sweeps) {
    SweepReport rep;
    Matrix g_prev;
    for (int k = 0; k < max_sweeps; ++k) {
        g_prev = state_.g;
        step(lambda);
        ++rep.sweeps;
        Matrix dx = d_ * state_.xhat;
        const double fusion_gap = (dx - state_.g).norm();
        const double factor_gap = (state_.xhat - state_.factors.reconstruct()).norm();
        rep.primal = std::sqrt(fusion_gap * fusion_gap + factor_gap * factor_gap);
        rep.dual = cfg_.rho * (dt_ * (state_.g - g_prev)).norm();
        const double scale = std::max({dx.norm(), state_.g.norm(), state_.xhat.norm(), 1e-12});
        rep.primal_rel = rep.primal / scale;
        if (rep.primal <= cfg_.tol_primal * std::max(1.0, scale) &&
            rep.dual <= cfg_.tol_dual * std::max(1.0, scale)) {
            break;
        }
    }
    return rep;
}

double PcmfSolver::fusion_residual() const {
    Matrix dx = d_ * state_.xhat;
    return (dx - state_.g).norm() / std::max(dx.norm(), 1e-12);
}

double PcmfSolver::factor_residual() const {
    return (state_.xhat - state_.factors.reconstruct()).norm() / std::max(state_.xhat.norm(), 1e-12);
}

std::vector<PathSolution> PcmfSolver::solve_path(const LambdaPath& path, const PcmfOptions& opts) {
    path.validate();
    std::vector<PathSolution> out;
    out.reserve(path.values.size());
    for (double lambda : path.values) {
        run(lambda, cfg_.sweeps);
        PathSolution sol;
        sol.lambda = lambda;
        sol.factors = state_.factors;
        ClusterAssignment a =
            extract_assignment(state_.g, *graph_, opts.fusion_eps, fusion_scale_, lambda);
        sol.labels = std::move(a.labels);
        sol.n_clusters = a.n_clusters;
        if (opts.keep_matrices) {
            sol.xhat = state_.xhat;
            sol.g = state_.g;
        }
        out.push_back(std::move(sol));
    }
    return out;
}

std::vector<PathSolution> pcmf_fit(const Matrix& x, const EdgeGraph& graph, const LambdaPath& path,
                                   Index rank, const AdmmConfig& cfg, const PcmfOptions& opts) {
    PcmfSolver solver(x, graph, rank, cfg);
    return solver.solve_path(path, opts);
}

Vector pcmf_variance_explained(const PathSolution& solution, const Matrix& x) {
    const double total = x.squaredNorm();
    if (total <= 0.0) throw InvalidInput("variance explained: zero data matrix");
    Vector frac(solution.factors.rank());
    for (Index i = 0; i < frac.size(); ++i) {
        frac(i) = solution.factors.S(i) * solution.factors.S(i) / total;
    }
    return frac;
}

}  // namespace pcmf
