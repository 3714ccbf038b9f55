#include "pcmf/convex_cluster.hpp"

#include <algorithm>
#include <cmath>

namespace pcmf {

void LambdaPath::validate() const {
    if (values.empty()) throw InvalidInput("lambda path is empty");
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) throw InvalidInput("lambda path has a negative value");
        if (i > 0 && values[i] >= values[i - 1]) {
            throw InvalidInput("lambda path must be strictly decreasing");
        }
    }
}

LambdaPath LambdaPath::single(double lambda) {
    LambdaPath p;
    p.values = {lambda};
    p.validate();
    return p;
}

LambdaPath make_lambda_path(double lambda_max, int count, double min_ratio, Schedule schedule,
                            bool include_zero) {
    if (lambda_max <= 0.0) throw InvalidInput("make_lambda_path: lambda_max must be positive");
    if (count < 1) throw InvalidInput("make_lambda_path: count must be >= 1");
    if (min_ratio <= 0.0 || min_ratio > 1.0) {
        throw InvalidInput("make_lambda_path: min_ratio must be in (0, 1]");
    }
    LambdaPath p;
    p.schedule = schedule;
    p.values.reserve(static_cast<size_t>(count) + 1);
    if (count == 1) {
        p.values.push_back(lambda_max);
    } else if (schedule == Schedule::Log) {
        const double lmin = lambda_max * min_ratio;
        const double step = std::log(lmin / lambda_max) / static_cast<double>(count - 1);
        for (int i = 0; i < count; ++i) {
            p.values.push_back(lambda_max * std::exp(step * i));
        }
    } else {
        const double lmin = lambda_max * min_ratio;
        const double step = (lmin - lambda_max) / static_cast<double>(count - 1);
        for (int i = 0; i < count; ++i) {
            p.values.push_back(lambda_max + step * i);
        }
    }
    if (include_zero) p.values.push_back(0.0);
    p.validate();
    return p;
}

void AdmmConfig::validate() const {
    if (rho < 1.0) throw InvalidInput("admm: rho must be >= 1");
    if (sweeps < 1) throw InvalidInput("admm: sweeps must be >= 1");
    if (tol_primal <= 0.0 || tol_dual <= 0.0) throw InvalidInput("admm: tolerances must be positive");
}

namespace {

Matrix system_matrix(const Eigen::SparseMatrix<double>& d, double rho) {
    const Index n = d.cols();
    Matrix a = Matrix(d.transpose() * d) * rho;
    a.diagonal().array() += 1.0;
    return a;
}

}  // namespace

CcSolver::CcSolver(const EdgeGraph& graph, const AdmmConfig& cfg)
    : graph_(&graph),
      cfg_(cfg),
      d_(incidence_matrix(graph)),
      dt_(d_.transpose()),
      chol_(system_matrix(d_, cfg.rho)) {
    cfg_.validate();
    if (graph.n_edges() == 0) throw InvalidInput("cc solver: graph has no edges");
}

CcState CcSolver::make_state(const Matrix& y) const {
    CcState s;
    s.xhat = Matrix::Zero(y.rows(), y.cols());
    s.xhat.rowwise() += y.colwise().mean();
    s.g = d_ * y;
    s.z = Matrix::Zero(graph_->n_edges(), y.cols());
    return s;
}

CcState CcSolver::make_state_at(const Matrix& init) const {
    CcState s;
    s.xhat = init;
    s.g = d_ * init;
    s.z = Matrix::Zero(graph_->n_edges(), init.cols());
    return s;
}

void CcSolver::step(const Matrix& y, double lambda, CcState& s) const {
    const double rho = cfg_.rho;
    s.xhat = chol_.solve(y + rho * (dt_ * (s.g - s.z)));
    Matrix dx = d_ * s.xhat;
    s.g = dx + s.z;
    if (lambda > 0.0) {
        std::vector<double> tau(graph_->weights.size());
        for (size_t l = 0; l < tau.size(); ++l) tau[l] = lambda * graph_->weights[l] / rho;
        prox_rows(s.g, cfg_.q, tau);
    }
    s.z += dx - s.g;
    if (!s.xhat.allFinite() || !s.g.allFinite()) {
        throw NumericalError("cc sweep produced non-finite values at lambda=" +
                             std::to_string(lambda));
    }
}

SweepReport CcSolver::run(const Matrix& y, double lambda, CcState& s, int max_sweeps) const {
    SweepReport rep;
    Matrix g_prev;
    for (int k = 0; k < max_sweeps; ++k) {
        g_prev = s.g;
        step(y, lambda, s);
        ++rep.sweeps;
        Matrix dx = d_ * s.xhat;
        rep.primal = (dx - s.g).norm();
        rep.dual = cfg_.rho * (dt_ * (s.g - g_prev)).norm();
        const double scale = std::max({dx.norm(), s.g.norm(), 1e-12});
        rep.primal_rel = rep.primal / scale;
        if (rep.primal <= cfg_.tol_primal * std::max(1.0, scale) &&
            rep.dual <= cfg_.tol_dual * std::max(1.0, cfg_.rho * (dt_ * s.z).norm())) {
            break;
        }
    }
    return rep;
}

double CcSolver::objective(const Matrix& y, const Matrix& b, double lambda) const {
    double pen = 0.0;
    for (Index l = 0; l < graph_->n_edges(); ++l) {
        const auto& e = graph_->edges[static_cast<size_t>(l)];
        Vector diff = (b.row(e.first) - b.row(e.second)).transpose();
        double nrm = 0.0;
        switch (cfg_.q) {
            case Norm::L1: nrm = diff.lpNorm<1>(); break;
            case Norm::L2: nrm = diff.norm(); break;
            case Norm::Linf: nrm = diff.lpNorm<Eigen::Infinity>(); break;
        }
        pen += graph_->weights[static_cast<size_t>(l)] * nrm;
    }
    return 0.5 * (y - b).squaredNorm() + lambda * pen;
}

std::vector<CcPathPoint> cc_solve_path(const Matrix& y, const EdgeGraph& graph,
                                       const LambdaPath& path, const AdmmConfig& cfg) {
    path.validate();
    require_data_matrix(y, "cc path input");
    CcSolver solver(graph, cfg);
    CcState s = solver.make_state(y);
    std::vector<CcPathPoint> out;
    out.reserve(path.values.size());
    for (double lambda : path.values) {
        CcPathPoint pt;
        pt.lambda = lambda;
        pt.report = solver.run(y, lambda, s, cfg.sweeps);
        pt.xhat = s.xhat;
        pt.g = s.g;
        pt.z = s.z;
        out.push_back(std::move(pt));
    }
    return out;
}

Matrix convex_cluster_sub(const CcSolver& solver, const Matrix& ytilde, const Matrix& init,
                          double lambda) {
    if (init.rows() != ytilde.rows() || init.cols() != ytilde.cols()) {
        throw InvalidInput("convex_cluster_sub: init shape mismatch");
    }
    CcState s = solver.make_state_at(init);
    solver.run(ytilde, lambda, s, solver.config().sweeps);
    return s.xhat;
}

Matrix convex_cluster_sub(const Matrix& ytilde, const Matrix& init, double lambda,
                          const EdgeGraph& graph, const AdmmConfig& cfg) {
    CcSolver solver(graph, cfg);
    return convex_cluster_sub(solver, ytilde, init, lambda);
}

bool fully_fused(const Matrix& xhat, const Matrix& g, double g_tol, double row_tol) {
    double gmax = 0.0;
    for (Index l = 0; l < g.rows(); ++l) gmax = std::max(gmax, g.row(l).norm());
    if (gmax > g_tol) return false;
    Eigen::RowVectorXd mean = xhat.colwise().mean();
    for (Index i = 0; i < xhat.rows(); ++i) {
        if ((xhat.row(i) - mean).norm() > row_tol) return false;
    }
    return true;
}

double find_lambda_max(const Matrix& y, const EdgeGraph& graph, const AdmmConfig& cfg) {
    AdmmConfig probe = cfg;
    probe.tol_primal = std::min(probe.tol_primal, 1e-8);
    probe.tol_dual = std::min(probe.tol_dual, 1e-8);
    CcSolver solver(graph, probe);

    const Matrix dy = solver.d() * y;
    double base = 0.0;
    for (Index l = 0; l < dy.rows(); ++l) {
        base = std::max(base, dy.row(l).norm() / graph.weights[static_cast<size_t>(l)]);
    }
    if (base <= 0.0) return 1.0;  // all rows identical; any positive lambda fuses
    double lambda = base * static_cast<double>(graph.n_nodes) / static_cast<double>(graph.n_edges());

    for (int attempt = 0; attempt < 48; ++attempt) {
        CcState s = solver.make_state(y);
        solver.run(y, lambda, s, 600);
        if (fully_fused(s.xhat, s.g)) return lambda;
        lambda *= 2.0;
    }
    throw NumericalError("find_lambda_max: fusion not reached; data scale may be degenerate");
}

}  // namespace pcmf
