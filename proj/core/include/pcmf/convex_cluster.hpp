#pragma once

#include <Eigen/SparseCore>
#include <vector>

#include "pcmf/graph.hpp"
#include "pcmf/linalg.hpp"
#include "pcmf/prox.hpp"

namespace pcmf {

enum class Schedule { Log, Linear };

/// Strictly decreasing penalty grid; the last value may be exactly zero.
struct LambdaPath {
    std::vector<double> values;
    Schedule schedule = Schedule::Log;

    void validate() const;
    static LambdaPath single(double lambda);
};

LambdaPath make_lambda_path(double lambda_max, int count, double min_ratio,
                            Schedule schedule = Schedule::Log, bool include_zero = true);

struct AdmmConfig {
    double rho = 2.0;         // augmented-Lagrangian parameter, >= 1
    int sweeps = 5;           // K iterations per path point (Algorithmic Regularization)
    double tol_primal = 1e-6;
    double tol_dual = 1e-6;
    Norm q = Norm::L2;

    void validate() const;
};

/// ADMM variables for one fusion problem: fitted rows, fused edge
/// differences and the scaled dual.
struct CcState {
    Matrix xhat;  // N x d
    Matrix g;     // |E| x d
    Matrix z;     // |E| x d
};

struct SweepReport {
    int sweeps = 0;
    double primal = 0.0;        // ||D xhat - G||_F
    double dual = 0.0;          // rho ||D^T (G - G_prev)||_F
    double primal_rel = 0.0;    // primal / max(||D xhat||, ||G||)
};

/// Solves min 1/2 ||Y - B||_F^2 + lambda sum_l w_l ||(D B)_l||_q by ADMM for
/// a fixed graph; the system Cholesky factor I + rho D^T D is computed once.
/// The target dimension d is free, so one solver serves matrices, score
/// vectors and loading blocks alike.
class CcSolver {
  public:
    CcSolver(const EdgeGraph& graph, const AdmmConfig& cfg);

    const EdgeGraph& graph() const { return *graph_; }
    const AdmmConfig& config() const { return cfg_; }
    const Eigen::SparseMatrix<double>& d() const { return d_; }

    /// Initial state per the divisive path convention: xhat = row-replicated
    /// column mean, G = D y, Z = 0.
    CcState make_state(const Matrix& y) const;
    /// Warm state anchored at an explicit primal iterate.
    CcState make_state_at(const Matrix& init) const;

    /// One ADMM sweep on the scaled-dual splitting.
    void step(const Matrix& y, double lambda, CcState& s) const;

    /// Up to max_sweeps sweeps with residual-based early exit.
    SweepReport run(const Matrix& y, double lambda, CcState& s, int max_sweeps) const;

    double objective(const Matrix& y, const Matrix& b, double lambda) const;

  private:
    const EdgeGraph* graph_;
    AdmmConfig cfg_;
    Eigen::SparseMatrix<double> d_, dt_;
    CholeskyFactor chol_;
};

struct CcPathPoint {
    double lambda = 0.0;
    Matrix xhat, g, z;
    SweepReport report;
};

/// Pathwise solve with warm starts along a decreasing lambda grid.
std::vector<CcPathPoint> cc_solve_path(const Matrix& y, const EdgeGraph& graph,
                                       const LambdaPath& path, const AdmmConfig& cfg);

/// ConvexCluster subroutine for the alternating solvers: K sweeps warm-started
/// at init toward min sum_i 1/2 ||ytilde_i - b_i||^2 + lambda sum w ||b_i - b_j||_q.
Matrix convex_cluster_sub(const Matrix& ytilde, const Matrix& init, double lambda,
                          const EdgeGraph& graph, const AdmmConfig& cfg);
Matrix convex_cluster_sub(const CcSolver& solver, const Matrix& ytilde, const Matrix& init,
                          double lambda);

/// Full-fusion test: every fused difference row negligible and all fitted
/// rows at the column-mean row.
bool fully_fused(const Matrix& xhat, const Matrix& g, double g_tol = 1e-6,
                 double row_tol = 1e-4);

/// Smallest verified full-fusion penalty: scaled max edge-difference rule,
/// then doubled until a converged solve actually fuses.
double find_lambda_max(const Matrix& y, const EdgeGraph& graph, const AdmmConfig& cfg);

}  // namespace pcmf
