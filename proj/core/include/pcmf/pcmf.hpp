#pragma once

#include <vector>

#include "pcmf/cluster_path.hpp"
#include "pcmf/convex_cluster.hpp"

namespace pcmf {

/// ADMM variables of the joint factorization/fusion splitting: fitted matrix,
/// fused differences, the two scaled duals and the current rank-r factors.
struct PcmfState {
    Matrix xhat;  // N x p
    Matrix g;     // |E| x p
    Matrix z1;    // |E| x p
    Matrix z2;    // N x p
    TruncatedFactors factors;
};

/// Per-lambda solver output.
struct PathSolution {
    double lambda = 0.0;
    Matrix xhat;              // empty when matrices are not kept
    TruncatedFactors factors;
    Matrix g;                 // empty when matrices are not kept
    std::vector<int> labels;
    int n_clusters = 0;
};

struct PcmfOptions {
    double fusion_eps = kFusionEps;
    bool keep_matrices = true;
};

/// Joint low-rank embedding and convex clustering by ADMM. One instance owns
/// its state; constructing it factors (1 + rho) I + rho D^T D once.
class PcmfSolver {
  public:
    PcmfSolver(const Matrix& x, const EdgeGraph& graph, Index rank, const AdmmConfig& cfg);

    /// Soft tether of the loading subspace toward a shared prior, used by the
    /// consensus driver. Pass nullptr to clear.
    void set_factor_prior(const Matrix* v_prior, double weight);

    void step(double lambda);
    SweepReport run(double lambda, int max_sweeps);

    /// Warm-started pathwise solve; labels are extracted from G at each point.
    std::vector<PathSolution> solve_path(const LambdaPath& path, const PcmfOptions& opts = {});

    const PcmfState& state() const { return state_; }
    const Matrix& data() const { return *x_; }
    Index rank() const { return rank_; }
    int rank_shrink_events() const { return rank_shrink_events_; }
    bool input_uncentered() const { return input_uncentered_; }
    double fusion_scale() const { return fusion_scale_; }

    /// Relative feasibility of the two constraints at the current state.
    double fusion_residual() const;   // ||D xhat - G|| / max(||D xhat||, eps)
    double factor_residual() const;   // ||xhat - U S V^T|| / max(||xhat||, eps)

  private:
    void update_factors();

    const Matrix* x_;
    const EdgeGraph* graph_;
    Index rank_;
    AdmmConfig cfg_;
    Eigen::SparseMatrix<double> d_, dt_;
    CholeskyFactor chol_;
    PcmfState state_;
    const Matrix* v_prior_ = nullptr;
    double prior_weight_ = 0.0;
    int rank_shrink_events_ = 0;
    bool input_uncentered_ = false;
    double fusion_scale_ = 1.0;
};

/// One-call pathwise fit (Algorithm-1 style driver).
std::vector<PathSolution> pcmf_fit(const Matrix& x, const EdgeGraph& graph, const LambdaPath& path,
                                   Index rank, const AdmmConfig& cfg, const PcmfOptions& opts = {});

/// Fraction of total (centered) variance captured by each component:
/// s_i^2 / ||X||_F^2.
Vector pcmf_variance_explained(const PathSolution& solution, const Matrix& x);

}  // namespace pcmf
