#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pcmf/pcmf.hpp"

namespace pcmf {

struct ConsensusConfig {
    Index block_size = 1000;
    int n_rounds = 3;
    double rho_c = 1.0;       // tether weight on the shared loading subspace
    std::uint64_t seed = 0;   // block-shuffling seed
    Index knn = 25;           // per-block graph neighbors
    double fusion_eps = kFusionEps;
    int threads = 1;
    double v_change_tol = 1e-3;

    void validate() const;
};

/// Shared loadings plus the merged global clusters in score space. Holds the
/// training column means so hold-out rows can be centered consistently.
struct ConsensusModel {
    Index rank = 0;
    Matrix v_global;          // p x r, orthonormal columns
    Vector column_means;      // p
    Matrix centroids;         // n_clusters x r
    std::vector<int> labels;  // training labels in original row order
    int n_clusters = 0;
    double lambda_selected = 0.0;  // median of per-block selections
    bool rounds_converged = true;
    double final_v_change = 0.0;
};

/// Block-decomposed PCMF: per-round block fits tethered to a shared loading
/// subspace, Procrustes-aligned averaging of block loadings, then a global
/// BIC-guided single-linkage merge of block clusters in score space. A single
/// block degenerates to the monolithic fit.
ConsensusModel consensus_pcmf(const Matrix& x, Index rank, const ConsensusConfig& cfg,
                              const LambdaPath& path, const AdmmConfig& admm);

/// Scores new rows with the shared loadings and assigns the nearest global
/// centroid (ties to the lower cluster id).
std::vector<int> assign_holdout(const ConsensusModel& model, const Matrix& x_new);

void save_consensus_model(const std::filesystem::path& dir, const ConsensusModel& model);
ConsensusModel load_consensus_model(const std::filesystem::path& dir);

}  // namespace pcmf
