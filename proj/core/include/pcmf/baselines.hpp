#pragma once

#include <cstdint>
#include <vector>

#include "pcmf/p3ca.hpp"

namespace pcmf {

struct KmeansResult {
    std::vector<int> labels;
    Matrix centers;  // k x d
    double sse = 0.0;
    int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding; best of `restarts` by
/// within-cluster SSE, deterministic given the seed.
KmeansResult kmeans(const Matrix& z, int k, int restarts, std::uint64_t seed);

/// Truncated-SVD scores (U_r S_r of the centered data) followed by k-means.
std::vector<int> two_step_pca_kmeans(const Matrix& x, Index r, int k, std::uint64_t seed);

struct CcaDirections {
    Vector u;  // p_x, unit
    Vector v;  // p_y, unit
    double correlation = 0.0;
};

/// Rank-1 CCA by ridge-regularized whitening and SVD of the whitened
/// cross-covariance (ridge eps = 1e-6 * trace / dim per view).
CcaDirections cca_rank1(const Matrix& x, const Matrix& y);

/// Pooled rank-1 CCA scores per view, then k-means on the concatenated
/// scores.
std::vector<int> two_step_cca_kmeans(const MultiviewData& data, int k, std::uint64_t seed);

}  // namespace pcmf
