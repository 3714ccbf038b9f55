#pragma once

#include <cstdint>
#include <vector>

#include "pcmf/p3ca.hpp"

namespace pcmf {

/// Clustered low-rank regime: cluster k rows are mu_k + t_i v*_k + noise with
/// means spaced delta apart along a shared direction and mutually
/// low-coherence unit slopes.
struct GenSpec {
    int n_clusters = 3;
    std::vector<Index> sizes;  // per-cluster observation counts
    Index p = 20;
    Index rank = 4;            // modeling rank of the regime, >= n_clusters
    double delta = 2.0;        // consecutive mean spacing
    double sigma = 0.15;       // isotropic noise sd
    double max_coherence = 0.3;
    std::uint64_t seed = 0;

    void validate() const;
};

struct LowrankTruth {
    Vector mean_direction;  // p, unit
    Matrix slopes;          // p x K, unit columns orthogonal to the mean direction
    Matrix means;           // K x p
};

struct LowrankData {
    Matrix x;
    std::vector<int> labels;
    LowrankTruth truth;
};

LowrankData gen_clustered_lowrank(const GenSpec& spec);

/// Gaussian mixture whose classes are indistinguishable entry-wise: noise of
/// norm ~ sqrt(p) per row, O(1) mean separation, distinct covariances
/// I + h_a B_a B_a^T with O(1) trace gaps.
struct GmmSpec {
    int n_clusters = 2;
    std::vector<Index> sizes;
    Index p = 1000;
    double mean_separation = 5.0;  // ||mu_a - mu_b|| for all pairs
    double bump_base = 0.5;        // h_a = bump_base + a * bump_step
    double bump_step = 1.0 / 6.0;  // consecutive traces differ by bump_rank * bump_step
    int bump_rank = 3;
    std::uint64_t seed = 0;

    void validate() const;
};

struct GmmData {
    Matrix x;
    std::vector<int> labels;
};

GmmData gen_nontrivial_gmm(const GmmSpec& spec);

/// Paired views driven by one latent scalar per observation along
/// cluster-specific canonical pairs (a_k, b_k).
struct MultiviewSpec {
    int n_clusters = 2;
    std::vector<Index> sizes;
    Index p_x = 30;
    Index p_y = 20;
    double noise = 0.05;
    double latent_offset = 0.5;  // |t_i| >= offset keeps every observation informative
    double max_coherence = 0.3;
    bool orthogonal_pairs = false;
    double delta = 0.0;  // optional cluster mean offsets
    std::uint64_t seed = 0;

    void validate() const;
};

struct MultiviewTruth {
    Matrix a;  // p_x x K unit columns
    Matrix b;  // p_y x K unit columns
};

struct MultiviewGen {
    MultiviewData data;
    std::vector<int> labels;
    MultiviewTruth truth;
};

MultiviewGen gen_multiview(const MultiviewSpec& spec);

}  // namespace pcmf
