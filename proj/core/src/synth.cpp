#include "pcmf/synth.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numeric>
#include <random>

namespace pcmf {

namespace {

Vector random_unit(std::mt19937_64& rng, Index p) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(p);
    do {
        for (Index i = 0; i < p; ++i) v(i) = normal(rng);
    } while (v.norm() < 1e-9);
    return v / v.norm();
}

Matrix random_gaussian(std::mt19937_64& rng, Index n, Index p) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(n, p);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) m(i, j) = normal(rng);
    }
    return m;
}

/// Random unit vectors with pairwise |cos| below max_coherence, optionally
/// orthogonalized against fixed directions first; rejection-sampled.
Matrix low_coherence_directions(std::mt19937_64& rng, Index p, int count, double max_coherence,
                                const Matrix* orthogonal_to) {
    Matrix out(p, count);
    int attempts = 0;
    for (int k = 0; k < count;) {
        if (++attempts > 20000) {
            throw InvalidInput("generator: infeasible coherence request (p too small for the "
                               "requested number of low-coherence directions)");
        }
        Vector d = random_unit(rng, p);
        if (orthogonal_to) {
            for (Index j = 0; j < orthogonal_to->cols(); ++j) {
                d -= d.dot(orthogonal_to->col(j)) * orthogonal_to->col(j);
            }
            if (d.norm() < 1e-6) continue;
            d /= d.norm();
        }
        bool ok = true;
        for (int j = 0; j < k; ++j) {
            if (std::abs(d.dot(out.col(j))) > max_coherence) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        out.col(k++) = d;
    }
    return out;
}

Matrix orthonormal_columns(std::mt19937_64& rng, Index p, int count) {
    if (count > p) throw InvalidInput("generator: cannot draw more orthonormal directions than p");
    Matrix g = random_gaussian(rng, p, count);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(p, count);
    return q;
}

void check_sizes(const std::vector<Index>& sizes, int k) {
    if (static_cast<int>(sizes.size()) != k) {
        throw InvalidInput("generator: sizes list must have one entry per cluster");
    }
    for (Index s : sizes) {
        if (s < 1) throw InvalidInput("generator: every cluster size must be >= 1");
    }
}

}  // namespace

void GenSpec::validate() const {
    check_sizes(sizes, n_clusters);
    if (p < 1) throw InvalidInput("generator: p must be >= 1");
    if (delta < 0.0 || sigma < 0.0) throw InvalidInput("generator: delta and sigma must be >= 0");
    if (rank < n_clusters) throw InvalidInput("generator: rank must be >= cluster count");
    if (p <= n_clusters) {
        throw InvalidInput("generator: infeasible coherence request for p <= cluster count");
    }
}

LowrankData gen_clustered_lowrank(const GenSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const Index p = spec.p;
    const int k = spec.n_clusters;
    LowrankData out;
    out.truth.mean_direction = random_unit(rng, p);
    Matrix mean_dir = out.truth.mean_direction;
    out.truth.slopes = low_coherence_directions(rng, p, k, spec.max_coherence, &mean_dir);

    out.truth.means.resize(k, p);
    for (int c = 0; c < k; ++c) {
        out.truth.means.row(c) =
            (static_cast<double>(c + 1) * spec.delta) * out.truth.mean_direction.transpose();
    }

    const Index n = std::accumulate(spec.sizes.begin(), spec.sizes.end(), Index{0});
    out.x.resize(n, p);
    out.labels.resize(static_cast<size_t>(n));
    Index row = 0;
    for (int c = 0; c < k; ++c) {
        for (Index i = 0; i < spec.sizes[static_cast<size_t>(c)]; ++i, ++row) {
            const double t = normal(rng);
            out.x.row(row) = out.truth.means.row(c) + t * out.truth.slopes.col(c).transpose();
            if (spec.sigma > 0.0) {
                for (Index j = 0; j < p; ++j) out.x(row, j) += spec.sigma * normal(rng);
            }
            out.labels[static_cast<size_t>(row)] = c;
        }
    }
    return out;
}

void GmmSpec::validate() const {
    check_sizes(sizes, n_clusters);
    if (p < 2) throw InvalidInput("gmm generator: p must be >= 2");
    if (p < n_clusters) throw InvalidInput("gmm generator: p must be >= cluster count");
    if (p < bump_rank) throw InvalidInput("gmm generator: p must be >= bump rank");
    if (mean_separation < 0.0) throw InvalidInput("gmm generator: negative separation");
}

GmmData gen_nontrivial_gmm(const GmmSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const Index p = spec.p;
    const int k = spec.n_clusters;
    // Orthonormal mean anchors give every pair the same O(1) separation.
    Matrix anchors = orthonormal_columns(rng, p, k);
    Matrix means(k, p);
    for (int a = 0; a < k; ++a) {
        means.row(a) = (spec.mean_separation / std::sqrt(2.0)) * anchors.col(a).transpose();
    }
    std::vector<Matrix> bumps;
    bumps.reserve(static_cast<size_t>(k));
    for (int a = 0; a < k; ++a) bumps.push_back(orthonormal_columns(rng, p, spec.bump_rank));

    const Index n = std::accumulate(spec.sizes.begin(), spec.sizes.end(), Index{0});
    GmmData out;
    out.x.resize(n, p);
    out.labels.resize(static_cast<size_t>(n));
    Index row = 0;
    for (int a = 0; a < k; ++a) {
        const double h = spec.bump_base + static_cast<double>(a) * spec.bump_step;
        const double hs = std::sqrt(std::max(0.0, h));
        for (Index i = 0; i < spec.sizes[static_cast<size_t>(a)]; ++i, ++row) {
            Vector xi(p);
            for (Index j = 0; j < p; ++j) xi(j) = normal(rng);
            Vector eta(spec.bump_rank);
            for (Index j = 0; j < spec.bump_rank; ++j) eta(j) = normal(rng);
            out.x.row(row) = means.row(a) + xi.transpose() + hs * (bumps[static_cast<size_t>(a)] * eta).transpose();
            out.labels[static_cast<size_t>(row)] = a;
        }
    }
    return out;
}

void MultiviewSpec::validate() const {
    check_sizes(sizes, n_clusters);
    if (p_x < 2 || p_y < 2) throw InvalidInput("multiview generator: view dims must be >= 2");
    if (noise < 0.0 || latent_offset < 0.0 || delta < 0.0) {
        throw InvalidInput("multiview generator: negative noise/offset/delta");
    }
    if (orthogonal_pairs && (p_x < n_clusters || p_y < n_clusters)) {
        throw InvalidInput("multiview generator: infeasible coherence (views smaller than cluster count)");
    }
}

MultiviewGen gen_multiview(const MultiviewSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const int k = spec.n_clusters;
    MultiviewGen out;
    if (spec.orthogonal_pairs) {
        out.truth.a = orthonormal_columns(rng, spec.p_x, k);
        out.truth.b = orthonormal_columns(rng, spec.p_y, k);
    } else {
        out.truth.a = low_coherence_directions(rng, spec.p_x, k, spec.max_coherence, nullptr);
        out.truth.b = low_coherence_directions(rng, spec.p_y, k, spec.max_coherence, nullptr);
    }

    Matrix mean_x = Matrix::Zero(k, spec.p_x);
    Matrix mean_y = Matrix::Zero(k, spec.p_y);
    if (spec.delta > 0.0) {
        Matrix a = out.truth.a;
        Matrix b = out.truth.b;
        Vector mx = low_coherence_directions(rng, spec.p_x, 1, spec.max_coherence, &a).col(0);
        Vector my = low_coherence_directions(rng, spec.p_y, 1, spec.max_coherence, &b).col(0);
        for (int c = 0; c < k; ++c) {
            mean_x.row(c) = (static_cast<double>(c + 1) * spec.delta) * mx.transpose();
            mean_y.row(c) = (static_cast<double>(c + 1) * spec.delta) * my.transpose();
        }
    }

    const Index n = std::accumulate(spec.sizes.begin(), spec.sizes.end(), Index{0});
    out.data.x.resize(n, spec.p_x);
    out.data.y.resize(n, spec.p_y);
    out.labels.resize(static_cast<size_t>(n));
    Index row = 0;
    for (int c = 0; c < k; ++c) {
        for (Index i = 0; i < spec.sizes[static_cast<size_t>(c)]; ++i, ++row) {
            const double sign = (rng() & 1ull) ? 1.0 : -1.0;
            const double t = sign * (spec.latent_offset + std::abs(normal(rng)));
            out.data.x.row(row) = mean_x.row(c) + t * out.truth.a.col(c).transpose();
            out.data.y.row(row) = mean_y.row(c) + t * out.truth.b.col(c).transpose();
            if (spec.noise > 0.0) {
                for (Index j = 0; j < spec.p_x; ++j) out.data.x(row, j) += spec.noise * normal(rng);
                for (Index j = 0; j < spec.p_y; ++j) out.data.y(row, j) += spec.noise * normal(rng);
            }
            out.labels[static_cast<size_t>(row)] = c;
        }
    }
    return out;
}

}  // namespace pcmf
