#include "pcmf/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "pcmf/linalg.hpp"

namespace pcmf {

namespace {

double canonical_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

KmeansResult lloyd_once(const Matrix& z, int k, std::mt19937_64& rng) {
    const Index n = z.rows(), d = z.cols();
    Matrix centers(k, d);

    // k-means++ seeding.
    std::vector<double> min_d2(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
    const Index first = static_cast<Index>(canonical_uniform(rng) * static_cast<double>(n)) % n;
    centers.row(0) = z.row(first);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double d2 = (z.row(i) - centers.row(c - 1)).squaredNorm();
            if (d2 < min_d2[static_cast<size_t>(i)]) min_d2[static_cast<size_t>(i)] = d2;
            total += min_d2[static_cast<size_t>(i)];
        }
        Index pick = n - 1;
        if (total > 0.0) {
            const double target = canonical_uniform(rng) * total;
            double acc = 0.0;
            for (Index i = 0; i < n; ++i) {
                acc += min_d2[static_cast<size_t>(i)];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Index>(canonical_uniform(rng) * static_cast<double>(n)) % n;
        }
        centers.row(c) = z.row(pick);
    }

    KmeansResult res;
    res.labels.assign(static_cast<size_t>(n), 0);
    std::vector<int> prev(static_cast<size_t>(n), -1);
    for (int iter = 0; iter < 200; ++iter) {
        // Assign (strict < keeps ties at the lowest center index).
        for (Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d2 = (z.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d2 = (z.row(i) - centers.row(c)).squaredNorm();
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = c;
                }
            }
            res.labels[static_cast<size_t>(i)] = best;
        }
        // Update.
        Matrix sums = Matrix::Zero(k, d);
        std::vector<Index> counts(static_cast<size_t>(k), 0);
        for (Index i = 0; i < n; ++i) {
            sums.row(res.labels[static_cast<size_t>(i)]) += z.row(i);
            ++counts[static_cast<size_t>(res.labels[static_cast<size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) {
                centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<size_t>(c)]);
            } else {
                // Re-seed an empty cluster at the point farthest from its center.
                Index far = 0;
                double far_d2 = -1.0;
                for (Index i = 0; i < n; ++i) {
                    const double d2 =
                        (z.row(i) - centers.row(res.labels[static_cast<size_t>(i)])).squaredNorm();
                    if (d2 > far_d2) {
                        far_d2 = d2;
                        far = i;
                    }
                }
                centers.row(c) = z.row(far);
            }
        }
        res.iterations = iter + 1;
        if (res.labels == prev) break;
        prev = res.labels;
    }
    res.sse = 0.0;
    for (Index i = 0; i < n; ++i) {
        res.sse += (z.row(i) - centers.row(res.labels[static_cast<size_t>(i)])).squaredNorm();
    }
    res.centers = std::move(centers);
    return res;
}

}  // namespace

KmeansResult kmeans(const Matrix& z, int k, int restarts, std::uint64_t seed) {
    if (k < 1) throw InvalidInput("kmeans: k must be >= 1");
    if (static_cast<Index>(k) > z.rows()) throw InvalidInput("kmeans: k exceeds observation count");
    if (restarts < 1) throw InvalidInput("kmeans: restarts must be >= 1");
    std::mt19937_64 rng(seed);
    KmeansResult best;
    best.sse = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        KmeansResult cur = lloyd_once(z, k, rng);
        if (cur.sse < best.sse) best = std::move(cur);
    }
    return best;
}

std::vector<int> two_step_pca_kmeans(const Matrix& x, Index r, int k, std::uint64_t seed) {
    require_data_matrix(x, "two-step input");
    CenterScaleResult cs = center_scale(x, true, false);
    TruncatedFactors f = truncated_svd(cs.data, r);
    Matrix scores = f.U * f.S.asDiagonal();
    return kmeans(scores, k, 10, seed).labels;
}

namespace {

Matrix inverse_sqrt_with_ridge(const Matrix& cov) {
    const double ridge = 1e-6 * cov.trace() / static_cast<double>(cov.rows());
    Matrix reg = cov;
    reg.diagonal().array() += std::max(ridge, 1e-300);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(reg);
    if (eig.info() != Eigen::Success) throw NumericalError("cca whitening failed");
    Vector inv_sqrt = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

CcaDirections cca_rank1(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows()) throw InvalidInput("cca: views must share observations");
    if (x.rows() < 3) throw InvalidInput("cca: need at least 3 observations");
    CenterScaleResult cx = center_scale(x, true, false);
    CenterScaleResult cy = center_scale(y, true, false);
    const double n1 = static_cast<double>(x.rows() - 1);
    Matrix sxx = cx.data.transpose() * cx.data / n1;
    Matrix syy = cy.data.transpose() * cy.data / n1;
    Matrix sxy = cx.data.transpose() * cy.data / n1;
    Matrix wx = inverse_sqrt_with_ridge(sxx);
    Matrix wy = inverse_sqrt_with_ridge(syy);
    Matrix m = wx * sxy * wy;
    TruncatedFactors top = truncated_svd(m, 1);
    CcaDirections out;
    if (top.rank() == 0) {
        out.u = Vector::Unit(x.cols(), 0);
        out.v = Vector::Unit(y.cols(), 0);
        out.correlation = 0.0;
        return out;
    }
    Vector u = wx * top.U.col(0);
    Vector v = wy * top.V.col(0);
    out.u = u / u.norm();
    out.v = v / v.norm();
    out.correlation = top.S(0);
    return out;
}

std::vector<int> two_step_cca_kmeans(const MultiviewData& data, int k, std::uint64_t seed) {
    data.validate();
    CcaDirections dir = cca_rank1(data.x, data.y);
    CenterScaleResult cx = center_scale(data.x, true, false);
    CenterScaleResult cy = center_scale(data.y, true, false);
    Matrix scores(data.x.rows(), 2);
    scores.col(0) = cx.data * dir.u;
    scores.col(1) = cy.data * dir.v;
    return kmeans(scores, k, 10, seed).labels;
}

}  // namespace pcmf
