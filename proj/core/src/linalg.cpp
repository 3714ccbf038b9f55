#include "pcmf/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace pcmf {

void fix_factor_signs(Matrix& u, Matrix& v) {
    for (Index j = 0; j < v.cols(); ++j) {
        Index imax = 0;
        double best = std::abs(v(0, j));
        for (Index i = 1; i < v.rows(); ++i) {
            const double a = std::abs(v(i, j));
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        if (v(imax, j) < 0.0) {
            v.col(j) = -v.col(j);
            u.col(j) = -u.col(j);
        }
    }
}

namespace {

// Dense SVD is exact but slow for large sides; above this min-dimension the
// Gram-matrix eigenroute is used instead.
constexpr Index kDenseSvdMaxDim = 64;

void fix_signs(Matrix& u, Matrix& v) { fix_factor_signs(u, v); }

TruncatedFactors truncate(const Matrix& u, const Vector& s, const Matrix& v, Index r) {
    const double cutoff = s.size() > 0 ? kSvdRankTol * s(0) : 0.0;
    Index keep = 0;
    while (keep < r && keep < s.size() && s(keep) > cutoff && s(keep) > 0.0) ++keep;

    TruncatedFactors f;
    f.U = u.leftCols(keep);
    f.S = s.head(keep);
    f.V = v.leftCols(keep);
    return f;
}

// Eigendecomposition of the smaller Gram matrix; accurate for the dominant
// part of the spectrum, which is all the truncated factorization keeps.
TruncatedFactors gram_svd(const Matrix& m, Index r) {
    const Index n = m.rows(), p = m.cols();
    if (n <= p) {
        Matrix gram = m * m.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
        if (eig.info() != Eigen::Success) throw NumericalError("gram eigendecomposition failed");
        // Eigenvalues come back ascending.
        Vector s(n);
        Matrix u(n, n);
        for (Index i = 0; i < n; ++i) {
            const double ev = std::max(0.0, eig.eigenvalues()(n - 1 - i));
            s(i) = std::sqrt(ev);
            u.col(i) = eig.eigenvectors().col(n - 1 - i);
        }
        TruncatedFactors f = truncate(u, s, Matrix::Zero(p, n), r);
        f.V.resize(p, f.rank());
        for (Index j = 0; j < f.rank(); ++j) f.V.col(j) = m.transpose() * f.U.col(j) / f.S(j);
        fix_signs(f.U, f.V);
        return f;
    }
    Matrix gram = m.transpose() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    if (eig.info() != Eigen::Success) throw NumericalError("gram eigendecomposition failed");
    Vector s(p);
    Matrix v(p, p);
    for (Index i = 0; i < p; ++i) {
        const double ev = std::max(0.0, eig.eigenvalues()(p - 1 - i));
        s(i) = std::sqrt(ev);
        v.col(i) = eig.eigenvectors().col(p - 1 - i);
    }
    TruncatedFactors f = truncate(Matrix::Zero(n, p), s, v, r);
    f.U.resize(n, f.rank());
    for (Index j = 0; j < f.rank(); ++j) f.U.col(j) = m * f.V.col(j) / f.S(j);
    fix_signs(f.U, f.V);
    return f;
}

}  // namespace

Matrix TruncatedFactors::reconstruct() const {
    if (rank() == 0) return Matrix::Zero(U.rows(), V.rows());
    return U * S.asDiagonal() * V.transpose();
}

TruncatedFactors truncated_svd(const Matrix& m, Index r) {
    if (r < 1 || r > std::min(m.rows(), m.cols())) {
        throw InvalidInput("truncated_svd: rank " + std::to_string(r) + " out of range for " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
    }
    if (!all_finite(m)) throw NumericalError("truncated_svd: input contains non-finite values");

    if (std::min(m.rows(), m.cols()) <= kDenseSvdMaxDim) {
        Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        TruncatedFactors f = truncate(svd.matrixU(), svd.singularValues(), svd.matrixV(), r);
        fix_signs(f.U, f.V);
        return f;
    }
    return gram_svd(m, r);
}

CholeskyFactor::CholeskyFactor(const Matrix& a) {
    if (a.rows() != a.cols()) throw InvalidInput("cholesky: matrix must be square");
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("cholesky: matrix is not positive definite");
    }
    l_ = llt.matrixL();
}

Matrix CholeskyFactor::solve(const Matrix& b) const {
    if (b.rows() != l_.rows()) {
        throw InvalidInput("cholesky solve: dimension mismatch (" + std::to_string(b.rows()) +
                           " rows vs factor dim " + std::to_string(l_.rows()) + ")");
    }
    Matrix y = l_.triangularView<Eigen::Lower>().solve(b);
    return l_.transpose().triangularView<Eigen::Upper>().solve(y);
}

CenterScaleResult center_scale(const Matrix& x, bool center, bool scale) {
    if (scale && x.rows() < 2) throw InvalidInput("center_scale: scaling needs N >= 2");

    const Index p = x.cols();
    CenterScaleResult out;
    out.data = x;
    out.stats.means = Vector::Zero(p);
    out.stats.stds = Vector::Ones(p);
    out.stats.degenerate.assign(static_cast<size_t>(p), false);
    out.stats.centered = center;
    out.stats.scaled = scale;

    if (center) {
        out.stats.means = x.colwise().mean();
        out.data.rowwise() -= out.stats.means.transpose();
    }
    if (scale) {
        const double n1 = static_cast<double>(x.rows() - 1);
        for (Index j = 0; j < p; ++j) {
            const double mu = x.col(j).mean();
            const double var = (x.col(j).array() - mu).square().sum() / n1;
            if (var <= 0.0) {
                out.stats.degenerate[static_cast<size_t>(j)] = true;
                out.data.col(j).setZero();
            } else {
                out.stats.stds(j) = std::sqrt(var);
                out.data.col(j) /= out.stats.stds(j);
            }
        }
    }
    return out;
}

Matrix restore_units(const Matrix& fitted, const ColumnStats& stats) {
    Matrix out = fitted;
    if (stats.scaled) out = out * stats.stds.asDiagonal();
    if (stats.centered) out.rowwise() += stats.means.transpose();
    return out;
}

}  // namespace pcmf
