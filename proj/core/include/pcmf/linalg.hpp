#pragma once

#include <vector>

#include "pcmf/common.hpp"

namespace pcmf {

/// Rank-r factors U S V^T with orthonormal U, V and positive nonincreasing S.
/// rank() can be smaller than the requested rank when the input is
/// numerically rank-deficient (values below rank_tol * s1 are dropped).
struct TruncatedFactors {
    Matrix U;  // N x r
    Vector S;  // r
    Matrix V;  // p x r

    Index rank() const { return S.size(); }
    Matrix reconstruct() const;
};

/// Relative cutoff below which singular values count as zero.
inline constexpr double kSvdRankTol = 1e-10;

/// Best rank-r approximation of m. Signs are fixed deterministically: the
/// entry of largest absolute value in each column of V is made positive,
/// ties broken by lowest index.
TruncatedFactors truncated_svd(const Matrix& m, Index r);

/// Applies the deterministic sign convention to paired factor columns.
void fix_factor_signs(Matrix& u, Matrix& v);

/// Dense Cholesky factor L with L L^T = A. Throws NumericalError when A is
/// not positive definite.
class CholeskyFactor {
  public:
    explicit CholeskyFactor(const Matrix& a);

    const Matrix& matrix_l() const { return l_; }
    Index dim() const { return l_.rows(); }

    /// A^{-1} b via two triangular solves.
    Matrix solve(const Matrix& b) const;

  private:
    Matrix l_;
};

struct ColumnStats {
    Vector means;                  // subtracted means (zeros when center=false)
    Vector stds;                   // sample stds used for scaling (ones when scale=false)
    std::vector<bool> degenerate;  // zero-variance columns
    bool centered = false;
    bool scaled = false;
};

struct CenterScaleResult {
    Matrix data;
    ColumnStats stats;
};

/// Column-wise centering and/or scaling to unit sample standard deviation.
/// Zero-variance columns are set to zero and flagged, never an error.
CenterScaleResult center_scale(const Matrix& x, bool center, bool scale);

/// Maps centered/scaled fitted values back to the original units.
Matrix restore_units(const Matrix& fitted, const ColumnStats& stats);

}  // namespace pcmf
