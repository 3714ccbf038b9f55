#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace pcmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr const char* kVersion = "0.1.0";

/// Invalid configuration or shape (maps to CLI exit code 3).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed data file (maps to CLI exit code 2).
struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite state, failed factorization or similar (maps to CLI exit code 4).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool all_finite(const Matrix& x);

/// Checks the observation-matrix contract: finite entries, N >= 2, p >= 1.
void require_data_matrix(const Matrix& x, const char* what = "data matrix");

}  // namespace pcmf
