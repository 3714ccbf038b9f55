#include "pcmf/common.hpp"

namespace pcmf {

bool all_finite(const Matrix& x) {
    return x.allFinite();
}

void require_data_matrix(const Matrix& x, const char* what) {
    if (x.rows() < 2 || x.cols() < 1) {
        throw InvalidInput(std::string(what) + ": need at least 2 rows and 1 column, got " +
                           std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
    }
    if (!all_finite(x)) {
        throw NumericalError(std::string(what) + " contains non-finite values");
    }
}

}  // namespace pcmf
