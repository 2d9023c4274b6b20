#pragma once

// Private real dense kernels shared by the library sources.

#include "qjunction/operator.hpp"

namespace qjunction::detail {

/// a * b^T through BLAS.
RealMatrix gemm_transposed(const RealMatrix& a, const RealMatrix& b);

/// Lowest `count` eigenvalues of a real symmetric matrix (upper triangle
/// read, contents destroyed).
RealVector lowest_eigenvalues(RealMatrix& a, std::size_t count);

}  // namespace qjunction::detail
