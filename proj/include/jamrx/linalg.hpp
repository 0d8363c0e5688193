#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace jamrx {

using cdouble = std::complex<double>;
using cvec = std::vector<cdouble>;

/// Hermitian inner product a^H b (conjugate on the first argument).
inline cdouble vdot(const cvec& a, const cvec& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("vdot: size mismatch");
    }
    cdouble acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

/// Transposed product a^T b* = sum a_i conj(b_i); used for pilot correlations.
inline cdouble tdot(const cvec& a, const cvec& b) {
    return std::conj(vdot(a, b));
}

/// Squared Euclidean norm.
inline double norm2(const cvec& a) {
    double acc = 0.0;
    for (const cdouble& x : a) {
        acc += std::norm(x);
    }
    return acc;
}

}  // namespace jamrx
