#ifndef MMID_TEST_UTIL_HPP
#define MMID_TEST_UTIL_HPP

#include "mmid/matrix.hpp"
#include "mmid/rng.hpp"

namespace mmid::test {

inline DataMatrix random_matrix(std::size_t m, std::size_t n, Rng &rng) {
    DataMatrix out(m, n);
    for (double &v : out.data()) v = rng.normal();
    return out;
}

inline double max_abs_diff(const DataMatrix &a, const DataMatrix &b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

}  // namespace mmid::test

#endif
