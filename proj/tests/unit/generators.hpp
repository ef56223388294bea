#pragma once

#include <random>

#include "cdg/field.hpp"
#include "cdg/linalg.hpp"
#include "support/dense.hpp"

namespace gen {

template <class S>
dense::Mat<S> matrix(std::mt19937_64& rng, int r, int c, int range = 2, double density = 0.5) {
    std::uniform_int_distribution<int> v(-range, range);
    std::bernoulli_distribution keep(density);
    dense::Mat<S> m = dense::zeros<S>(r, c);
    for (auto& row : m)
        for (auto& x : row)
            if (keep(rng)) x = S(v(rng));
    return m;
}

// A matrix of rank at most k, as a product of r x k and k x c factors.
template <class S>
dense::Mat<S> low_rank(std::mt19937_64& rng, int r, int c, int k) {
    if (k == 0) return dense::zeros<S>(r, c);
    return dense::mul(matrix<S>(rng, r, k, 2, 0.8), matrix<S>(rng, k, c, 2, 0.8), k);
}

template <class S>
cdg::SparseMat<S> sparse(const dense::Mat<S>& m, int cols) {
    cdg::Triplets<S> t;
    for (int i = 0; i < static_cast<int>(m.size()); ++i)
        for (int j = 0; j < cols; ++j)
            if (!m[i][j].is_zero()) t.add(i, j, m[i][j]);
    return t.build(static_cast<int>(m.size()), cols);
}

}  // namespace gen
