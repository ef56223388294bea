#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "cdg/module.hpp"

namespace cdg {

/// Seeded generator of small CDG-algebras: a monomial algebra on one to
/// three generators, inner-twisted by a degree-one element a (so d = [a,-]
/// and h = a^2), then rebased on its degree-zero part.  The twisting element
/// is kept because it gives twisted modules with connection a + scalars.
template <class S>
struct RandomAlgebra {
    AlgebraPtr<S> algebra;
    Vec<S> twist;
};

struct RandomSpec {
    int max_dim = 6;
    bool curved = true;      // insist on h != 0
    bool rebase = true;
    int coefficient_range = 2;
};

template <class S>
RandomAlgebra<S> random_algebra(std::mt19937_64& rng, const RandomSpec& spec) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int attempt = 0;; ++attempt) {
        const int ng = pick(1, 3);
        const int degree_choices[] = {-1, 0, 1, 1, 2};
        std::vector<int> gd;
        std::vector<std::string> names;
        for (int g = 0; g < ng; ++g) {
            gd.push_back(degree_choices[pick(0, 4)]);
            names.push_back(std::string(1, static_cast<char>('a' + g)));
        }
        if (spec.curved && std::find(gd.begin(), gd.end(), 1) == gd.end()) gd[0] = 1;
        std::vector<std::vector<int>> cand;
        for (int g = 0; g < ng; ++g) cand.push_back({g});
        for (int g = 0; g < ng; ++g)
            for (int h = 0; h < ng; ++h) cand.push_back({g, h});
        for (int g = 0; g < ng; ++g)
            for (int h = 0; h < ng; ++h)
                for (int k = 0; k < ng; ++k) cand.push_back({g, h, k});
        std::shuffle(cand.begin(), cand.end(), rng);
        std::stable_sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
        // keep a random prefix-compatible subset: lengths ascend, factor-closed
        std::set<std::vector<int>> words{{}};
        const int target = pick(2, spec.max_dim);
        for (const auto& w : cand) {
            if (static_cast<int>(words.size()) >= target) break;
            if (pick(0, 3) == 0 && w.size() > 1) continue;
            bool closed = true;
            for (std::size_t i = 0; i < w.size() && closed; ++i)
                for (std::size_t j = i + 1; j <= w.size() && closed; ++j) {
                    if (i == 0 && j == w.size()) continue;
                    closed = words.count(std::vector<int>(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(j))) > 0;
                }
            if (closed) words.insert(w);
        }
        std::vector<std::vector<int>> wl(words.begin(), words.end());
        CDGAlgebra<S> base = monomial_algebra<S>("R", names, gd, wl);
        Vec<S> a;
        for (int i : base.space.component(1)) {
            int c = pick(-spec.coefficient_range, spec.coefficient_range);
            if (c != 0) a.emplace(i, S(c));
        }
        CDGAlgebra<S> tw = a.empty() ? base : inner_twist(base, a);
        if (spec.curved && tw.h.empty() && attempt < 200) continue;
        if (!spec.curved && !tw.h.empty()) {
            a.clear();
            tw = base;
        }
        if (spec.rebase) {
            Vec<S> nu;
            for (int i : tw.space.component(0))
                if (i != 0) {
                    int c = pick(-spec.coefficient_range, spec.coefficient_range);
                    if (c != 0) nu.emplace(i, S(c));
                }
            if (!nu.empty()) tw = rebase(tw, nu);
        }
        tw.name = "R" + std::to_string(tw.dim());
        return {share(std::move(tw)), a};
    }
}

/// Twisted module of rank one or two over a random algebra: connection
/// a·id plus scalar entries between generators of adjacent degrees.
template <class S>
CDGModule<S> random_twisted_module(std::mt19937_64& rng, const RandomAlgebra<S>& ra, int max_rank = 2, int coefficient_range = 2) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int r = pick(1, max_rank);
    Connection<S> c;
    c.degrees.resize(static_cast<std::size_t>(r));
    c.degrees[0] = pick(-1, 1);
    for (int v = 1; v < r; ++v) c.degrees[static_cast<std::size_t>(v)] = c.degrees[static_cast<std::size_t>(v - 1)] + pick(0, 1);
    c.alpha.assign(static_cast<std::size_t>(r), std::vector<Vec<S>>(static_cast<std::size_t>(r)));
    for (int v = 0; v < r; ++v) c.alpha[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] = ra.twist;
    for (int v = 0; v < r; ++v)
        for (int w = 0; w < r; ++w)
            if (c.degrees[static_cast<std::size_t>(w)] == c.degrees[static_cast<std::size_t>(v)] + 1) {
                int x = pick(-coefficient_range, coefficient_range);
                if (x != 0) axpy(c.alpha[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)], 0, S(x));
            }
    return twisted_module(ra.algebra, c, "Tw" + std::to_string(r));
}

}  // namespace cdg
