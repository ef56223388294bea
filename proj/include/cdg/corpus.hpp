#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "cdg/bimodule.hpp"
#include "cdg/oracles.hpp"
#include "cdg/random.hpp"

namespace cdg {

/// Seeded instance generators shared by the regression suite and the tests.

template <class S>
S random_scalar(std::mt19937_64& rng, int range) {
    return S(std::uniform_int_distribution<int>(-range, range)(rng));
}

/// A random combination of cocycles of Hom^p(M, N), or nullopt when Z^p = 0.
template <class S>
std::optional<ModMap<S>> random_closed_map(std::mt19937_64& rng, const ModulePtr<S>& m, const ModulePtr<S>& n, int p, int range = 2) {
    HomComplex<S> h(m, n, p, p);
    auto z = cohomology_data(h.complex(), p).cycles;
    if (z.empty()) return std::nullopt;
    Vec<S> v;
    for (const auto& c : z) axpy(v, c, random_scalar<S>(rng, range));
    if (v.empty()) v = z[0];
    ModMap<S> f = h.map_of(v);
    f.degree = p;
    return f;
}

/// A structure constant of A changed at random; may or may not break an axiom.
template <class S>
CDGAlgebra<S> corrupt_algebra(std::mt19937_64& rng, const CDGAlgebra<S>& a) {
    CDGAlgebra<S> b = a;
    const int n = a.dim();
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int attempt = 0; attempt < 50; ++attempt) {
        const int kind = pick(0, 2);
        if (kind == 0 && n > 1) {
            int i = pick(1, n - 1), j = pick(1, n - 1);
            auto targets = a.space.component(a.deg(i) + a.deg(j));
            if (targets.empty()) continue;
            int t = targets[static_cast<std::size_t>(pick(0, static_cast<int>(targets.size()) - 1))];
            Triplets<S> tr;
            tr.add(t, i * n + j, S(1));
            b.mult = pruned<S>(SparseMat<S>(a.mult + tr.build(n, n * n)));
            return b;
        }
        if (kind == 1) {
            int i = pick(0, n - 1);
            auto targets = a.space.component(a.deg(i) + 1);
            if (targets.empty()) continue;
            int t = targets[static_cast<std::size_t>(pick(0, static_cast<int>(targets.size()) - 1))];
            Triplets<S> tr;
            tr.add(t, i, S(1));
            b.d = pruned<S>(SparseMat<S>(a.d + tr.build(n, n)));
            return b;
        }
        auto targets = a.space.component(2);
        if (targets.empty()) continue;
        axpy(b.h, targets[static_cast<std::size_t>(pick(0, static_cast<int>(targets.size()) - 1))], S(1));
        return b;
    }
    return b;
}

/// One entry of the axiom battery: an algebra (possibly corrupted) and
/// modules over it (possibly with an invalid connection).
template <class S>
struct BatteryCase {
    AlgebraPtr<S> algebra;
    bool corrupted = false;
    std::vector<ModulePtr<S>> modules;
};

template <class S>
std::vector<BatteryCase<S>> axiom_battery(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<BatteryCase<S>> out;
    for (int i = 0; i < count; ++i) {
        RandomSpec spec;
        spec.max_dim = 6;
        spec.curved = i % 2 == 0;
        RandomAlgebra<S> ra = random_algebra<S>(rng, spec);
        BatteryCase<S> c;
        if (i % 4 == 3) {
            c.corrupted = true;
            c.algebra = share(corrupt_algebra(rng, *ra.algebra));
            out.push_back(c);
            continue;
        }
        c.algebra = ra.algebra;
        for (int k = 0; k < 2; ++k) {
            try {
                c.modules.push_back(share(random_twisted_module(rng, ra, 2)));
            } catch (const InvalidConnection&) {
            }
        }
        if (i % 4 == 1) {
            // a connection drawn without regard to (d + α)^2 = h
            Connection<S> conn;
            conn.degrees = {0, 1};
            conn.alpha.assign(2, std::vector<Vec<S>>(2));
            for (int w = 0; w < 2; ++w)
                for (int v = 0; v < 2; ++v)
                    for (int k : ra.algebra->space.component(conn.degrees[static_cast<std::size_t>(v)] + 1 - conn.degrees[static_cast<std::size_t>(w)])) {
                        S x = random_scalar<S>(rng, 1);
                        if (!x.is_zero()) axpy(conn.alpha[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)], k, x);
                    }
            c.modules.push_back(share(twisted_module_unchecked(ra.algebra, conn, "U2")));
        }
        out.push_back(c);
    }
    return out;
}

/// The algebras of the bar criteria: k[ε]/(ε²) and k[x]/(x³) with the
/// generator in degree 2, and a random curved algebra of dimension 4.
template <class S>
std::vector<RandomAlgebra<S>> bar_algebras(std::uint64_t seed) {
    std::vector<RandomAlgebra<S>> out;
    out.push_back({share(exterior<S>("ε", 2)), {}});
    out.push_back({share(truncated_polynomial<S>("x", 2, 2, S(0), false)), {}});
    std::mt19937_64 rng(seed);
    RandomSpec spec;
    spec.max_dim = 4;
    spec.curved = true;
    for (;;) {
        RandomAlgebra<S> ra = random_algebra<S>(rng, spec);
        if (ra.algebra->dim() == 4 && !ra.algebra->h.empty()) {
            out.push_back(ra);
            break;
        }
    }
    return out;
}

/// Modules over a bar-criterion algebra: the free module, and for curved
/// algebras a random twisted module; for augmented flat ones also k.
template <class S>
std::vector<ModulePtr<S>> bar_modules(std::mt19937_64& rng, const RandomAlgebra<S>& ra) {
    std::vector<ModulePtr<S>> out;
    out.push_back(share(rank_one<S>(ra.algebra, 0, ra.twist, "A")));
    if (ra.algebra->h.empty()) {
        out.push_back(share(trivial_module<S>(ra.algebra, 0)));
    } else {
        for (int k = 0; k < 20; ++k) {
            try {
                out.push_back(share(random_twisted_module(rng, ra, 2)));
                break;
            } catch (const InvalidConnection&) {
            }
        }
    }
    return out;
}

/// Coalgebra samples for the Φ/Ψ checks: C = A* for a random A of
/// dimension at most 4, with a free contramodule P (the dual translation of
/// a twisted module) and the comodule Φ(P).
template <class S>
struct CoalgebraCase {
    CoalgebraPtr<S> coalgebra;
    ContramodulePtr<S> contra;
    ComodulePtr<S> comod;
};

template <class S>
std::vector<CoalgebraCase<S>> coalgebra_corpus(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<CoalgebraCase<S>> out;
    while (static_cast<int>(out.size()) < count) {
        RandomSpec spec;
        spec.max_dim = 4;
        spec.curved = out.size() % 2 == 0;
        spec.rebase = false;
        RandomAlgebra<S> ra = random_algebra<S>(rng, spec);
        CoalgebraCase<S> c;
        c.coalgebra = share(dual_coalgebra(*ra.algebra));
        auto dual = share(dual_algebra(*c.coalgebra));
        TwistedBounds<S> tb;
        tb.max_rank = 1;
        tb.deg_lo = 0;
        tb.deg_hi = 1;
        tb.coefficients = {S(0), S(1), S(-1)};
        tb.max_candidates = 2000;
        auto fam = enumerate_twisted(dual, tb);
        if (fam.empty()) continue;
        auto m = fam[std::uniform_int_distribution<std::size_t>(0, fam.size() - 1)(rng)];
        c.contra = share(module_to_contra(*m, c.coalgebra));
        c.comod = share(phi(c.contra).comod);
        out.push_back(c);
    }
    return out;
}

/// Modules for the cylinder checks: random twisted modules over random
/// algebras, alternating curved and flat.
template <class S>
std::vector<ModulePtr<S>> module_corpus(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<ModulePtr<S>> out;
    while (static_cast<int>(out.size()) < count) {
        RandomSpec spec;
        spec.max_dim = 5;
        spec.curved = out.size() % 2 == 0;
        RandomAlgebra<S> ra = random_algebra<S>(rng, spec);
        try {
            out.push_back(share(random_twisted_module(rng, ra, 2)));
        } catch (const InvalidConnection&) {
        }
    }
    return out;
}

/// Pushout-product instance: bimodules U ⊂ V over A-B, W ⊂ X over B-D and
/// the inclusions f, g.  In the generating shape V and X add generators to
/// twisted bimodules; in the trivial shape V = U ⊕ cone(id_T), with the
/// projection f' and a contraction h supported on the cone.
template <class S>
struct PushoutCase {
    bool trivial = false;
    Bimodule<S> u, v, w, x;
    ModMap<S> f, g;
    std::optional<ModMap<S>> f_inv, h;
};

namespace detail {

template <class S>
RandomAlgebra<S> envelope_of(Envelopes<S>& env, const RandomAlgebra<S>& l, const RandomAlgebra<S>& r) {
    RandomAlgebra<S> e;
    e.algebra = env.get(l.algebra, r.algebra);
    const int nb = r.algebra->dim();
    for (const auto& [i, x] : l.twist) axpy(e.twist, i * nb, x);
    for (const auto& [j, x] : r.twist) axpy(e.twist, j, -x);
    return e;
}

// twisted module of rank r0 + extra whose first r0 generators span a submodule
template <class S>
std::pair<ModulePtr<S>, ModulePtr<S>> random_cell_pair(std::mt19937_64& rng, const RandomAlgebra<S>& e, int r0, int extra) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (;;) {
        const int r = r0 + extra;
        Connection<S> c;
        c.degrees.resize(static_cast<std::size_t>(r));
        c.degrees[0] = pick(-1, 0);
        for (int v = 1; v < r; ++v) c.degrees[static_cast<std::size_t>(v)] = c.degrees[static_cast<std::size_t>(v - 1)] + pick(0, 1);
        c.alpha.assign(static_cast<std::size_t>(r), std::vector<Vec<S>>(static_cast<std::size_t>(r)));
        for (int v = 0; v < r; ++v) c.alpha[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] = e.twist;
        for (int v = 0; v < r; ++v)
            for (int w = 0; w < r; ++w) {
                if (v < r0 && w >= r0) continue;
                if (c.degrees[static_cast<std::size_t>(w)] != c.degrees[static_cast<std::size_t>(v)] + 1) continue;
                S x = random_scalar<S>(rng, 1);
                if (!x.is_zero()) axpy(c.alpha[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)], 0, x);
            }
        Connection<S> c0;
        c0.degrees.assign(c.degrees.begin(), c.degrees.begin() + r0);
        c0.alpha.assign(static_cast<std::size_t>(r0), std::vector<Vec<S>>(static_cast<std::size_t>(r0)));
        for (int v = 0; v < r0; ++v)
            for (int w = 0; w < r0; ++w) c0.alpha[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)] = c.alpha[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)];
        try {
            auto big = share(twisted_module(e.algebra, c, "V" + std::to_string(r)));
            auto small = share(twisted_module(e.algebra, c0, "U" + std::to_string(r0)));
            return {small, big};
        } catch (const InvalidConnection&) {
        }
    }
}

// A⊗V⊗B -> A⊗V'⊗B on the first r0 generators
template <class S>
ModMap<S> generator_inclusion(const ModulePtr<S>& small, const ModulePtr<S>& big, int r0, int r) {
    std::vector<Vec<S>> img;
    for (int j = 0; j < small->dim(); ++j) img.push_back(unit_vec<S>((j / r0) * r + j % r0));
    return module_map<S>(small, big, 0, img);
}

template <class S>
ModulePtr<S> random_twisted_retry(std::mt19937_64& rng, const RandomAlgebra<S>& e, int max_rank) {
    for (;;) {
        try {
            return share(random_twisted_module(rng, e, max_rank));
        } catch (const InvalidConnection&) {
        }
    }
}

}  // namespace detail

template <class S>
std::vector<PushoutCase<S>> pushout_corpus(std::uint64_t seed, int count, Envelopes<S>& env) {
    std::mt19937_64 rng(seed);
    std::vector<PushoutCase<S>> out;
    for (int i = 0; i < count; ++i) {
        RandomSpec spec;
        spec.max_dim = 3;
        spec.curved = i % 3 == 0;
        spec.rebase = false;
        auto a = random_algebra<S>(rng, spec), b = random_algebra<S>(rng, spec), d = random_algebra<S>(rng, spec);
        auto eab = detail::envelope_of(env, a, b), ebd = detail::envelope_of(env, b, d);
        PushoutCase<S> c;
        c.trivial = i % 2 == 1;
        if (!c.trivial) {
            auto [u, v] = detail::random_cell_pair(rng, eab, 1, 1);
            auto [w, x] = detail::random_cell_pair(rng, ebd, 1, 1);
            c.u = {a.algebra, b.algebra, u};
            c.v = {a.algebra, b.algebra, v};
            c.w = {b.algebra, d.algebra, w};
            c.x = {b.algebra, d.algebra, x};
            c.f = detail::generator_inclusion(u, v, 1, 2);
            c.g = detail::generator_inclusion(w, x, 1, 2);
        } else {
            auto u = detail::random_twisted_retry(rng, eab, 1);
            auto t = detail::random_twisted_retry(rng, eab, 1);
            Cone<S> ct = cone(identity_map(t));
            auto v = share(direct_sum(*u, *ct.module));
            auto [w, x] = detail::random_cell_pair(rng, ebd, 1, 1);
            c.u = {a.algebra, b.algebra, u};
            c.v = {a.algebra, b.algebra, v};
            c.w = {b.algebra, d.algebra, w};
            c.x = {b.algebra, d.algebra, x};
            const int ku = u->dim(), kv = v->dim();
            Triplets<S> tf, tp;
            for (int j = 0; j < ku; ++j) tf.add(j, j, S(1)), tp.add(j, j, S(1));
            c.f = {u, v, 0, tf.build(kv, ku)};
            c.f_inv = ModMap<S>{v, u, 0, tp.build(ku, kv)};
            c.g = detail::generator_inclusion(w, x, 1, 2);
            auto hc = null_homotopy(identity_map(ct.module));
            if (!hc.psi) throw std::logic_error("cone of an identity is not contractible");
            Triplets<S> th;
            for (int j = 0; j < ct.module->dim(); ++j)
                for (const auto& [r, y] : (*hc.psi)(j)) th.add(ku + r, ku + j, y);
            c.h = ModMap<S>{v, v, -1, th.build(kv, kv)};
        }
        out.push_back(c);
    }
    return out;
}

/// Pool of modules over k[ε]/(ε²) with |ε| = 1 for the model comparison:
/// rank one B_λ, k, cones, and sums with contractible summands.
template <class S>
std::vector<ModulePtr<S>> exterior_pool(const AlgebraPtr<S>& a) {
    std::vector<ModulePtr<S>> base;
    for (int g = 0; g <= 1; ++g)
        for (int l = -1; l <= 1; ++l)
            base.push_back(share(rank_one<S>(a, g, l == 0 ? Vec<S>{} : Vec<S>{{1, S(l)}}, "B" + std::to_string(l) + "[" + std::to_string(-g) + "]")));
    base.push_back(share(trivial_module<S>(a, 0, "k")));
    base.push_back(share(trivial_module<S>(a, 1, "k[-1]")));
    std::vector<ModulePtr<S>> pool = base;
    pool.push_back(cone(identity_map(base[1])).module);
    pool.push_back(share(direct_sum(*base[1], *cone(identity_map(base[2])).module)));
    pool.push_back(share(direct_sum(*base[6], *base[4])));
    return pool;
}

/// Closed degree-0 maps between pool members, each with a flag saying
/// whether it was certified a homotopy equivalence.
template <class S>
struct MapCase {
    ModMap<S> map;
    bool homotopy_equivalence = false;
};

template <class S>
std::vector<MapCase<S>> exterior_maps(std::uint64_t seed, int count, const std::vector<ModulePtr<S>>& pool) {
    std::mt19937_64 rng(seed);
    std::vector<MapCase<S>> out;
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    while (static_cast<int>(out.size()) < count) {
        const auto& m = pool[pick(pool.size())];
        const auto& n = out.size() % 5 == 0 ? m : pool[pick(pool.size())];
        auto f = random_closed_map<S>(rng, m, n, 0);
        if (!f) continue;
        MapCase<S> c{*f, certify_homotopy_equivalence(*f).has_value()};
        out.push_back(c);
    }
    return out;
}

/// Homotopy equivalences between pool members: scalings by 2, inclusions
/// into a sum with a contractible cone, and the projections back.  Only
/// maps whose cone is certified contractible are kept.
template <class S>
std::vector<ModMap<S>> homotopy_equivalence_corpus(const std::vector<ModulePtr<S>>& pool, int count) {
    std::vector<ModMap<S>> out;
    const int n = std::min<int>(6, static_cast<int>(pool.size()));
    for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
        const auto& m = pool[static_cast<std::size_t>(i % n)];
        const auto& t = pool[static_cast<std::size_t>((i + 1) % n)];
        ModMap<S> f;
        if (i % 3 == 0) {
            f = identity_map(m);
            f.matrix = SparseMat<S>(f.matrix * S(2));
        } else {
            auto s = share(direct_sum(*m, *cone(identity_map(t)).module));
            Triplets<S> ti;
            for (int j = 0; j < m->dim(); ++j) ti.add(j, j, S(1));
            ModMap<S> inc{m, s, 0, ti.build(s->dim(), m->dim())};
            if (i % 3 == 1) f = inc;
            else f = {s, m, 0, SparseMat<S>(inc.matrix.transpose())};
        }
        if (certify_homotopy_equivalence(f)) out.push_back(f);
    }
    return out;
}

}  // namespace cdg
