#pragma once

#include <string>
#include <vector>

#include "cdg/oracles.hpp"

namespace cdg {

/// k[x] with |x| = 1 and d(x) = -x^2, known on degrees [0, top].
template <class S>
struct PolynomialExample {
    AlgebraPtr<S> algebra;
    ModulePtr<S> free;     // A
    ModulePtr<S> twisted;  // A^x: rank one with connection -x
    ModulePtr<S> ground;   // k
    ModMap<S> augmentation;
};

template <class S>
PolynomialExample<S> polynomial_example(int top) {
    PolynomialExample<S> e;
    e.algebra = share(truncated_polynomial<S>("x", 1, top, S(-1)));
    e.free = share(rank_one<S>(e.algebra, 0, {}, "A"));
    e.twisted = share(rank_one<S>(e.algebra, 0, Vec<S>{{1, S(-1)}}, "A^x"));
    e.ground = share(trivial_module<S>(e.algebra, 0, "k"));
    std::vector<Vec<S>> cols(static_cast<std::size_t>(e.free->dim()));
    cols[0] = unit_vec<S>(0);
    e.augmentation = module_map<S>(e.free, e.ground, 0, cols);
    return e;
}

/// The non-cofibrancy example: B = k[ε]/(ε²) with |ε| = 1, A = k[x] with
/// |x| = 0 cut at x^K, the B-A-bimodule X = B ⊗ A with d(1⊗1) = ε⊗x, and
/// the telescopes T_λ on generators e_1..e_K of degree 1 with
/// d(e_i) = λε e_i + ε e_{i-1}.  φ sends each e_1 to the generator of k[-1].
template <class S>
struct NotCofibExample {
    int window = 0;
    std::vector<S> lambdas;
    AlgebraPtr<S> B, A, E;
    ModulePtr<S> X;   // over B ⊗ A^op
    ModulePtr<S> BX;  // restricted to B
    ModMap<S> psi;    // k[-1] -> BX, 1 ↦ ε⊗1
    std::vector<ModulePtr<S>> family;  // B_λ
    ModulePtr<S> shifted_ground;       // k[-1]
    std::vector<ModulePtr<S>> telescope, telescope_short;
    std::vector<ModMap<S>> phi_summand, inclusion_summand;
    ModulePtr<S> sum, sum_short;
    ModMap<S> phi, inclusion;
};

namespace detail {

template <class S>
CDGModule<S> telescope_module(const AlgebraPtr<S>& b, const std::vector<S>& lambdas, int copies, const std::string& name) {
    const int r = static_cast<int>(lambdas.size()) * copies;
    Connection<S> c;
    c.degrees.assign(static_cast<std::size_t>(r), 1);
    c.alpha.assign(static_cast<std::size_t>(r), std::vector<Vec<S>>(static_cast<std::size_t>(r)));
    for (std::size_t l = 0; l < lambdas.size(); ++l)
        for (int i = 0; i < copies; ++i) {
            const auto v = static_cast<std::size_t>(static_cast<int>(l) * copies + i);
            if (!lambdas[l].is_zero()) c.alpha[v][v] = Vec<S>{{1, lambdas[l]}};
            if (i > 0) c.alpha[v - 1][v] = Vec<S>{{1, S(1)}};
        }
    return twisted_module(b, c, name);
}

// e_1 of every block ↦ 1, everything else ↦ 0
template <class S>
ModMap<S> telescope_projection(const ModulePtr<S>& t, const ModulePtr<S>& k1, int blocks, int copies) {
    std::vector<Vec<S>> img(static_cast<std::size_t>(t->dim()));
    for (int l = 0; l < blocks; ++l) img[static_cast<std::size_t>(l * copies)] = unit_vec<S>(0);
    return module_map<S>(t, k1, 0, img);
}

// generator e_i of block l of the short telescope to the same generator of the long one
template <class S>
ModMap<S> telescope_inclusion(const ModulePtr<S>& small, const ModulePtr<S>& big, int blocks, int copies) {
    const int rs = blocks * (copies - 1), rb = blocks * copies;
    std::vector<Vec<S>> img;
    for (int j = 0; j < small->dim(); ++j) {
        const int i = j / rs, v = j % rs;
        const int l = v / (copies - 1), e = v % (copies - 1);
        img.push_back(unit_vec<S>(i * rb + l * copies + e));
    }
    return module_map<S>(small, big, 0, img);
}

}  // namespace detail

template <class S>
NotCofibExample<S> notcofib_example(const std::vector<S>& lambdas, int window) {
    if (window < 2) throw OutOfWindow("telescope window must be at least 2");
    NotCofibExample<S> e;
    e.window = window;
    e.lambdas = lambdas;
    e.B = share(exterior<S>("ε", 1));
    e.A = share(truncated_polynomial<S>("x", 0, window));
    e.E = share(bimodule_algebra(*e.B, *e.A));
    const int na = e.A->dim();
    e.X = share(rank_one<S>(e.E, 0, Vec<S>{{1 * na + 1, S(1)}}, "X"));
    Triplets<S> res;
    for (int b = 0; b < e.B->dim(); ++b) res.add(b * na, b, S(1));
    e.BX = share(restrict_module(*e.X, e.B, res.build(e.E->dim(), e.B->dim()), "_BX"));
    e.shifted_ground = share(trivial_module<S>(e.B, 1, "k[-1]"));
    e.psi = module_map<S>(e.shifted_ground, e.BX, 0, {unit_vec<S>(1 * na)});
    for (const S& l : lambdas) {
        const std::string tag = "λ=" + l.str();
        e.family.push_back(share(rank_one<S>(e.B, 0, l.is_zero() ? Vec<S>{} : Vec<S>{{1, l}}, "B_" + tag)));
        e.telescope.push_back(share(detail::telescope_module(e.B, std::vector<S>{l}, window, "T_" + tag)));
        e.telescope_short.push_back(share(detail::telescope_module(e.B, std::vector<S>{l}, window - 1, "T'_" + tag)));
        e.phi_summand.push_back(detail::telescope_projection(e.telescope.back(), e.shifted_ground, 1, window));
        e.inclusion_summand.push_back(detail::telescope_inclusion(e.telescope_short.back(), e.telescope.back(), 1, window));
    }
    const int nl = static_cast<int>(lambdas.size());
    e.sum = share(detail::telescope_module(e.B, lambdas, window, "T"));
    e.sum_short = share(detail::telescope_module(e.B, lambdas, window - 1, "T'"));
    e.phi = detail::telescope_projection(e.sum, e.shifted_ground, nl, window);
    e.inclusion = detail::telescope_inclusion(e.sum_short, e.sum, nl, window);
    return e;
}

/// Projective test of φ: T -> N where T is only known through a truncation
/// T' ⊂ T one step shorter: H(Hom(P, T)) is replaced by the image of
/// H(Hom(P, T')), the classes that survive one more step of the telescope.
template <class S>
WEReport stable_we_projective(const ModMap<S>& phi, const ModMap<S>& inclusion, const std::vector<ModulePtr<S>>& family, int lo, int hi) {
    if (phi.degree != 0 || !is_closed(phi) || !is_closed(inclusion)) throw NotClosed("stable test needs closed degree-0 maps");
    WEReport r;
    r.model = "projective (stable in telescope window)";
    r.map = phi.source->name + " -> " + phi.target->name;
    r.lo = lo;
    r.hi = hi;
    const ModMap<S> composite = compose(phi, inclusion);
    for (const auto& t : family) {
        HomComplex<S> hs(t, inclusion.source, lo, hi), hl(t, inclusion.target, lo, hi), hn(t, phi.target, lo, hi);
        const SparseMat<S> inc = postcompose(inclusion, hs, hl);
        const SparseMat<S> comp = postcompose(composite, hs, hn);
        MemberVerdict v;
        v.member = t->name;
        v.window = hs.complex().trusted.meet(hn.complex().trusted);
        for (int p = lo; p <= hi; ++p) {
            if (!v.window.contains(p)) continue;
            auto ds = cohomology_data(hs.complex(), p);
            auto dl = cohomology_data(hl.complex(), p);
            auto dn = cohomology_data(hn.complex(), p);
            MemberDegree d{p, induced_rank(inc, ds, dl, hl.complex().space.dim()), dn.dim(), induced_rank(comp, ds, dn, hn.complex().space.dim())};
            v.degrees.push_back(d);
            if (!d.iso() && v.iso) {
                v.iso = false;
                v.failing_degree = p;
            }
        }
        r.members.push_back(v);
    }
    detail::conclude(r);
    return r;
}

}  // namespace cdg
