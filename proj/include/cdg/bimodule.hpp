#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cdg/homcomplex.hpp"

namespace cdg {

/// An A-B-bimodule, stored as a left module over A ⊗ B^op with basis index
/// i * dim B + j for e_i ⊗ e_j.  The right action is
/// m·b = (-1)^{|b||m|} (1 ⊗ b)·m.
template <class S>
struct Bimodule {
    AlgebraPtr<S> left, right;
    ModulePtr<S> module;

    int dim() const { return module->dim(); }
    Vec<S> lact(int a, const Vec<S>& m) const { return module->act(unit_vec<S>(a * right->dim()), m); }
    Vec<S> ract(const Vec<S>& m, int b) const {
        Vec<S> r;
        for (const auto& [j, x] : m) axpy(r, module->act(b, j), x * sign<S>(static_cast<long>(right->deg(b)) * module->deg(j)));
        return r;
    }
};

/// Enveloping algebras are shared so that modules built over the same pair
/// carry the same algebra pointer.
template <class S>
class Envelopes {
public:
    AlgebraPtr<S> get(const AlgebraPtr<S>& a, const AlgebraPtr<S>& b) {
        for (const auto& e : cache_)
            if (e.a == a && e.b == b) return e.env;
        cache_.push_back({a, b, share(bimodule_algebra(*a, *b))});
        return cache_.back().env;
    }

private:
    struct Entry {
        AlgebraPtr<S> a, b, env;
    };
    std::vector<Entry> cache_;
};

/// Quotient of an ambient graded space carrying an action and a
/// differential by the span of relations, which must be a d-stable
/// submodule.  Basis vectors of the quotient are ambient basis vectors
/// (representatives) whose images form a basis.
template <class S>
struct Quotient {
    ModulePtr<S> module;
    SparseMat<S> projection;  // dim Q x dim ambient
    std::vector<int> representatives;
};

template <class S>
Quotient<S> quotient_module(const std::string& name, const AlgebraPtr<S>& alg, const GradedSpace& ambient, const std::function<Vec<S>(int, int)>& act,
                            const std::function<Vec<S>(int)>& diff, const std::vector<Vec<S>>& relations) {
    Subspace<S> rel(ambient.dim(), relations);
    Quotient<S> q;
    q.representatives = rel.complement();
    GradedSpace sp;
    for (int r : q.representatives) sp.add(ambient.degree(r), ambient.label(r));
    Triplets<S> tp;
    for (int j = 0; j < ambient.dim(); ++j) tp.add_column(j, rel.quotient(unit_vec<S>(j)));
    q.projection = tp.build(sp.dim(), ambient.dim());
    const auto& reps = q.representatives;
    q.module = share(assemble_module<S>(
        name, alg, sp, [&](int a, int j) { return rel.quotient(act(a, reps[static_cast<std::size_t>(j)])); },
        [&](int j) { return rel.quotient(diff(reps[static_cast<std::size_t>(j)])); }));
    return q;
}

/// M ⊗_B N for an A-B-bimodule M and a B-D-bimodule N: the quotient of
/// M ⊗ N (index m * dim N + n) by m·b ⊗ n - m ⊗ b·n, with
/// (a ⊗ d)·(m ⊗ n) = (-1)^{|d||m|} (a ⊗ 1)m ⊗ (1 ⊗ d)n and
/// d(m ⊗ n) = dm ⊗ n + (-1)^{|m|} m ⊗ dn.
template <class S>
struct RelativeTensor {
    Bimodule<S> left_factor, right_factor;
    Bimodule<S> result;
    Quotient<S> quotient;
};

template <class S>
RelativeTensor<S> relative_tensor(const Bimodule<S>& m, const Bimodule<S>& n, Envelopes<S>& env) {
    if (m.right != n.left) throw std::invalid_argument("relative tensor: " + m.module->name + " and " + n.module->name + " do not share B");
    const CDGModule<S>& mm = *m.module;
    const CDGModule<S>& nn = *n.module;
    const int km = mm.dim(), kn = nn.dim();
    const int nb = m.right->dim(), nd = n.right->dim();
    GradedSpace amb;
    for (int i = 0; i < km; ++i)
        for (int j = 0; j < kn; ++j) amb.add(mm.deg(i) + nn.deg(j), mm.label(i) + "⊗" + nn.label(j));
    auto tensor = [&](const Vec<S>& x, const Vec<S>& y, const S& c) {
        Vec<S> r;
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) axpy(r, i * kn + j, c * a * b);
        return r;
    };
    std::vector<Vec<S>> rel;
    for (int i = 0; i < km; ++i)
        for (int b = 1; b < nb; ++b)
            for (int j = 0; j < kn; ++j) {
                Vec<S> r = tensor(m.ract(unit_vec<S>(i), b), unit_vec<S>(j), S(1));
                axpy(r, tensor(unit_vec<S>(i), nn.act(b * nd, j), S(1)), S(-1));
                if (!r.empty()) rel.push_back(r);
            }
    auto act = [&](int x, int col) {
        const int a = x / nd, d = x % nd, i = col / kn, j = col % kn;
        return tensor(mm.act(a * nb, i), nn.act(d, j), sign<S>(static_cast<long>(n.right->deg(d)) * mm.deg(i)));
    };
    auto diff = [&](int col) {
        const int i = col / kn, j = col % kn;
        Vec<S> r = tensor(mm.diff(i), unit_vec<S>(j), S(1));
        axpy(r, tensor(unit_vec<S>(i), nn.diff(j), S(1)), sign<S>(mm.deg(i)));
        return r;
    };
    RelativeTensor<S> t;
    t.left_factor = m;
    t.right_factor = n;
    AlgebraPtr<S> e = env.get(m.left, n.right);
    t.quotient = quotient_module<S>(mm.name + "⊗_B" + nn.name, e, amb, act, diff, rel);
    t.result = {m.left, n.right, t.quotient.module};
    return t;
}

/// F ⊗_B G between relative tensors, (F ⊗ G)(m ⊗ n) = (-1)^{|G||m|} F(m) ⊗ G(n).
template <class S>
ModMap<S> tensor_maps(const ModMap<S>& f, const ModMap<S>& g, const RelativeTensor<S>& src, const RelativeTensor<S>& tgt) {
    const int kn = src.right_factor.dim(), tkn = tgt.right_factor.dim();
    Triplets<S> t;
    for (int q = 0; q < src.result.dim(); ++q) {
        const int col = src.quotient.representatives[static_cast<std::size_t>(q)];
        const int i = col / kn, j = col % kn;
        const S sg = sign<S>(static_cast<long>(g.degree) * src.left_factor.module->deg(i));
        Vec<S> amb;
        for (const auto& [a, x] : f(i))
            for (const auto& [b, y] : g(j)) axpy(amb, a * tkn + b, sg * x * y);
        t.add_column(q, cdg::apply(tgt.quotient.projection, amb));
    }
    return {src.result.module, tgt.result.module, f.degree + g.degree, t.build(tgt.result.dim(), src.result.dim())};
}

/// Pushout product of f: U -> V (A-B) and g: W -> X (B-D):
/// Z = (V⊗W ⊕ U⊗X) / {(f⊗1)(y), -(1⊗g)(y)} and f□g(v⊗w, u⊗x) = v⊗g(w) + f(u)⊗x.
template <class S>
struct PushoutProduct {
    RelativeTensor<S> uw, vw, ux, vx;
    ModulePtr<S> sum;  // V⊗W ⊕ U⊗X
    Quotient<S> z;
    ModMap<S> map;     // Z -> V⊗X
    ModMap<S> from_vw, from_ux;  // legs into Z
};

template <class S>
PushoutProduct<S> pushout_product(const ModMap<S>& f, const Bimodule<S>& u, const Bimodule<S>& v, const ModMap<S>& g, const Bimodule<S>& w,
                                  const Bimodule<S>& x, Envelopes<S>& env) {
    if (f.degree != 0 || g.degree != 0) throw NotClosed("pushout product needs degree-0 maps");
    PushoutProduct<S> p;
    p.uw = relative_tensor(u, w, env);
    p.vw = relative_tensor(v, w, env);
    p.ux = relative_tensor(u, x, env);
    p.vx = relative_tensor(v, x, env);
    const ModMap<S> idu = identity_map(u.module), idw = identity_map(w.module);
    const ModMap<S> fw = tensor_maps(f, idw, p.uw, p.vw);
    const ModMap<S> ug = tensor_maps(idu, g, p.uw, p.ux);
    p.sum = share(direct_sum(*p.vw.result.module, *p.ux.result.module));
    const int kvw = p.vw.result.dim();
    std::vector<Vec<S>> rel;
    for (int y = 0; y < p.uw.result.dim(); ++y) {
        Vec<S> r = fw(y);
        for (const auto& [k, c] : ug(y)) axpy(r, kvw + k, -c);
        if (!r.empty()) rel.push_back(r);
    }
    const CDGModule<S>& sm = *p.sum;
    p.z = quotient_module<S>("Z(" + f.source->name + "," + g.source->name + ")", sm.algebra, sm.space, [&](int a, int j) { return sm.act(a, j); },
                             [&](int j) { return sm.diff(j); }, rel);
    const ModMap<S> vg = tensor_maps(identity_map(v.module), g, p.vw, p.vx);
    const ModMap<S> fx = tensor_maps(f, identity_map(x.module), p.ux, p.vx);
    Triplets<S> t;
    for (int q = 0; q < p.z.module->dim(); ++q) {
        const int r = p.z.representatives[static_cast<std::size_t>(q)];
        t.add_column(q, r < kvw ? vg(r) : fx(r - kvw));
    }
    p.map = {p.z.module, p.vx.result.module, 0, t.build(p.vx.result.dim(), p.z.module->dim())};
    Triplets<S> a, b;
    for (int j = 0; j < kvw; ++j) a.add_column(j, column(p.z.projection, j));
    for (int j = 0; j < p.ux.result.dim(); ++j) b.add_column(j, column(p.z.projection, kvw + j));
    p.from_vw = {p.vw.result.module, p.z.module, 0, a.build(p.z.module->dim(), kvw)};
    p.from_ux = {p.ux.result.module, p.z.module, 0, b.build(p.z.module->dim(), p.ux.result.dim())};
    return p;
}

/// For f with a homotopy inverse f' (f'f = id) and h with D(h) = id - ff'
/// and hf = 0: ψ(v⊗x) = (0, f'(v)⊗x) inverts f□g up to the homotopies
/// h⊗1 on V⊗X and (h⊗1, 0) on Z.
template <class S>
AxiomReport verify_pushout_inverse(const PushoutProduct<S>& p, const ModMap<S>& f, const ModMap<S>& f_inv, const ModMap<S>& h, const Bimodule<S>& w,
                                   const Bimodule<S>& x) {
    AxiomReport rep;
    rep.subject = "homotopy inverse of " + p.map.source->name + " -> " + p.map.target->name;
    rep.record("f'f = id", equal<S>(compose(f_inv, f).matrix, identity<S>(f.source->dim())) ? "" : "f'f != id");
    rep.record("D(h) = id - ff'", equal<S>(hom_differential(h).matrix, (identity_map(f.target) - compose(f, f_inv)).matrix) ? "" : "homotopy fails");
    rep.record("hf = 0", is_zero<S>(compose(h, f).matrix) ? "" : "h does not vanish on U");
    const ModMap<S> psi = compose(p.from_ux, tensor_maps(f_inv, identity_map(x.module), p.vx, p.ux));
    rep.record("ψ closed", is_closed(psi) ? "" : "D(ψ) != 0");
    rep.record("f□g closed", is_closed(p.map) ? "" : "D(f□g) != 0");
    const ModMap<S> hx = tensor_maps(h, identity_map(x.module), p.vx, p.vx);
    rep.record("id - (f□g)ψ = D(h⊗1)", equal<S>((identity_map(p.vx.result.module) - compose(p.map, psi)).matrix, hom_differential(hx).matrix) ? "" : "first homotopy fails");
    // (h⊗1, 0) on Z, defined on representatives
    const ModMap<S> hw = tensor_maps(h, identity_map(w.module), p.vw, p.vw);
    const int kvw = p.vw.result.dim();
    Triplets<S> t;
    for (int q = 0; q < p.z.module->dim(); ++q) {
        const int r = p.z.representatives[static_cast<std::size_t>(q)];
        if (r < kvw) t.add_column(q, cdg::apply(p.from_vw.matrix, hw(r)));
    }
    const ModMap<S> hz{p.z.module, p.z.module, -1, t.build(p.z.module->dim(), p.z.module->dim())};
    rep.record("(h⊗1, 0) well defined on Z", equal<S>(compose(hz, p.from_vw).matrix, compose(p.from_vw, hw).matrix) && is_zero<S>(compose(hz, p.from_ux).matrix)
                                                   ? ""
                                                   : "homotopy does not descend");
    rep.record("id - ψ(f□g) = D(h⊗1, 0)", equal<S>((identity_map(p.z.module) - compose(psi, p.map)).matrix, hom_differential(hz).matrix) ? "" : "second homotopy fails");
    return rep;
}

}  // namespace cdg
