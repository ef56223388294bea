#pragma once

#include <map>
#include <string>
#include <vector>

#include "cdg/coalgebra.hpp"

namespace cdg {

/// Word-length truncation of the extended bar construction on A.  Letters
/// are the non-unit basis vectors of A (so ν is the coordinate projection
/// onto the unit); a letter a has degree |a| - 1.  When h = 0 the
/// truncation is an honest CDG-coalgebra; otherwise the curvature
/// insertion raises word length and the coalgebra is input-truncated.
template <class S>
struct TruncatedBar {
    AlgebraPtr<S> algebra;
    int N = 0;
    std::vector<std::vector<int>> words;
    std::map<std::vector<int>, int> index;
    CoalgebraPtr<S> coalgebra;

    int find(const std::vector<int>& w) const {
        auto it = index.find(w);
        return it == index.end() ? -1 : it->second;
    }
    int letter(int c) const {
        const auto& w = words[static_cast<std::size_t>(c)];
        return w.size() == 1 ? w[0] : -1;
    }
    int word_degree(const std::vector<int>& w) const {
        int d = 0;
        for (int a : w) d += algebra->deg(a) - 1;
        return d;
    }
    int dim() const { return static_cast<int>(words.size()); }
};

namespace detail {

inline std::string word_label(const std::vector<int>& w, const std::function<std::string(int)>& name) {
    if (w.empty()) return "[]";
    std::string s = "[";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "|" : "") + name(w[i]);
    return s + "]";
}

}  // namespace detail

/// bar(A, N): words of length <= N in the non-unit basis.
///   d[a1|...|an] = Σ (-1)^{ε_i} ( -[..|h|..] inserted before a_i  (b0)
///                                - [..|d̄a_i|..]                  (b1)
///                                + (-1)^{|a_i|} [..|π̄(a_i a_{i+1})|..] ) (b2)
/// with ε_i the total letter degree before position i; the curvature
/// functional is θ[a] = ν(da), θ[a|b] = -(-1)^{|a|} ν(ab).
template <class S>
TruncatedBar<S> bar(const AlgebraPtr<S>& ap, int N) {
    const CDGAlgebra<S>& a = *ap;
    if (!a.space.window.total) throw OutOfWindow("bar construction needs a finite algebra");
    TruncatedBar<S> b;
    b.algebra = ap;
    b.N = N;
    b.words.push_back({});
    std::size_t start = 0;
    for (int len = 1; len <= N; ++len) {
        std::size_t end = b.words.size();
        for (std::size_t i = start; i < end; ++i)
            for (int l = 1; l < a.dim(); ++l) {
                auto w = b.words[i];
                w.push_back(l);
                b.words.push_back(w);
            }
        start = end;
    }
    CDGCoalgebra<S> c;
    c.name = "B" + std::to_string(N) + "(" + a.name + ")";
    for (std::size_t i = 0; i < b.words.size(); ++i) {
        const auto& w = b.words[i];
        b.index[w] = static_cast<int>(i);
        c.space.add(b.word_degree(w), detail::word_label(w, [&](int l) { return a.label(l); }), static_cast<int>(w.size()));
    }
    const int n = b.dim();
    Triplets<S> tm, td;
    for (int i = 0; i < n; ++i) {
        const auto& w = b.words[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k <= w.size(); ++k) {
            std::vector<int> w1(w.begin(), w.begin() + static_cast<long>(k)), w2(w.begin() + static_cast<long>(k), w.end());
            tm.add(b.index.at(w1) * n + b.index.at(w2), i, S(1));
        }
        Vec<S> dw;
        auto put = [&](const std::vector<int>& x, const S& v) {
            if (static_cast<int>(x.size()) > N) return;
            axpy(dw, b.index.at(x), v);
        };
        int eps = 0;
        for (std::size_t k = 0; k <= w.size(); ++k) {
            const S sg = sign<S>(eps);
            for (const auto& [j, x] : a.h) {
                if (j == 0) continue;
                std::vector<int> nw = w;
                nw.insert(nw.begin() + static_cast<long>(k), j);
                put(nw, -(sg * x));
            }
            if (k == w.size()) break;
            const int l = w[k];
            for (const auto& [j, x] : a.diff(l)) {
                if (j == 0) continue;
                std::vector<int> nw = w;
                nw[k] = j;
                put(nw, -(sg * x));
            }
            if (k + 1 < w.size()) {
                for (const auto& [j, x] : a.mul(l, w[k + 1])) {
                    if (j == 0) continue;
                    std::vector<int> nw(w.begin(), w.begin() + static_cast<long>(k));
                    nw.push_back(j);
                    nw.insert(nw.end(), w.begin() + static_cast<long>(k) + 2, w.end());
                    put(nw, sg * sign<S>(a.deg(l)) * x);
                }
            }
            eps += a.deg(l) - 1;
        }
        td.add_column(i, dw);
        if (w.size() == 1) {
            Vec<S> da = a.diff(w[0]);
            auto it = da.find(0);
            if (it != da.end()) axpy(c.h, i, it->second);
        } else if (w.size() == 2) {
            Vec<S> ab = a.mul(w[0], w[1]);
            auto it = ab.find(0);
            if (it != ab.end()) axpy(c.h, i, -(sign<S>(a.deg(w[0])) * it->second));
        }
    }
    c.comult = tm.build(n * n, n);
    c.d = td.build(n, n);
    c.counit = unit_vec<S>(0);
    if (a.curved()) c.space.truncation = {Truncation::Kind::input, N};
    b.coalgebra = share(std::move(c));
    return b;
}

/// τ: B -> A of degree 1, the length-one projection [a] ↦ a; as a matrix
/// (dim A) x (dim B).
template <class S>
SparseMat<S> make_tau(const TruncatedBar<S>& b) {
    Triplets<S> t;
    for (int c = 0; c < b.dim(); ++c)
        if (b.letter(c) >= 0) t.add(b.letter(c), c, S(1));
    return t.build(b.algebra->dim(), b.dim());
}

/// B ⊗^τ M: carrier B ⊗ M (index w*dim M + m), coaction Δ ⊗ 1 and
/// d(w⊗m) = dw⊗m + (-1)^{|w|} w⊗dm + (-1)^{|w'|} w'⊗a·m for w = w'[a].
template <class S>
Comodule<S> twisted_tensor_comod(const TruncatedBar<S>& b, const ModulePtr<S>& mp) {
    const CDGModule<S>& m = *mp;
    const CDGCoalgebra<S>& c = *b.coalgebra;
    GradedSpace v = m.space;
    Comodule<S> out = cofree_comodule<S>(b.coalgebra, v, m.d, c.name + "⊗τ" + m.name);
    const int nm = m.dim();
    Triplets<S> td;
    for (int i = 0; i < b.dim(); ++i) {
        const auto& w = b.words[static_cast<std::size_t>(i)];
        if (w.empty()) continue;
        std::vector<int> w1(w.begin(), w.end() - 1);
        const int i1 = b.index.at(w1);
        const S sg = sign<S>(b.word_degree(w1));
        for (int j = 0; j < nm; ++j)
            for (const auto& [k, x] : m.act(w.back(), j)) td.add(i1 * nm + k, i * nm + j, sg * x);
    }
    out.d = pruned<S>(SparseMat<S>(out.d + td.build(out.dim(), out.dim())));
    return out;
}

/// A ⊗^τ N for a comodule N over the bar: carrier A ⊗ N (index i*dim N + n),
/// d = d_A ⊗ 1 + (-1)^{|a|} 1 ⊗ d_N + T with
/// T(a ⊗ n) = -(-1)^{|a|} Σ a·τ(n_{-1}) ⊗ n_0.
template <class S>
CDGModule<S> twisted_tensor_mod(const TruncatedBar<S>& b, const ComodulePtr<S>& np) {
    const Comodule<S>& nn = *np;
    const CDGAlgebra<S>& a = *b.algebra;
    const int na = a.dim(), k = nn.dim();
    GradedSpace sp;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < k; ++j) sp.add(a.deg(i) + nn.deg(j), a.label(i) + "⊗" + nn.label(j), nn.space.weight(j));
    if (nn.space.truncation.kind == Truncation::Kind::input) sp.truncation = {Truncation::Kind::input, nn.space.truncation.limit - 1};
    // first-letter part of the coaction: n ↦ Σ (letter, n0, coefficient)
    std::vector<std::vector<std::tuple<int, int, S>>> split(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
        for (const auto& [key, x] : nn.coact(j)) {
            int l = b.letter(key / k);
            if (l >= 0) split[static_cast<std::size_t>(j)].emplace_back(l, key % k, x);
        }
    return assemble_module<S>(
        a.name + "⊗τ" + nn.name, b.algebra, sp,
        [&](int x, int col) {
            Vec<S> r;
            for (const auto& [p, y] : a.mul(x, col / k)) r.emplace(p * k + col % k, y);
            return r;
        },
        [&](int col) {
            const int i = col / k, j = col % k;
            Vec<S> r;
            for (const auto& [p, y] : a.diff(i)) axpy(r, p * k + j, y);
            for (const auto& [q, y] : nn.diff(j)) axpy(r, i * k + q, sign<S>(a.deg(i)) * y);
            for (const auto& [l, n0, x] : split[static_cast<std::size_t>(j)])
                for (const auto& [p, y] : a.mul(i, l)) axpy(r, p * k + n0, -(sign<S>(a.deg(i)) * x * y));
            return r;
        });
}

/// Hom^τ(B, M): the free contramodule Hom_k(B, M) with
/// d(f)(c) = d_M f(c) - (-1)^{|f|} f(dc) + (-1)^{|f||c1|} τ(c1) f(c2).
template <class S>
Contramodule<S> hom_tau_contra(const TruncatedBar<S>& b, const ModulePtr<S>& mp) {
    const CDGModule<S>& m = *mp;
    const CDGCoalgebra<S>& c = *b.coalgebra;
    Contramodule<S> p = free_contramodule<S>(b.coalgebra, m.space, m.d, "Homτ(" + c.name + "," + m.name + ")");
    const int nm = m.dim();
    Triplets<S> td;
    for (int i = 0; i < b.dim(); ++i) {
        const auto& w = b.words[static_cast<std::size_t>(i)];
        if (static_cast<int>(w.size()) + 1 > b.N) continue;
        for (int j = 0; j < nm; ++j) {
            const int fd = m.deg(j) - c.deg(i);
            for (int l = 1; l < b.algebra->dim(); ++l) {
                std::vector<int> bw{l};
                bw.insert(bw.end(), w.begin(), w.end());
                const int t = b.index.at(bw);
                const S sg = sign<S>(static_cast<long>(fd) * (b.algebra->deg(l) - 1));
                for (const auto& [q, x] : m.act(l, j)) td.add(t * nm + q, i * nm + j, sg * x);
            }
        }
    }
    p.d = pruned<S>(SparseMat<S>(p.d + td.build(p.dim(), p.dim())));
    return p;
}

/// Hom^τ(A, P) for a contramodule P over the bar: carrier Hom_k(A, P) with
/// E_{i,q} at index i*dim P + q, A-action (b·F)(a) = (-1)^{|b|(|F|+|a|)} F(ab)
/// and d(F)(a) = d_P F(a) - (-1)^{|F|} F(da) + α(c ↦ (-1)^{|F|+1+|c||a|} F(τ(c)a)).
template <class S>
CDGModule<S> hom_tau_mod(const TruncatedBar<S>& b, const ContramodulePtr<S>& pp) {
    const Contramodule<S>& p = *pp;
    const CDGAlgebra<S>& a = *b.algebra;
    const int na = a.dim(), k = p.dim();
    GradedSpace sp;
    for (int i = 0; i < na; ++i)
        for (int q = 0; q < k; ++q) sp.add(p.deg(q) - a.deg(i), "E[" + a.label(i) + "," + p.label(q) + "]", p.space.weight(q));
    sp.truncation = p.space.truncation;
    const SparseMat<S> dat = SparseMat<S>(a.d.transpose());
    // rmul[i0] = list of (i, b, coefficient) with e_i e_b ∋ coefficient e_i0
    std::vector<std::vector<std::tuple<int, int, S>>> rmul(static_cast<std::size_t>(na));
    for (int i = 0; i < na; ++i)
        for (int l = 0; l < na; ++l)
            for (const auto& [i0, x] : a.mul(i, l)) rmul[static_cast<std::size_t>(i0)].emplace_back(i, l, x);
    // lmul[i0] = list of (b, i, coefficient) with e_b e_i ∋ coefficient e_i0
    std::vector<std::vector<std::tuple<int, int, S>>> lmul(static_cast<std::size_t>(na));
    for (int l = 1; l < na; ++l)
        for (int i = 0; i < na; ++i)
            for (const auto& [i0, x] : a.mul(l, i)) lmul[static_cast<std::size_t>(i0)].emplace_back(l, i, x);
    std::vector<int> letter_word(static_cast<std::size_t>(na), -1);
    for (int c = 0; c < b.dim(); ++c)
        if (b.letter(c) >= 0) letter_word[static_cast<std::size_t>(b.letter(c))] = c;
    return assemble_module<S>(
        "Homτ(" + a.name + "," + p.name + ")", b.algebra, sp,
        [&](int l, int col) {
            const int i0 = col / k, q = col % k;
            const int fd = p.deg(q) - a.deg(i0);
            Vec<S> r;
            for (const auto& [i, ll, x] : rmul[static_cast<std::size_t>(i0)])
                if (ll == l) axpy(r, i * k + q, sign<S>(static_cast<long>(a.deg(l)) * (fd + a.deg(i))) * x);
            return r;
        },
        [&](int col) {
            const int i0 = col / k, q = col % k;
            const int fd = p.deg(q) - a.deg(i0);
            Vec<S> r;
            for (const auto& [q2, x] : p.diff(q)) axpy(r, i0 * k + q2, x);
            for (typename SparseMat<S>::InnerIterator it(dat, i0); it; ++it) axpy(r, static_cast<int>(it.row()) * k + q, -(sign<S>(fd) * it.value()));
            for (const auto& [l, i, x] : lmul[static_cast<std::size_t>(i0)]) {
                const int cw = letter_word[static_cast<std::size_t>(l)];
                if (cw < 0) continue;
                const S sg = sign<S>(fd + 1 + static_cast<long>(a.deg(l) - 1) * a.deg(i));
                for (const auto& [q2, y] : p.alpha(cw, q)) axpy(r, i * k + q2, sg * x * y);
            }
            return r;
        });
}

/// The two comparison isomorphisms between the twisted functors and Φ/Ψ:
///   iso1: Φ(Homτ(C,M)) -> C⊗τM,  [c ⊗ f] ↦ Σ (-1)^{|c2||f|} c1 ⊗ f(c2)
///   iso2: Ψ(C⊗τM) -> Homτ(C,M),  φ ↦ (ε ⊗ 1)∘φ
template <class S>
struct Auxeq {
    ModulePtr<S> module;
    ContramodulePtr<S> hom;   // Homτ(C,M)
    ComodulePtr<S> tensor;    // C⊗τM
    PhiResult<S> phi_hom;
    PsiResult<S> psi_tensor;
    SparseMat<S> iso1;
    SparseMat<S> iso2;
    AxiomReport report;
};

namespace detail {

/// iso1 on the ambient C ⊗ Hom_k(C,M) (index c*dimP + (c'*dimM + m)).
template <class S>
SparseMat<S> contratensor_identification(const CDGCoalgebra<S>& c, const Contramodule<S>& hom, const Comodule<S>& tensor, int nm) {
    const int nc = c.dim(), np = hom.dim();
    Triplets<S> t;
    for (int cc = 0; cc < nc; ++cc)
        for (const auto& [key, x] : c.delta(cc)) {
            const int c1 = key / nc, c2 = key % nc;
            for (int m = 0; m < nm; ++m) {
                const int e = c2 * nm + m;
                t.add(c1 * nm + m, cc * np + e, sign<S>(static_cast<long>(c.deg(c2)) * hom.deg(e)) * x);
            }
        }
    return t.build(tensor.dim(), nc * np);
}

/// (ε ⊗ 1)∘φ for a map φ: C -> C ⊗ M, as a vector in Hom_k(C, M).
template <class S>
Vec<S> counit_part(const SparseMat<S>& phi, int nm) {
    Vec<S> r;
    for (int col = 0; col < phi.outerSize(); ++col)
        for (typename SparseMat<S>::InnerIterator it(phi, col); it; ++it)
            if (it.row() < nm) axpy(r, col * nm + static_cast<int>(it.row()), it.value());
    return r;
}

template <class S>
std::string first_difference(const Vec<S>& x, const Vec<S>& y, const std::function<bool(int)>& keep, const GradedSpace& sp) {
    Vec<S> diff = x - y;
    for (const auto& [i, v] : diff)
        if (keep(i)) return sp.label(i);
    return "";
}

}  // namespace detail

template <class S>
Auxeq<S> auxeq_iso(const TruncatedBar<S>& b, const ModulePtr<S>& mp) {
    const CDGCoalgebra<S>& c = *b.coalgebra;
    const int nc = c.dim(), nm = mp->dim();
    Auxeq<S> out;
    out.module = mp;
    out.hom = share(hom_tau_contra(b, mp));
    out.tensor = share(twisted_tensor_comod(b, mp));
    out.phi_hom = phi(out.hom);
    out.psi_tensor = psi(out.tensor);
    const Contramodule<S>& hom = *out.hom;
    const Comodule<S>& ten = *out.tensor;
    const Comodule<S>& ph = out.phi_hom.comod;
    const Contramodule<S>& ps = out.psi_tensor.contra;
    AxiomReport& rep = out.report;
    rep.subject = "auxeq " + c.name + ", " + mp->name;
    const Truncation tr = c.truncation();
    const std::string scope = tr.str();

    // iso1
    SparseMat<S> amb = detail::contratensor_identification(c, hom, ten, nm);
    {
        Triplets<S> t;
        for (int k = 0; k < ph.dim(); ++k) t.add_column(k, column(amb, out.phi_hom.representative[static_cast<std::size_t>(k)]));
        out.iso1 = t.build(ten.dim(), ph.dim());
    }
    rep.record("iso1 well defined on the contratensor product", equal<S>(amb, product(out.iso1, out.phi_hom.projection)) ? "" : "identification does not kill the relations");
    rep.record("iso1 invertible", out.iso1.rows() == out.iso1.cols() && rank<S>(out.iso1) == out.iso1.cols() ? "" : "rank " + std::to_string(rank<S>(out.iso1)) + " of " + std::to_string(out.iso1.rows()) + "x" + std::to_string(out.iso1.cols()));
    {
        std::string w = comod_map_defect(out.iso1, ph, ten);
        rep.record("iso1 preserves the coaction", w == "differential" ? "" : w);
        std::string wd;
        for (int k = 0; k < ph.dim() && wd.empty(); ++k) {
            if (!tr.input_ok(ph.space.weight(k) + 1)) continue;
            Vec<S> lhs = cdg::apply(out.iso1, ph.diff(k));
            Vec<S> rhs = ten.diff(column(out.iso1, k));
            wd = detail::first_difference<S>(lhs, rhs, [&](int i) { return tr.input_ok(ten.space.weight(i)); }, ten.space);
            if (!wd.empty()) wd = ph.label(k) + " -> " + wd;
        }
        rep.record("iso1 commutes with d", wd, scope);
    }

    // iso2
    {
        Triplets<S> t;
        for (int k = 0; k < ps.dim(); ++k) t.add_column(k, detail::counit_part(out.psi_tensor.maps[static_cast<std::size_t>(k)], nm));
        out.iso2 = t.build(hom.dim(), ps.dim());
    }
    rep.record("iso2 invertible", out.iso2.rows() == out.iso2.cols() && rank<S>(out.iso2) == out.iso2.cols() ? "" : "rank " + std::to_string(rank<S>(out.iso2)) + " of " + std::to_string(out.iso2.rows()) + "x" + std::to_string(out.iso2.cols()));
    {
        // contraaction and differential compared on maps C -> C⊗M, so the
        // check does not go through Ψ-coordinates
        std::string wa, wd;
        for (int k = 0; k < ps.dim(); ++k) {
            const SparseMat<S>& phi_k = out.psi_tensor.maps[static_cast<std::size_t>(k)];
            const int deg = out.psi_tensor.degrees[static_cast<std::size_t>(k)];
            const Vec<S> fk = column(out.iso2, k);
            for (int c2 = 0; c2 < nc && wa.empty(); ++c2) {
                Triplets<S> tm;
                for (int col = 0; col < nc; ++col)
                    for (const auto& [key, x] : c.delta(col)) {
                        if (key % nc != c2) continue;
                        const int c1 = key / nc;
                        const S sg = sign<S>(static_cast<long>(c.deg(c1)) * c.deg(c2)) * x;
                        for (typename SparseMat<S>::InnerIterator it(phi_k, c1); it; ++it) tm.add(static_cast<int>(it.row()), col, sg * it.value());
                    }
                Vec<S> lhs = detail::counit_part(tm.build(ten.dim(), nc), nm);
                Vec<S> rhs;
                for (const auto& [e, y] : fk) axpy(rhs, hom.alpha(c2, e), y);
                if (lhs != rhs) wa = "E[" + c.label(c2) + "," + ps.label(k) + "]";
            }
            if (wd.empty()) {
                SparseMat<S> dphi = SparseMat<S>(product(ten.d, phi_k) - product(phi_k, c.d) * sign<S>(deg));
                Vec<S> lhs = detail::counit_part(dphi, nm);
                Vec<S> rhs = hom.diff(fk);
                wd = detail::first_difference<S>(lhs, rhs, [&](int i) { return tr.output_ok(hom.space.weight(i), 1); }, hom.space);
                if (!wd.empty()) wd = ps.label(k) + " -> " + wd;
            }
        }
        rep.record("iso2 preserves the contraaction", wa);
        rep.record("iso2 commutes with d", wd, scope);
    }
    return out;
}

/// Naturality of both isomorphisms along a closed degree-0 map g: M -> M'.
template <class S>
AxiomReport auxeq_naturality(const ModMap<S>& g, const Auxeq<S>& src, const Auxeq<S>& tgt) {
    AxiomReport rep;
    rep.subject = "auxeq naturality " + src.module->name + " -> " + tgt.module->name;
    const int nc = src.hom->coalgebra->dim(), nm = src.module->dim(), nm2 = tgt.module->dim();
    // 1 ⊗ g on C⊗M and g∘- on Hom(C,M) share the same block form
    Triplets<S> t;
    for (int cc = 0; cc < nc; ++cc)
        for (int m = 0; m < nm; ++m)
            for (typename SparseMat<S>::InnerIterator it(g.matrix, m); it; ++it) t.add(cc * nm2 + static_cast<int>(it.row()), cc * nm + m, it.value());
    const SparseMat<S> blocks = t.build(nc * nm2, nc * nm);
    const SparseMat<S> tg = blocks, hg = blocks;
    std::string w = comod_map_defect(tg, *src.tensor, *tgt.tensor);
    rep.record("1⊗g is a comodule map", w == "differential" ? "" : w);
    w = contra_map_defect(hg, *src.hom, *tgt.hom);
    rep.record("g∘- is a contramodule map", w == "differential" ? "" : w);
    SparseMat<S> lhs1 = product(tgt.iso1, phi_map(hg, *src.hom, src.phi_hom, tgt.phi_hom));
    SparseMat<S> rhs1 = product(tg, src.iso1);
    rep.record("iso1 natural", equal<S>(lhs1, rhs1) ? "" : "square does not commute");
    SparseMat<S> lhs2 = product(tgt.iso2, psi_map(tg, src.psi_tensor, tgt.psi_tensor));
    SparseMat<S> rhs2 = product(hg, src.iso2);
    rep.record("iso2 natural", equal<S>(lhs2, rhs2) ? "" : "square does not commute");
    return rep;
}

}  // namespace cdg
