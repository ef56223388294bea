#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cdg/bar.hpp"
#include "cdg/homcomplex.hpp"

namespace cdg {

/// Per-member data of a weak-equivalence test: for each degree p the
/// dimensions of H^p of the two Hom complexes and the rank of the induced map.
struct MemberDegree {
    int degree = 0;
    int before = 0;
    int after = 0;
    int rank = 0;
    bool iso() const { return rank == before && rank == after; }
};

struct MemberVerdict {
    std::string member;
    std::vector<MemberDegree> degrees;
    Window window;
    bool iso = true;
    std::optional<int> failing_degree;
};

/// Outcome of a projective or injective test against a finite family.
/// A positive verdict is relative to the family and the degree window.
struct WEReport {
    std::string model;
    std::string map;
    int lo = 0, hi = 0;
    std::vector<MemberVerdict> members;
    bool weak_equivalence = true;
    std::optional<std::string> witness;

    std::string str() const {
        std::ostringstream os;
        os << "we-" << model << " " << map << ", family of " << members.size() << ", degrees [" << lo << "," << hi << "]\n";
        for (const auto& m : members) {
            os << "  " << m.member << " window " << m.window.str() << ":";
            for (const auto& d : m.degrees) os << " H" << d.degree << "=" << d.before << "/" << d.after << "/r" << d.rank;
            os << (m.iso ? "  iso" : "  NOT iso at degree " + std::to_string(*m.failing_degree)) << "\n";
        }
        if (weak_equivalence)
            os << "verdict: weak equivalence (relative to the family)\n";
        else
            os << "verdict: NOT a weak equivalence, witness " << *witness << "\n";
        return os.str();
    }
};

namespace detail {

template <class S>
MemberVerdict compare_hom(const std::string& name, const HomComplex<S>& from, const HomComplex<S>& to, const SparseMat<S>& induced, int lo, int hi) {
    MemberVerdict v;
    v.member = name;
    v.window = from.complex().trusted.meet(to.complex().trusted);
    for (int p = lo; p <= hi; ++p) {
        if (!v.window.contains(p)) continue;
        auto src = cohomology_data(from.complex(), p);
        auto tgt = cohomology_data(to.complex(), p);
        MemberDegree d{p, src.dim(), tgt.dim(), induced_rank(induced, src, tgt, to.complex().space.dim())};
        v.degrees.push_back(d);
        if (!d.iso() && v.iso) {
            v.iso = false;
            v.failing_degree = p;
        }
    }
    if (v.degrees.empty() && lo <= hi) throw OutOfWindow("no degree of [" + std::to_string(lo) + "," + std::to_string(hi) + "] is trusted for " + name);
    return v;
}

inline void conclude(WEReport& r) {
    for (const auto& m : r.members)
        if (!m.iso) {
            r.weak_equivalence = false;
            r.witness = m.member + " (degree " + std::to_string(*m.failing_degree) + ")";
            return;
        }
}

}  // namespace detail

/// f is tested against every T by H(Hom(T, f)): Hom(T, M) -> Hom(T, N).
template <class S>
WEReport we_projective(const ModMap<S>& f, const std::vector<ModulePtr<S>>& family, int lo, int hi) {
    if (f.degree != 0 || !is_closed(f)) throw NotClosed("weak-equivalence test needs a closed degree-0 map");
    WEReport r;
    r.model = "projective";
    r.map = f.source->name + " -> " + f.target->name;
    r.lo = lo;
    r.hi = hi;
    for (const auto& t : family) {
        HomComplex<S> from(t, f.source, lo, hi), to(t, f.target, lo, hi);
        r.members.push_back(detail::compare_hom(t->name, from, to, postcompose(f, from, to), lo, hi));
    }
    detail::conclude(r);
    return r;
}

/// f is tested against every cogenerator V by H(Hom(f, V)): Hom(N, V) -> Hom(M, V).
template <class S>
WEReport we_injective(const ModMap<S>& f, const std::vector<ModulePtr<S>>& cogenerators, int lo, int hi) {
    if (f.degree != 0 || !is_closed(f)) throw NotClosed("weak-equivalence test needs a closed degree-0 map");
    WEReport r;
    r.model = "injective";
    r.map = f.source->name + " -> " + f.target->name;
    r.lo = lo;
    r.hi = hi;
    for (const auto& v : cogenerators) {
        HomComplex<S> from(f.target, v, lo, hi), to(f.source, v, lo, hi);
        r.members.push_back(detail::compare_hom(v->name, from, to, precompose(f, from, to), lo, hi));
    }
    detail::conclude(r);
    return r;
}

/// Degree range in which graded maps between finite modules can be nonzero.
template <class S>
std::pair<int, int> hom_degree_range(const std::vector<ModulePtr<S>>& sources, const std::vector<ModulePtr<S>>& targets) {
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& m : sources)
        for (const auto& n : targets) {
            int l = n->space.min_degree() - m->space.max_degree();
            int h = n->space.max_degree() - m->space.min_degree();
            lo = first ? l : std::min(lo, l);
            hi = first ? h : std::max(hi, h);
            first = false;
        }
    return {lo, hi};
}

/// Both tests together.  A disagreement is not a contradiction: each
/// verdict is only as strong as its family, so the report names the
/// family that failed to detect the defect.
struct Agreement {
    WEReport projective;
    WEReport injective;
    bool agree() const { return projective.weak_equivalence == injective.weak_equivalence; }
    std::string str() const {
        std::string s = projective.str() + injective.str();
        if (agree())
            s += "models agree\n";
        else if (projective.weak_equivalence)
            s += "disagreement: projective family insufficient, injective witness " + *injective.witness + "\n";
        else
            s += "disagreement: injective family insufficient, projective witness " + *projective.witness + "\n";
        return s;
    }
};

template <class S>
Agreement we_agreement(const ModMap<S>& f, const std::vector<ModulePtr<S>>& family, const std::vector<ModulePtr<S>>& cogenerators, int lo, int hi) {
    return {we_projective(f, family, lo, hi), we_injective(f, cogenerators, lo, hi)};
}

/// A contramodule over a subcoalgebra D ⊂ C, viewed over C: α_C(G) = α_D(G|_D).
/// The basis of D must be the first dim D basis vectors of C.
template <class S>
Contramodule<S> corestrict_contramodule(const Contramodule<S>& p, const CoalgebraPtr<S>& c) {
    const CDGCoalgebra<S>& d = *p.coalgebra;
    if (d.dim() > c->dim()) throw std::invalid_argument("corestriction: not a subcoalgebra");
    for (int i = 0; i < d.dim(); ++i)
        if (d.label(i) != c->label(i) || d.deg(i) != c->deg(i)) throw std::invalid_argument("corestriction: basis of " + d.name + " is not a prefix of " + c->name);
    Contramodule<S> q = p;
    q.coalgebra = c;
    q.name = p.name + "|" + c->name;
    q.space.truncation = {};
    const int k = p.dim();
    Triplets<S> t;
    for (int col = 0; col < d.dim() * k; ++col) t.add_column(col, column(p.contraaction, col));
    q.contraaction = t.build(k, c->dim() * k);
    return q;
}

/// Cogenerators Hom^τ(A, W) for W = Hom(bar(A, n), k[g]) corestricted to
/// the coalgebra of b, for n < b.N and g in [g_lo, g_hi].  A must be flat.
template <class S>
std::vector<ModulePtr<S>> bar_cogenerators(const TruncatedBar<S>& b, int max_n, int g_lo, int g_hi) {
    if (!b.algebra->h.empty()) throw std::invalid_argument("bar cogenerators need a flat algebra");
    std::vector<ModulePtr<S>> out;
    for (int n = 0; n <= max_n && n <= b.N; ++n) {
        TruncatedBar<S> small = bar(b.algebra, n);
        for (int g = g_lo; g <= g_hi; ++g) {
            GradedSpace v;
            v.add(g, "k");
            auto w = share(corestrict_contramodule(free_contramodule<S>(small.coalgebra, v, SparseMat<S>(1, 1), "W" + std::to_string(n) + "[" + std::to_string(-g) + "]"), b.coalgebra));
            CDGModule<S> y = hom_tau_mod(b, w);
            y.name = "Homτ(A," + w->name + ")";
            out.push_back(share(std::move(y)));
        }
    }
    return out;
}

/// Homotopy equivalence certificate for a closed degree-0 map f: the cone
/// is contractible, witnessed by psi with D(psi) = id on the cone.
template <class S>
std::optional<ModMap<S>> certify_homotopy_equivalence(const ModMap<S>& f) {
    Cone<S> c = cone(f);
    auto h = null_homotopy(identity_map(c.module));
    return h.psi;
}

/// Checks on the cylinder of X: p∘j = fold, j injective, and p a homotopy
/// equivalence, certified by a homotopy id - s∘p ≃ 0 for the section s.
template <class S>
AxiomReport check_cylinder(const ModulePtr<S>& x) {
    AxiomReport rep;
    rep.subject = "cylinder of " + x->name;
    Cylinder<S> cy = cylinder(x);
    rep.record("cylinder is a CDG-module", check_module(*cy.module).first_witness());
    rep.record("p∘j = fold", equal<S>(compose(cy.p, cy.j).matrix, cy.fold.matrix) ? "" : "matrices differ");
    rep.record("j injective", rank<S>(cy.j.matrix) == cy.sum->dim() ? "" : "rank deficit");
    rep.record("j, p closed", is_closed(cy.j) && is_closed(cy.p) ? "" : "not closed");
    rep.record("p∘s = id", equal<S>(compose(cy.p, cy.section).matrix, identity<S>(x->dim())) ? "" : "matrices differ");
    auto h = null_homotopy(identity_map(cy.module) - compose(cy.section, cy.p));
    rep.record("id - s∘p null-homotopic", h.psi ? "" : "solver found no homotopy");
    return rep;
}

/// Splitting certificate for an extension 0 -> Y -f-> X -g-> M -> 0 with
/// X = Y ⊕ M and d_X(y, m) = (dy + δ(m), dm): when Hom(M, Y) is acyclic,
/// φ: X -> Y closed and ψ: Y -> Y with id = φf - D(ψ) exist; ψ' = ψ∘pr_Y
/// restricts to ψ, and (φ - D(ψ'))∘f = id exactly.
template <class S>
struct Splitting {
    ModulePtr<S> extension;
    ModMap<S> f, g;
    std::optional<ModMap<S>> phi, psi, psi_prime;
    AxiomReport report;
};

template <class S>
CDGModule<S> extension_module(const ModulePtr<S>& y, const ModulePtr<S>& m, const ModMap<S>& delta) {
    if (delta.degree != 1 || !is_closed(delta)) throw NotClosed("extension class must be a closed degree-1 map");
    CDGModule<S> x = direct_sum(*y, *m, "Ext(" + m->name + "," + y->name + ")");
    const int ky = y->dim();
    Triplets<S> t;
    for (int j = 0; j < x.dim(); ++j) {
        Vec<S> c = column(x.d, j);
        if (j >= ky) axpy(c, delta(j - ky), S(1));
        t.add_column(j, c);
    }
    x.d = t.build(x.dim(), x.dim());
    return x;
}

template <class S>
Splitting<S> splitting_certificate(const ModulePtr<S>& y, const ModulePtr<S>& m, const ModMap<S>& delta, int lo, int hi) {
    Splitting<S> out;
    out.report.subject = "splitting of " + m->name + " by " + y->name;
    auto xp = share(extension_module(y, m, delta));
    out.extension = xp;
    const int ky = y->dim(), km = m->dim();
    Triplets<S> tf, tg, tp;
    for (int j = 0; j < ky; ++j) tf.add(j, j, S(1)), tp.add(j, j, S(1));
    for (int j = 0; j < km; ++j) tg.add(j, ky + j, S(1));
    out.f = {y, xp, 0, tf.build(ky + km, ky)};
    out.g = {xp, m, 0, tg.build(km, ky + km)};
    const ModMap<S> pr{xp, y, 0, tp.build(ky, ky + km)};
    out.report.record("extension is a CDG-module", check_module(*xp).first_witness());
    out.report.record("f, g closed", is_closed(out.f) && is_closed(out.g) ? "" : "not closed");

    HomComplex<S> my(m, y, lo, hi);
    std::string acyc;
    for (int p = lo; p <= hi && acyc.empty(); ++p)
        if (my.complex().trusted.contains(p) && cohomology_data(my.complex(), p).dim() != 0) acyc = "H^" + std::to_string(p) + " != 0";
    out.report.record("H(Hom(M,Y)) = 0 in window", acyc, "degrees [" + std::to_string(lo) + "," + std::to_string(hi) + "]");

    // unknowns: φ in Hom^0(X,Y), ψ in Hom^{-1}(Y,Y); equations φf - D(ψ) = id, D(φ) = 0
    HomComplex<S> xy(xp, y, -1, 0), yy(y, y, -1, 0);
    const SparseMat<S> pre = precompose(out.f, xy, yy);
    const auto& cx = xy.complex();
    const auto& cy = yy.complex();
    const std::vector<int> phi_cols = cx.space.component(0);
    const std::vector<int> psi_cols = cy.space.component(-1);
    const int nx = cx.space.dim(), ny = cy.space.dim();
    Triplets<S> ta;
    int col = 0;
    for (int g : phi_cols) {
        Vec<S> e = column(pre, g);
        for (const auto& [r, x] : column(cx.d, g)) axpy(e, ny + r, x);
        ta.add_column(col++, e);
    }
    for (int g : psi_cols) ta.add_column(col++, scaled(column(cy.d, g), S(-1)));
    const SparseMat<S> a = ta.build(ny + nx, col);
    const Vec<S> rhs = yy.coordinates(identity_map(y));
    auto sol = solve(a, rhs);
    if (!sol) {
        out.report.fail("φ, ψ with id = φf - D(ψ)", "linear system has no solution");
        return out;
    }
    Vec<S> phic, psic;
    for (const auto& [k, x] : *sol) {
        if (k < static_cast<int>(phi_cols.size())) phic.emplace(phi_cols[static_cast<std::size_t>(k)], x);
        else psic.emplace(psi_cols[static_cast<std::size_t>(k) - phi_cols.size()], x);
    }
    ModMap<S> phi = phic.empty() ? zero_map(xp, y, 0) : xy.map_of(phic);
    ModMap<S> psi = psic.empty() ? zero_map(y, y, -1) : yy.map_of(psic);
    phi.degree = 0;
    psi.degree = -1;
    ModMap<S> psi_prime = compose(psi, pr);
    out.report.record("φ closed", is_closed(phi) ? "" : "D(φ) != 0");
    out.report.record("id = φf - D(ψ)", equal<S>((compose(phi, out.f) - hom_differential(psi)).matrix, identity<S>(ky)) ? "" : "identity fails");
    out.report.record("ψ'∘f = ψ", equal<S>(compose(psi_prime, out.f).matrix, psi.matrix) ? "" : "restriction differs");
    out.report.record("(φ - D(ψ'))∘f = id", equal<S>(compose(phi - hom_differential(psi_prime), out.f).matrix, identity<S>(ky)) ? "" : "retraction identity fails");
    out.phi = phi;
    out.psi = psi;
    out.psi_prime = psi_prime;
    return out;
}

}  // namespace cdg
