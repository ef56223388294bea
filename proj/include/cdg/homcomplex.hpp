#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdg/module.hpp"

namespace cdg {

/// Finite cochain complex on a flat graded basis.  trusted is the degree
/// range on which cohomology of the represented (possibly infinite) object
/// is computed exactly.
template <class S>
struct Complex {
    GradedSpace space;
    SparseMat<S> d;
    Window trusted;
};

template <class S>
struct CohomologyDegree {
    int degree = 0;
    int dim = 0;
    std::vector<Vec<S>> representatives;
};

namespace detail {

template <class S>
std::vector<Vec<S>> kernel_of_columns(const std::vector<Vec<S>>& cols) {
    std::map<int, Vec<S>> rows;
    for (int j = 0; j < static_cast<int>(cols.size()); ++j)
        for (const auto& [r, x] : cols[static_cast<std::size_t>(j)]) rows[r].emplace(j, x);
    Echelon<S> e(static_cast<int>(cols.size()));
    for (const auto& [r, row] : rows) e.insert(row);
    return columns_of(e.kernel_basis());
}

}  // namespace detail

/// Cocycles, coboundaries and representatives of H^p for p in [lo, hi].
template <class S>
struct CohomologyData {
    int degree = 0;
    std::vector<Vec<S>> cycles;      // global coordinates
    std::vector<Vec<S>> boundaries;  // spanning set of B^p
    std::vector<Vec<S>> representatives;
    int dim() const { return static_cast<int>(representatives.size()); }
};

template <class S>
CohomologyData<S> cohomology_data(const Complex<S>& c, int p) {
    CohomologyData<S> out;
    out.degree = p;
    const std::vector<int> cols = c.space.component(p);
    std::vector<Vec<S>> images;
    for (int j : cols) images.push_back(column(c.d, j));
    for (const auto& k : detail::kernel_of_columns(images)) {
        Vec<S> z;
        for (const auto& [local, x] : k) z.emplace(cols[static_cast<std::size_t>(local)], x);
        out.cycles.push_back(z);
    }
    for (int j : c.space.component(p - 1)) {
        Vec<S> b = column(c.d, j);
        if (!b.empty()) out.boundaries.push_back(b);
    }
    Subspace<S> span(c.space.dim(), out.boundaries);
    for (const auto& z : out.cycles)
        if (span.add(z)) out.representatives.push_back(z);
    return out;
}

template <class S>
std::vector<CohomologyDegree<S>> cohomology(const Complex<S>& c, int lo, int hi) {
    std::vector<CohomologyDegree<S>> out;
    for (int p = lo; p <= hi; ++p) {
        if (!c.trusted.contains(p)) throw OutOfWindow("cohomology in degree " + std::to_string(p) + " outside trusted window " + c.trusted.str());
        auto data = cohomology_data(c, p);
        out.push_back({p, data.dim(), data.representatives});
    }
    return out;
}

/// Rank of the map induced on H^p by a chain map F: C -> C'.
template <class S>
int induced_rank(const SparseMat<S>& f, const CohomologyData<S>& src, const CohomologyData<S>& tgt, int tgt_dim) {
    Subspace<S> b(tgt_dim, tgt.boundaries);
    int base = b.dim();
    for (const auto& z : src.representatives) b.add(apply(f, z));
    return b.dim() - base;
}

/// Complex of homogeneous linear maps X -> Y cut out by linear
/// constraints, with D(f) = d_Y f - (-1)^{|f|} f d_X.  The constraint
/// callback receives the degree, a slot lookup (target index, source index)
/// -> unknown or -1, and a sink for equations.  Blocks are built for p in
/// [lo-1, hi+1] so that cohomology is available on [lo, hi].
template <class S>
class MapComplex {
public:
    using SlotFn = std::function<int(int, int)>;
    using Emit = std::function<void(const Vec<S>&)>;
    using Constraints = std::function<void(int, const SlotFn&, const Emit&)>;

    MapComplex() = default;
    MapComplex(const GradedSpace& x, const GradedSpace& y, const SparseMat<S>& dx, const SparseMat<S>& dy, const Constraints& cons, int lo,
               int hi)
        : dx_dim_(x.dim()), dy_dim_(y.dim()), lo_(lo), hi_(hi) {
        build(x, y, dx, dy, cons);
    }

    const Complex<S>& complex() const { return c_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int dim(int p) const {
        auto b = blocks_.find(p);
        return b == blocks_.end() ? 0 : b->second.rank;
    }

    /// Matrix (dim Y x dim X) of the element with global coordinates v.
    std::pair<int, SparseMat<S>> matrix_of(const Vec<S>& v) const {
        if (v.empty()) return {0, SparseMat<S>(dy_dim_, dx_dim_)};
        int p = c_.space.degree(v.begin()->first);
        const Block& b = blocks_.at(p);
        Triplets<S> t;
        for (const auto& [g, x] : v) {
            if (c_.space.degree(g) != p) throw std::invalid_argument("inhomogeneous element");
            for (typename SparseMat<S>::InnerIterator it(b.basis, g - b.offset); it; ++it) {
                auto [tt, j] = b.slots[static_cast<std::size_t>(it.row())];
                t.add(tt, j, x * it.value());
            }
        }
        return {p, t.build(dy_dim_, dx_dim_)};
    }

    /// Global coordinates of a degree-p map; throws if it violates the constraints.
    Vec<S> coordinates(int p, const SparseMat<S>& f) const {
        auto it = blocks_.find(p);
        if (it == blocks_.end()) {
            if (is_zero<S>(f)) return {};
            throw OutOfWindow("degree " + std::to_string(p) + " not computed in this map complex");
        }
        const Block& b = it->second;
        Vec<S> slotv;
        for (int j = 0; j < f.outerSize(); ++j)
            for (typename SparseMat<S>::InnerIterator e(f, j); e; ++e) {
                if (e.value().is_zero()) continue;
                int s = b.slot(static_cast<int>(e.row()), j, dx_dim_);
                if (s < 0) throw std::invalid_argument("coordinates: map is not homogeneous of degree " + std::to_string(p));
                slotv.emplace(s, e.value());
            }
        Vec<S> out;
        for (std::size_t k = 0; k < b.free.size(); ++k) {
            auto x = slotv.find(b.free[k]);
            if (x != slotv.end()) out.emplace(b.offset + static_cast<int>(k), x->second);
        }
        if (!equal<S>(matrix_of(out).second, f)) throw std::invalid_argument("coordinates: map violates the defining constraints");
        return out;
    }

protected:
    struct Block {
        int degree = 0;
        int offset = 0;
        int rank = 0;
        std::vector<std::pair<int, int>> slots;  // (target index, source index)
        std::vector<int> slot_of;                // t * dim X + j -> slot or -1
        SparseMat<S> basis;                      // slots x rank
        std::vector<int> free;                   // free slot per basis column
        int slot(int t, int j, int dx) const { return slot_of[static_cast<std::size_t>(t) * dx + j]; }
    };

    void build(const GradedSpace& x, const GradedSpace& y, const SparseMat<S>& dx, const SparseMat<S>& dy, const Constraints& cons) {
        const int nx = x.dim(), ny = y.dim();
        int offset = 0;
        for (int p = lo_ - 1; p <= hi_ + 1; ++p) {
            Block b;
            b.degree = p;
            b.slot_of.assign(static_cast<std::size_t>(nx) * ny, -1);
            for (int j = 0; j < nx; ++j)
                for (int t = 0; t < ny; ++t)
                    if (y.degree(t) == x.degree(j) + p) {
                        b.slot_of[static_cast<std::size_t>(t) * nx + j] = static_cast<int>(b.slots.size());
                        b.slots.emplace_back(t, j);
                    }
            Echelon<S> e(static_cast<int>(b.slots.size()));
            if (!b.slots.empty() && cons) {
                SlotFn slot = [&](int t, int j) { return b.slot(t, j, nx); };
                Emit emit = [&](const Vec<S>& row) {
                    if (!row.empty()) e.insert(row);
                };
                cons(p, slot, emit);
            }
            b.basis = e.kernel_basis();
            b.free = e.free_columns();
            b.rank = static_cast<int>(b.free.size());
            b.offset = offset;
            offset += b.rank;
            blocks_.emplace(p, std::move(b));
        }

        GradedSpace sp;
        for (int p = lo_ - 1; p <= hi_ + 1; ++p)
            for (int k = 0; k < blocks_.at(p).rank; ++k) sp.add(p, "f" + std::to_string(p) + "_" + std::to_string(k));

        SparseMat<S> dxt = SparseMat<S>(dx.transpose());
        Triplets<S> td;
        for (int p = lo_ - 1; p <= hi_; ++p) {
            const Block& b = blocks_.at(p);
            const Block& nb = blocks_.at(p + 1);
            const S sg = sign<S>(p);
            for (int k = 0; k < b.rank; ++k) {
                Vec<S> out;
                for (typename SparseMat<S>::InnerIterator it(b.basis, k); it; ++it) {
                    auto [t, j] = b.slots[static_cast<std::size_t>(it.row())];
                    const S v = it.value();
                    for (typename SparseMat<S>::InnerIterator dt(dy, t); dt; ++dt) {
                        int s = nb.slot(static_cast<int>(dt.row()), j, nx);
                        if (s >= 0) axpy(out, s, v * dt.value());
                    }
                    for (typename SparseMat<S>::InnerIterator dj(dxt, j); dj; ++dj) {
                        int s = nb.slot(t, static_cast<int>(dj.row()), nx);
                        if (s >= 0) axpy(out, s, -(sg * v * dj.value()));
                    }
                }
                for (std::size_t q = 0; q < nb.free.size(); ++q) {
                    auto f = out.find(nb.free[q]);
                    if (f != out.end()) td.add(nb.offset + static_cast<int>(q), b.offset + k, f->second);
                }
            }
        }
        c_.space = sp;
        c_.d = td.build(sp.dim(), sp.dim());
        c_.trusted = Window::upto(lo_, hi_);
    }

    int dx_dim_ = 0, dy_dim_ = 0;
    int lo_ = 0, hi_ = 0;
    std::map<int, Block> blocks_;
    Complex<S> c_;
};

/// Hom_A(M, N) as a complex of graded A-linear maps.
template <class S>
class HomComplex : public MapComplex<S> {
public:
    HomComplex(ModulePtr<S> m, ModulePtr<S> n, int lo, int hi) : m_(std::move(m)), n_(std::move(n)) {
        const CDGModule<S>& mm = *m_;
        const CDGModule<S>& nn = *n_;
        if (mm.algebra->dim() != nn.algebra->dim()) throw std::invalid_argument("Hom between modules over different algebras");
        this->dx_dim_ = mm.dim();
        this->dy_dim_ = nn.dim();
        this->lo_ = lo;
        this->hi_ = hi;
        this->build(mm.space, nn.space, mm.d, nn.d, [&](int p, const auto& slot, const auto& emit) { linearity(p, slot, emit); });
        Window trusted = Window::upto(lo, hi);
        if (!nn.space.window.total) {
            long top = static_cast<long>(nn.space.window.hi) - generator_top(mm) - 1;
            trusted.hi = static_cast<int>(std::min<long>(trusted.hi, top));
        }
        this->c_.trusted = trusted;
    }

    /// The full range of degrees where maps can exist.
    static HomComplex full(ModulePtr<S> m, ModulePtr<S> n) {
        int lo = n->space.min_degree() - m->space.max_degree();
        int hi = n->space.max_degree() - m->space.min_degree();
        return HomComplex(std::move(m), std::move(n), lo, hi);
    }

    const ModulePtr<S>& source() const { return m_; }
    const ModulePtr<S>& target() const { return n_; }

    ModMap<S> map_of(const Vec<S>& v) const {
        auto [p, m] = this->matrix_of(v);
        return {m_, n_, p, m};
    }
    Vec<S> coordinates(const ModMap<S>& f) const { return MapComplex<S>::coordinates(f.degree, f.matrix); }
    std::vector<CohomologyDegree<S>> cohomology(int lo, int hi) const { return cdg::cohomology(this->c_, lo, hi); }

private:
    // f(a m_j) - (-1)^{p|a|} a f(m_j) = 0 for every basis a, m_j
    void linearity(int p, const typename MapComplex<S>::SlotFn& slot, const typename MapComplex<S>::Emit& emit) const {
        const CDGModule<S>& m = *m_;
        const CDGModule<S>& n = *n_;
        const CDGAlgebra<S>& a = *m.algebra;
        const int dm = m.dim(), dn = n.dim();
        for (int ai = 1; ai < a.dim(); ++ai) {
            const S sg = sign<S>(static_cast<long>(p) * a.deg(ai));
            for (int j = 0; j < dm; ++j) {
                std::map<int, Vec<S>> rows;
                for (typename SparseMat<S>::InnerIterator am(m.action, ai * dm + j); am; ++am) {
                    int k = static_cast<int>(am.row());
                    for (int t = 0; t < dn; ++t) {
                        int s = slot(t, k);
                        if (s >= 0) axpy(rows[t], s, am.value());
                    }
                }
                for (int t = 0; t < dn; ++t) {
                    int s = slot(t, j);
                    if (s < 0) continue;
                    for (typename SparseMat<S>::InnerIterator an(n.action, ai * dn + t); an; ++an)
                        axpy(rows[static_cast<int>(an.row())], s, -(sg * an.value()));
                }
                for (const auto& [u, row] : rows) emit(row);
            }
        }
    }

    ModulePtr<S> m_, n_;
};

/// Post-composition with a closed degree-0 map f: Hom(T, M) -> Hom(T, N).
template <class S>
SparseMat<S> postcompose(const ModMap<S>& f, const HomComplex<S>& from, const HomComplex<S>& to) {
    const Complex<S>& c = from.complex();
    std::vector<Vec<S>> cols;
    for (int g = 0; g < c.space.dim(); ++g) {
        int p = c.space.degree(g);
        if (p < to.lo() - 1 || p > to.hi() + 1) { cols.emplace_back(); continue; }
        cols.push_back(to.coordinates(compose(f, from.map_of(unit_vec<S>(g)))));
    }
    return from_columns<S>(to.complex().space.dim(), cols);
}

/// Pre-composition with a closed degree-0 map f: Hom(N, V) -> Hom(M, V).
template <class S>
SparseMat<S> precompose(const ModMap<S>& f, const HomComplex<S>& from, const HomComplex<S>& to) {
    const Complex<S>& c = from.complex();
    std::vector<Vec<S>> cols;
    for (int g = 0; g < c.space.dim(); ++g) {
        int p = c.space.degree(g);
        if (p < to.lo() - 1 || p > to.hi() + 1) { cols.emplace_back(); continue; }
        cols.push_back(to.coordinates(compose(from.map_of(unit_vec<S>(g)), f)));
    }
    return from_columns<S>(to.complex().space.dim(), cols);
}

template <class S>
struct NullHomotopy {
    std::optional<ModMap<S>> psi;
    bool window_relative = false;  // verdict refers to a truncation
};

/// Solves D(psi) = f for psi of degree |f| - 1.
template <class S>
NullHomotopy<S> null_homotopy(const ModMap<S>& f) {
    NullHomotopy<S> out;
    out.window_relative = !f.source->space.window.total || !f.target->space.window.total;
    if (is_zero<S>(f.matrix)) {
        out.psi = zero_map(f.source, f.target, f.degree - 1);
        return out;
    }
    if (!is_closed(f)) return out;
    HomComplex<S> h(f.source, f.target, f.degree, f.degree);
    Vec<S> b = h.coordinates(f);
    auto x = solve(h.complex().d, b);
    if (!x) return out;
    ModMap<S> psi = h.map_of(*x);
    psi.degree = f.degree - 1;
    if (!equal<S>(hom_differential(psi).matrix, f.matrix)) throw std::logic_error("null_homotopy: solution does not verify");
    out.psi = psi;
    return out;
}

}  // namespace cdg
