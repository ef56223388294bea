#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdg/linalg.hpp"

namespace cdg {

class OutOfWindow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degree interval on which a (possibly truncated) object is known.  A
/// total window means everything outside the listed support is zero.
struct Window {
    static constexpr int kMin = INT_MIN / 4;
    static constexpr int kMax = INT_MAX / 4;

    int lo = kMin;
    int hi = kMax;
    bool total = true;

    static Window all() { return {}; }
    static Window upto(int lo, int hi) { return {lo, hi, false}; }

    bool contains(int d) const { return total || (d >= lo && d <= hi); }
    Window meet(const Window& o) const {
        if (total) return o;
        if (o.total) return *this;
        return {std::max(lo, o.lo), std::min(hi, o.hi), false};
    }
    std::string str() const {
        if (total) return "total";
        std::ostringstream os;
        os << "[" << (lo <= kMin ? std::string("-inf") : std::to_string(lo)) << ","
           << (hi >= kMax ? std::string("inf") : std::to_string(hi)) << "]";
        return os.str();
    }
    friend bool operator==(const Window&, const Window&) = default;
};

/// Word-length truncation of a bar-type object.  Input-restricted objects
/// (comodule side) compute d exactly on inputs of weight < limit;
/// output-restricted objects (contramodule side) compute the components of
/// d of weight < limit exactly.  An identity involving k differentials is
/// checked on inputs of weight <= limit-1 with outputs projected to weight
/// <= limit (input kind), or on output components of weight <= limit-k
/// (output kind).
struct Truncation {
    enum class Kind { none, input, output };
    Kind kind = Kind::none;
    int limit = 0;

    bool exact() const { return kind == Kind::none; }
    bool input_ok(int w) const { return kind != Kind::input || w <= limit - 1; }
    bool output_ok(int w, int k) const {
        if (kind == Kind::input) return w <= limit;
        if (kind == Kind::output) return w <= limit - k;
        return true;
    }
    std::string str() const {
        if (kind == Kind::none) return "exact";
        return std::string("window: word length ") + (kind == Kind::input ? "inputs <= " + std::to_string(limit - 1) : "outputs <= " + std::to_string(limit) + "-k");
    }
};

/// Degreewise finite graded vector space with a flat basis.  Every basis
/// vector has a degree and a label; per-degree components are the blocks
/// of equal degree.  Optional integer weights (word length for bar objects)
/// ride along for truncation control.
class GradedSpace {
public:
    GradedSpace() = default;

    int add(int degree, std::string label, int weight = 0) {
        if (!labels_seen_[degree].insert(label).second)
            throw std::invalid_argument("duplicate basis label '" + label + "' in degree " + std::to_string(degree));
        degrees_.push_back(degree);
        labels_.push_back(std::move(label));
        weights_.push_back(weight);
        return dim() - 1;
    }

    /// Like add, priming the label until it is new in its degree.
    int add_unique(int degree, std::string label, int weight = 0) {
        while (labels_seen_[degree].count(label)) label += "'";
        return add(degree, std::move(label), weight);
    }

    int dim() const { return static_cast<int>(degrees_.size()); }
    int degree(int i) const { return degrees_[static_cast<std::size_t>(i)]; }
    const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
    int weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& degrees() const { return degrees_; }

    /// Dimension of the degree-d component.
    int dim(int d) const {
        if (!window.contains(d)) throw OutOfWindow("degree " + std::to_string(d) + " outside window " + window.str());
        return static_cast<int>(std::count(degrees_.begin(), degrees_.end(), d));
    }

    std::vector<int> component(int d) const {
        std::vector<int> out;
        for (int i = 0; i < dim(); ++i)
            if (degrees_[static_cast<std::size_t>(i)] == d) out.push_back(i);
        return out;
    }

    /// Degrees with nonzero components, ascending.
    std::vector<int> support() const {
        std::set<int> s(degrees_.begin(), degrees_.end());
        return {s.begin(), s.end()};
    }
    int min_degree() const { return degrees_.empty() ? 0 : *std::min_element(degrees_.begin(), degrees_.end()); }
    int max_degree() const { return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end()); }
    int max_weight() const { return weights_.empty() ? 0 : *std::max_element(weights_.begin(), weights_.end()); }

    /// Dimensions per degree, for reporting and comparisons.
    std::map<int, int> dims() const {
        std::map<int, int> m;
        for (int d : degrees_) ++m[d];
        return m;
    }

    int find(const std::string& label) const {
        for (int i = 0; i < dim(); ++i)
            if (labels_[static_cast<std::size_t>(i)] == label) return i;
        return -1;
    }

    Window window;
    Truncation truncation;

private:
    std::vector<int> degrees_;
    std::vector<std::string> labels_;
    std::vector<int> weights_;
    std::map<int, std::set<std::string>> labels_seen_;
};

inline bool same_shape(const GradedSpace& a, const GradedSpace& b) { return a.degrees() == b.degrees(); }

/// Homogeneous linear map of fixed degree, stored as one sparse matrix over
/// the flat bases; blocks() extracts the per-degree matrices.
template <class S>
struct GradedMap {
    GradedSpace source;
    GradedSpace target;
    int degree = 0;
    SparseMat<S> matrix;

    GradedMap() = default;
    GradedMap(GradedSpace src, GradedSpace tgt, int deg, SparseMat<S> m)
        : source(std::move(src)), target(std::move(tgt)), degree(deg), matrix(std::move(m)) {
        validate();
    }

    void validate() const {
        if (matrix.rows() != target.dim() || matrix.cols() != source.dim())
            throw std::invalid_argument("graded map: matrix shape does not match source/target");
        for (int j = 0; j < matrix.outerSize(); ++j)
            for (typename SparseMat<S>::InnerIterator it(matrix, j); it; ++it)
                if (!it.value().is_zero() && target.degree(static_cast<int>(it.row())) != source.degree(j) + degree)
                    throw std::invalid_argument("graded map: entry (" + target.label(static_cast<int>(it.row())) + ", " +
                                                source.label(j) + ") breaks homogeneity of degree " + std::to_string(degree));
    }

    Window window() const { return source.window.meet(target.window); }

    /// Matrix of the component V^i -> W^{i+degree}.
    DenseMat<S> block(int i) const {
        if (!window().contains(i) || !window().contains(i + degree))
            throw OutOfWindow("block " + std::to_string(i) + " outside window " + window().str());
        auto cols = source.component(i);
        auto rows = target.component(i + degree);
        DenseMat<S> b = DenseMat<S>::Constant(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()), S(0));
        std::map<int, int> rpos;
        for (std::size_t r = 0; r < rows.size(); ++r) rpos[rows[r]] = static_cast<int>(r);
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (typename SparseMat<S>::InnerIterator it(matrix, cols[c]); it; ++it) b(rpos.at(static_cast<int>(it.row())), static_cast<Eigen::Index>(c)) = it.value();
        return b;
    }

    Vec<S> operator()(const Vec<S>& v) const { return apply(matrix, v); }
};

template <class S>
inline GradedMap<S> identity_map(const GradedSpace& v) {
    return GradedMap<S>(v, v, 0, identity<S>(v.dim()));
}

template <class S>
inline GradedMap<S> zero_map(const GradedSpace& v, const GradedSpace& w, int degree) {
    return GradedMap<S>(v, w, degree, SparseMat<S>(w.dim(), v.dim()));
}

/// g ∘ f.
template <class S>
inline GradedMap<S> compose(const GradedMap<S>& g, const GradedMap<S>& f) {
    if (!same_shape(f.target, g.source)) throw std::invalid_argument("compose: target/source mismatch");
    GradedMap<S> r(f.source, g.target, f.degree + g.degree, product(g.matrix, f.matrix));
    r.source.window = f.source.window.meet(g.window());
    return r;
}

template <class S>
inline GradedMap<S> operator+(const GradedMap<S>& a, const GradedMap<S>& b) {
    if (a.degree != b.degree) throw std::invalid_argument("sum of maps of different degree");
    return GradedMap<S>(a.source, a.target, a.degree, pruned<S>(SparseMat<S>(a.matrix + b.matrix)));
}

template <class S>
inline GradedMap<S> operator*(const S& c, const GradedMap<S>& a) {
    return GradedMap<S>(a.source, a.target, a.degree, pruned<S>(SparseMat<S>(a.matrix * c)));
}

namespace detail {
inline Window tensor_window(const GradedSpace& v, const GradedSpace& w) {
    if (v.window.total && w.window.total) return Window::all();
    // below the lower ends everything is known; above, a degree of V⊗W is
    // determined only if each factor's contribution is.
    int vlo = v.window.total ? v.min_degree() : v.window.lo;
    int wlo = w.window.total ? w.min_degree() : w.window.lo;
    int vhi = v.window.total ? Window::kMax : v.window.hi;
    int whi = w.window.total ? Window::kMax : w.window.hi;
    long hi = std::min<long>(static_cast<long>(vhi) + w.min_degree(), static_cast<long>(whi) + v.min_degree());
    return Window::upto(vlo + wlo, static_cast<int>(std::min<long>(hi, Window::kMax)));
}
}  // namespace detail

/// V ⊗ W with basis (v_i, w_j) at flat index i * dim W + j.
inline GradedSpace tensor_space(const GradedSpace& v, const GradedSpace& w) {
    GradedSpace t;
    for (int i = 0; i < v.dim(); ++i)
        for (int j = 0; j < w.dim(); ++j)
            t.add(v.degree(i) + w.degree(j), "(" + v.label(i) + "," + w.label(j) + ")", v.weight(i) + w.weight(j));
    t.window = detail::tensor_window(v, w);
    return t;
}

/// (f ⊗ g)(v ⊗ w) = (-1)^{|g||v|} f(v) ⊗ g(w).
template <class S>
inline GradedMap<S> tensor_map(const GradedMap<S>& f, const GradedMap<S>& g) {
    int nw = g.source.dim();
    int tw = g.target.dim();
    Triplets<S> t;
    for (int i = 0; i < f.source.dim(); ++i) {
        S s = sign<S>(static_cast<long>(g.degree) * f.source.degree(i));
        for (typename SparseMat<S>::InnerIterator a(f.matrix, i); a; ++a)
            for (int j = 0; j < nw; ++j)
                for (typename SparseMat<S>::InnerIterator b(g.matrix, j); b; ++b)
                    t.add(static_cast<int>(a.row()) * tw + static_cast<int>(b.row()), i * nw + j, s * a.value() * b.value());
    }
    GradedSpace src = tensor_space(f.source, g.source);
    GradedSpace tgt = tensor_space(f.target, g.target);
    return GradedMap<S>(src, tgt, f.degree + g.degree, t.build(tgt.dim(), src.dim()));
}

/// V[n], with (V[n])^i = V^{n+i}.
inline GradedSpace shift(const GradedSpace& v, int n) {
    GradedSpace s;
    for (int i = 0; i < v.dim(); ++i) s.add(v.degree(i) - n, n == 0 ? v.label(i) : "s" + std::to_string(n) + v.label(i), v.weight(i));
    s.window = v.window;
    if (!s.window.total) {
        s.window.lo = v.window.lo <= Window::kMin ? Window::kMin : v.window.lo - n;
        s.window.hi = v.window.hi >= Window::kMax ? Window::kMax : v.window.hi - n;
    }
    return s;
}

/// f[n] = (-1)^{n|f|} f on shifted spaces; for a differential this is (-1)^n d.
template <class S>
inline GradedMap<S> shift_map(const GradedMap<S>& f, int n) {
    return GradedMap<S>(shift(f.source, n), shift(f.target, n), f.degree,
                        pruned<S>(SparseMat<S>(f.matrix * sign<S>(static_cast<long>(n) * f.degree))));
}

template <class S>
struct Subquotients {
    GradedSpace kernel;
    GradedMap<S> kernel_inclusion;
    GradedSpace image;
    GradedMap<S> image_inclusion;
    GradedSpace cokernel;
    GradedMap<S> cokernel_projection;
};

/// Kernel, image and cokernel of a homogeneous map.  The flat elimination
/// never mixes degrees, so the results are graded.
template <class S>
Subquotients<S> subquotients(const GradedMap<S>& f) {
    Subquotients<S> out;
    const GradedSpace& src = f.source;
    const GradedSpace& tgt = f.target;

    Echelon<S> rows(src.dim());
    for (const auto& r : rows_of(f.matrix)) rows.insert(r);
    SparseMat<S> k = rows.kernel_basis();
    std::vector<int> freec = rows.free_columns();
    for (std::size_t j = 0; j < freec.size(); ++j) out.kernel.add(src.degree(freec[j]), "k" + std::to_string(j) + ":" + src.label(freec[j]));
    out.kernel.window = f.window();
    out.kernel_inclusion = GradedMap<S>(out.kernel, src, 0, k);

    Subspace<S> im(tgt.dim(), columns_of(f.matrix));
    auto basis = im.basis();
    for (std::size_t j = 0; j < basis.size(); ++j) out.image.add(tgt.degree(basis[j].begin()->first), "i" + std::to_string(j) + ":" + tgt.label(basis[j].begin()->first));
    out.image.window = f.window();
    out.image_inclusion = GradedMap<S>(out.image, tgt, 0, from_columns<S>(tgt.dim(), basis));

    auto comp = im.complement();
    for (int c : comp) out.cokernel.add(tgt.degree(c), "c:" + tgt.label(c));
    out.cokernel.window = f.window();
    std::vector<Vec<S>> proj;
    for (int j = 0; j < tgt.dim(); ++j) proj.push_back(im.quotient(unit_vec<S>(j)));
    out.cokernel_projection = GradedMap<S>(tgt, out.cokernel, 0, from_columns<S>(out.cokernel.dim(), proj));
    return out;
}

}  // namespace cdg
