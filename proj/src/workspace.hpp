#pragma once

#include <set>
#include <sstream>

#include "cdg/bar.hpp"
#include "cdg/coalgebra.hpp"
#include "cdg/module.hpp"
#include "manifest.hpp"

namespace cdg::app {

/// Typed objects built from a manifest, in declaration order.
template <class S>
struct Workspace {
    struct Entry {
        std::string kind, name;
    };
    Manifest manifest;
    int window = 12;
    std::uint64_t seed = 0;
    std::vector<Entry> order;
    std::map<std::string, AlgebraPtr<S>> algebras;
    std::map<std::string, CoalgebraPtr<S>> coalgebras;
    std::map<std::string, ModulePtr<S>> modules;
    std::map<std::string, ComodulePtr<S>> comodules;
    std::map<std::string, ContramodulePtr<S>> contramodules;
    std::map<std::string, ModMap<S>> maps;
    std::map<std::string, std::vector<ModulePtr<S>>> families;

    bool has(const std::string& name) const {
        return algebras.count(name) || coalgebras.count(name) || modules.count(name) || comodules.count(name) || contramodules.count(name) ||
               maps.count(name) || families.count(name);
    }
};

template <class S>
struct BuildResult {
    std::optional<Workspace<S>> workspace;
    std::vector<ManifestError> errors;
};

namespace detail {

struct BuildFailure {
    ManifestError::Kind kind;
    Pos pos;
    std::string message;
};

inline int resolve(const GradedSpace& sp, const Ref& r, const std::string& object) {
    int found = -1, count = 0;
    for (int i = 0; i < sp.dim(); ++i)
        if (sp.label(i) == r.label && (!r.degree || sp.degree(i) == *r.degree)) {
            if (found < 0) found = i;
            ++count;
        }
    if (count == 0) throw BuildFailure{ManifestError::Kind::unknown_name, r.pos, "no basis vector '" + r.label + "' in " + object};
    if (count > 1) throw BuildFailure{ManifestError::Kind::invalid, r.pos, "label '" + r.label + "' is ambiguous in " + object + "; pin a degree with @"};
    return found;
}

template <class S>
S coefficient(const std::string& text, bool negative, Pos pos) {
    try {
        S c = S::parse(text);
        return negative ? -c : c;
    } catch (const std::exception& e) {
        throw BuildFailure{ManifestError::Kind::invalid, pos, e.what()};
    }
}

template <class S>
Vec<S> vector_of(const Expr& e, const GradedSpace& sp, const std::string& object) {
    Vec<S> v;
    for (const Term& t : e.terms) {
        if (t.factors.size() != 1) throw BuildFailure{ManifestError::Kind::syntax, t.pos, "expected a single basis vector, not a tensor"};
        axpy(v, resolve(sp, t.factors[0], object), coefficient<S>(t.coef, t.negative, t.pos));
    }
    return v;
}

template <class S>
Vec<S> tensor_of(const Expr& e, const GradedSpace& left, const std::string& lname, const GradedSpace& right, const std::string& rname) {
    Vec<S> v;
    for (const Term& t : e.terms) {
        if (t.factors.size() != 2) throw BuildFailure{ManifestError::Kind::syntax, t.pos, "expected a tensor a|b"};
        const int i = resolve(left, t.factors[0], lname), j = resolve(right, t.factors[1], rname);
        axpy(v, i * right.dim() + j, coefficient<S>(t.coef, t.negative, t.pos));
    }
    return v;
}

// Columns of a structure map, each given at most once.
template <class S>
class Columns {
public:
    void set(int c, Vec<S> v, Pos pos, const std::string& what) {
        if (!cols_.emplace(c, std::move(v)).second) throw BuildFailure{ManifestError::Kind::invalid, pos, what + " is given twice"};
    }
    bool has(int c) const { return cols_.count(c) > 0; }
    SparseMat<S> build(int rows, int cols) const {
        Triplets<S> t;
        for (const auto& [c, v] : cols_) t.add_column(c, v);
        return t.build(rows, cols);
    }

private:
    std::map<int, Vec<S>> cols_;
};

inline GradedSpace space_of(const ObjectDecl& o, const char* keyword = "basis") {
    struct Item {
        int degree;
        std::string label;
        Pos pos;
    };
    std::vector<Item> items;
    GradedSpace probe;
    for (const auto& b : o.body)
        if (b.keyword == keyword)
            for (const auto& l : b.labels) {
                try {
                    probe.add(b.degree, l);
                } catch (const std::invalid_argument& e) {
                    throw BuildFailure{ManifestError::Kind::invalid, b.pos, std::string(e.what()) + " in " + o.name};
                }
                items.push_back({b.degree, l, b.pos});
            }
    std::vector<int> weights(items.size(), 0);
    GradedSpace sp;
    for (const auto& b : o.body) {
        if (b.keyword == "weight") weights[static_cast<std::size_t>(resolve(probe, b.refs[0], o.name))] = static_cast<int>(b.number);
        if (b.keyword == "window") {
            if (b.total) sp.window = Window::all();
            else sp.window = Window::upto(b.lo ? static_cast<int>(*b.lo) : Window::kMin, b.hi ? static_cast<int>(*b.hi) : Window::kMax);
        }
        if (b.keyword == "truncation") sp.truncation = {b.mode == "input" ? Truncation::Kind::input : Truncation::Kind::output, static_cast<int>(b.number)};
    }
    for (std::size_t i = 0; i < items.size(); ++i) sp.add(items[i].degree, items[i].label, weights[i]);
    return sp;
}

// d from "d x = ..." entries and "d DEG = [..]" blocks.
template <class S>
SparseMat<S> differential_of(const ObjectDecl& o, const GradedSpace& sp) {
    Columns<S> cols;
    for (const auto& b : o.body) {
        if (b.keyword != "d") continue;
        if (!b.block) {
            const int j = resolve(sp, b.refs[0], o.name);
            cols.set(j, vector_of<S>(*b.expr, sp, o.name), b.pos, "d(" + b.refs[0].label + ")");
            continue;
        }
        const std::vector<int> src = sp.component(b.degree), tgt = sp.component(b.degree + 1);
        const std::size_t rows = b.matrix.size(), width = rows ? b.matrix[0].size() : 0;
        bool ragged = false;
        for (const auto& r : b.matrix) ragged = ragged || r.size() != width;
        const bool empty_ok = rows == 0 && (src.empty() || tgt.empty());
        if (!empty_ok && (ragged || rows != tgt.size() || width != src.size()))
            throw BuildFailure{ManifestError::Kind::dimension_mismatch, b.pos,
                               o.name + " degree " + std::to_string(b.degree) + ": block is " + std::to_string(rows) + "x" + std::to_string(width) +
                                   (ragged ? " (ragged)" : "") + " but d maps the " + std::to_string(src.size()) + "-dimensional component to the " +
                                   std::to_string(tgt.size()) + "-dimensional one"};
        for (std::size_t c = 0; c < width; ++c) {
            Vec<S> v;
            for (std::size_t r = 0; r < rows; ++r) {
                const std::string& t = b.matrix[r][c];
                const bool neg = t[0] == '-';
                axpy(v, tgt[r], coefficient<S>(neg ? t.substr(1) : t, neg, b.pos));
            }
            cols.set(src[c], v, b.pos, "d(" + sp.label(src[c]) + ")");
        }
    }
    return cols.build(sp.dim(), sp.dim());
}

inline const BodyLine* single(const ObjectDecl& o, const char* keyword) {
    const BodyLine* found = nullptr;
    for (const auto& b : o.body)
        if (b.keyword == keyword) {
            if (found) throw BuildFailure{ManifestError::Kind::invalid, b.pos, std::string(keyword) + " is given twice in " + o.name};
            found = &b;
        }
    return found;
}

inline void allow_only(const ObjectDecl& o, std::initializer_list<const char*> keywords) {
    for (const auto& b : o.body) {
        bool ok = false;
        for (const char* k : keywords) ok = ok || b.keyword == k;
        if (!ok) throw BuildFailure{ManifestError::Kind::syntax, b.pos, "'" + b.keyword + "' is not allowed in " + o.kind + " " + o.name};
    }
}

template <class S>
CDGAlgebra<S> explicit_algebra(const ObjectDecl& o) {
    allow_only(o, {"basis", "weight", "window", "truncation", "mul", "d", "h"});
    CDGAlgebra<S> a;
    a.name = o.name;
    a.space = space_of(o);
    const int n = a.dim();
    if (n == 0) throw BuildFailure{ManifestError::Kind::invalid, o.pos, "algebra " + o.name + " needs a unit as its first basis vector"};
    Columns<S> mult;
    for (const auto& b : o.body)
        if (b.keyword == "mul") {
            const int i = resolve(a.space, b.refs[0], o.name), j = resolve(a.space, b.refs[1], o.name);
            mult.set(i * n + j, vector_of<S>(*b.expr, a.space, o.name), b.pos, b.refs[0].label + "·" + b.refs[1].label);
        }
    for (int j = 0; j < n; ++j) {
        if (!mult.has(j)) mult.set(j, unit_vec<S>(j), o.pos, "");
        if (!mult.has(j * n)) mult.set(j * n, unit_vec<S>(j), o.pos, "");
    }
    a.mult = mult.build(n, n * n);
    a.d = differential_of<S>(o, a.space);
    if (const BodyLine* h = single(o, "h")) a.h = vector_of<S>(*h->expr, a.space, o.name);
    return a;
}

template <class S>
CDGModule<S> explicit_module(const ObjectDecl& o, const AlgebraPtr<S>& alg) {
    allow_only(o, {"basis", "weight", "window", "truncation", "act", "d"});
    CDGModule<S> m;
    m.name = o.name;
    m.algebra = alg;
    m.space = space_of(o);
    const int k = m.dim(), n = alg->dim();
    Columns<S> act;
    for (const auto& b : o.body)
        if (b.keyword == "act") {
            const int a = resolve(alg->space, b.refs[0], alg->name), j = resolve(m.space, b.refs[1], o.name);
            act.set(a * k + j, vector_of<S>(*b.expr, m.space, o.name), b.pos, b.refs[0].label + "·" + b.refs[1].label);
        }
    for (int j = 0; j < k; ++j)
        if (!act.has(j)) act.set(j, unit_vec<S>(j), o.pos, "");
    m.action = act.build(k, n * k);
    m.d = differential_of<S>(o, m.space);
    return m;
}

template <class S>
CDGModule<S> twisted_from(const ObjectDecl& o, const AlgebraPtr<S>& alg) {
    allow_only(o, {"generators", "alpha"});
    GradedSpace gens = space_of(o, "generators");
    if (gens.dim() == 0) throw BuildFailure{ManifestError::Kind::invalid, o.pos, "twisted module " + o.name + " needs generators"};
    Connection<S> c;
    c.degrees = gens.degrees();
    const auto r = static_cast<std::size_t>(gens.dim());
    c.alpha.assign(r, std::vector<Vec<S>>(r));
    std::set<std::pair<int, int>> seen;
    for (const auto& b : o.body)
        if (b.keyword == "alpha") {
            const int w = resolve(gens, b.refs[0], o.name), v = resolve(gens, b.refs[1], o.name);
            if (!seen.insert({w, v}).second) throw BuildFailure{ManifestError::Kind::invalid, b.pos, "alpha entry given twice"};
            c.alpha[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)] = vector_of<S>(*b.expr, alg->space, alg->name);
        }
    try {
        return twisted_module_unchecked(alg, c, o.name);
    } catch (const std::exception& e) {
        throw BuildFailure{ManifestError::Kind::invalid, o.pos, e.what()};
    }
}

template <class S>
CDGCoalgebra<S> explicit_coalgebra(const ObjectDecl& o) {
    allow_only(o, {"basis", "weight", "window", "truncation", "comul", "counit", "d", "h"});
    CDGCoalgebra<S> c;
    c.name = o.name;
    c.space = space_of(o);
    const int n = c.dim();
    Columns<S> comult;
    for (const auto& b : o.body)
        if (b.keyword == "comul") {
            const int j = resolve(c.space, b.refs[0], o.name);
            comult.set(j, tensor_of<S>(*b.expr, c.space, o.name, c.space, o.name), b.pos, "Δ(" + b.refs[0].label + ")");
        }
    c.comult = comult.build(n * n, n);
    c.d = differential_of<S>(o, c.space);
    if (const BodyLine* e = single(o, "counit")) c.counit = vector_of<S>(*e->expr, c.space, o.name);
    if (const BodyLine* h = single(o, "h")) c.h = vector_of<S>(*h->expr, c.space, o.name);
    return c;
}

template <class S>
Comodule<S> explicit_comodule(const ObjectDecl& o, const CoalgebraPtr<S>& coalg) {
    allow_only(o, {"basis", "weight", "window", "truncation", "coact", "d"});
    Comodule<S> m;
    m.name = o.name;
    m.coalgebra = coalg;
    m.space = space_of(o);
    const int k = m.dim();
    Columns<S> coact;
    for (const auto& b : o.body)
        if (b.keyword == "coact") {
            const int j = resolve(m.space, b.refs[0], o.name);
            coact.set(j, tensor_of<S>(*b.expr, coalg->space, coalg->name, m.space, o.name), b.pos, "ρ(" + b.refs[0].label + ")");
        }
    m.coaction = coact.build(coalg->dim() * k, k);
    m.d = differential_of<S>(o, m.space);
    return m;
}

template <class S>
Contramodule<S> explicit_contramodule(const ObjectDecl& o, const CoalgebraPtr<S>& coalg) {
    allow_only(o, {"basis", "weight", "window", "truncation", "contra", "d"});
    Contramodule<S> p;
    p.name = o.name;
    p.coalgebra = coalg;
    p.space = space_of(o);
    const int k = p.dim();
    Columns<S> alpha;
    for (const auto& b : o.body)
        if (b.keyword == "contra") {
            const int c = resolve(coalg->space, b.refs[0], coalg->name), j = resolve(p.space, b.refs[1], o.name);
            alpha.set(c * k + j, vector_of<S>(*b.expr, p.space, o.name), b.pos, "α(E(" + b.refs[0].label + "," + b.refs[1].label + "))");
        }
    p.contraaction = alpha.build(k, coalg->dim() * k);
    p.d = differential_of<S>(o, p.space);
    return p;
}

template <class S>
ModMap<S> explicit_map(const ObjectDecl& o, const ModulePtr<S>& src, const ModulePtr<S>& tgt) {
    allow_only(o, {"image"});
    Columns<S> cols;
    for (const auto& b : o.body)
        if (b.keyword == "image") {
            const int j = resolve(src->space, b.refs[0], src->name);
            cols.set(j, vector_of<S>(*b.expr, tgt->space, tgt->name), b.pos, "image of " + b.refs[0].label);
        }
    return {src, tgt, o.degree, cols.build(tgt->dim(), src->dim())};
}

template <class T>
const T& lookup(const std::map<std::string, T>& m, const std::string& name, const std::string& what, Pos pos) {
    auto it = m.find(name);
    if (it == m.end()) throw BuildFailure{ManifestError::Kind::unknown_name, pos, "no " + what + " named '" + name + "'"};
    return it->second;
}

inline int integer_option(const ObjectDecl& o, const char* key, int fallback) {
    auto it = o.options.find(key);
    return it == o.options.end() ? fallback : std::stoi(it->second);
}

}  // namespace detail

/// Builds every declared object.  Names must be declared before use;
/// objects depending on a failed declaration are skipped silently.
template <class S>
BuildResult<S> build_workspace(const Manifest& man, int default_window, std::uint64_t default_seed) {
    using namespace detail;
    BuildResult<S> res;
    Workspace<S> w;
    w.manifest = man;
    w.window = man.window.value_or(default_window);
    w.seed = man.seed.value_or(default_seed);
    std::set<std::string> failed;
    auto depends_on_failed = [&](const ObjectDecl& o) {
        return failed.count(o.over) || failed.count(o.source) || failed.count(o.target);
    };
    for (const auto& o : man.objects) {
        if (depends_on_failed(o)) {
            failed.insert(o.name);
            continue;
        }
        try {
            if (o.kind == "algebra") {
                CDGAlgebra<S> a;
                if (o.form.empty()) a = explicit_algebra<S>(o);
                else if (o.form == "polynomial") {
                    const int top = integer_option(o, "top", w.window);
                    if (top < 0) throw BuildFailure{ManifestError::Kind::invalid, o.pos, "negative top degree"};
                    const S dcoef = o.options.count("d") ? S::parse(o.options.at("d")) : S(0);
                    a = truncated_polynomial<S>(o.args[0], o.degree, top, dcoef);
                } else if (o.form == "exterior") {
                    a = exterior<S>(o.args[0], o.degree);
                } else if (o.form == "ground") {
                    a = ground_field<S>();
                } else {
                    a = dual_algebra(*lookup(w.coalgebras, o.over, "coalgebra", o.pos));
                }
                a.name = o.name;
                w.algebras[o.name] = share(std::move(a));
            } else if (o.kind == "coalgebra") {
                CDGCoalgebra<S> c;
                if (o.form.empty()) c = explicit_coalgebra<S>(o);
                else if (o.form == "dual") c = dual_coalgebra(*lookup(w.algebras, o.over, "algebra", o.pos));
                else c = *bar(lookup(w.algebras, o.over, "algebra", o.pos), o.degree).coalgebra;
                c.name = o.name;
                w.coalgebras[o.name] = share(std::move(c));
            } else if (o.kind == "module") {
                const auto& alg = lookup(w.algebras, o.over, "algebra", o.pos);
                if (o.form == "twisted") w.modules[o.name] = share(twisted_from<S>(o, alg));
                else if (o.form == "trivial") w.modules[o.name] = share(trivial_module<S>(alg, o.degree, o.name));
                else w.modules[o.name] = share(explicit_module<S>(o, alg));
            } else if (o.kind == "comodule") {
                w.comodules[o.name] = share(explicit_comodule<S>(o, lookup(w.coalgebras, o.over, "coalgebra", o.pos)));
            } else if (o.kind == "contramodule") {
                w.contramodules[o.name] = share(explicit_contramodule<S>(o, lookup(w.coalgebras, o.over, "coalgebra", o.pos)));
            } else if (o.kind == "map") {
                const auto& src = lookup(w.modules, o.source, "module", o.pos);
                const auto& tgt = lookup(w.modules, o.target, "module", o.pos);
                w.maps[o.name] = explicit_map<S>(o, src, tgt);
            }
            w.order.push_back({o.kind, o.name});
        } catch (const BuildFailure& f) {
            res.errors.push_back({f.kind, f.pos, f.message});
            failed.insert(o.name);
        } catch (const std::exception& e) {
            res.errors.push_back({ManifestError::Kind::invalid, o.pos, o.kind + " " + o.name + ": " + e.what()});
            failed.insert(o.name);
        }
    }
    for (const auto& f : man.families) {
        std::vector<ModulePtr<S>> members;
        bool ok = true;
        for (const auto& m : f.members) {
            auto it = w.modules.find(m);
            if (it != w.modules.end()) members.push_back(it->second);
            else {
                ok = false;
                if (!failed.count(m)) res.errors.push_back({ManifestError::Kind::unknown_name, f.pos, "family " + f.name + ": no module named '" + m + "'"});
            }
        }
        if (w.has(f.name)) res.errors.push_back({ManifestError::Kind::invalid, f.pos, "'" + f.name + "' is already defined"});
        if (ok) w.families[f.name] = std::move(members);
    }
    if (res.errors.empty()) res.workspace = std::move(w);
    return res;
}

/// Writes constructed objects as manifest text; dependencies are emitted
/// first and clashing names are primed.
template <class S>
class Serializer {
public:
    explicit Serializer(const std::string& field) { out_ << "field " << field << "\n"; }

    std::string add(const AlgebraPtr<S>& a) {
        if (auto n = known(a.get())) return *n;
        const std::string name = claim(a.get(), a->name);
        const int n = a->dim();
        out_ << "\nalgebra " << quote_name(name) << "\n";
        space(a->space);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Vec<S> v = a->mul(i, j);
                const bool unit = i == 0 || j == 0;
                if (unit ? v == unit_vec<S>(i == 0 ? j : i) : v.empty()) continue;
                out_ << "  mul " << ref(a->space, i) << " " << ref(a->space, j) << " = " << expr(a->space, v) << "\n";
            }
        diff(a->space, a->d);
        if (!a->h.empty()) out_ << "  h = " << expr(a->space, a->h) << "\n";
        out_ << "end\n";
        return name;
    }

    std::string add(const ModulePtr<S>& m) {
        if (auto n = known(m.get())) return *n;
        const std::string alg = add(m->algebra);
        const std::string name = claim(m.get(), m->name);
        const int k = m->dim();
        out_ << "\nmodule " << quote_name(name) << " over " << quote_name(alg) << "\n";
        space(m->space);
        for (int a = 0; a < m->algebra->dim(); ++a)
            for (int j = 0; j < k; ++j) {
                const Vec<S> v = m->act(a, j);
                if (a == 0 ? v == unit_vec<S>(j) : v.empty()) continue;
                out_ << "  act " << ref(m->algebra->space, a) << " " << ref(m->space, j) << " = " << expr(m->space, v) << "\n";
            }
        diff(m->space, m->d);
        out_ << "end\n";
        return name;
    }

    std::string add(const CoalgebraPtr<S>& c) {
        if (auto n = known(c.get())) return *n;
        const std::string name = claim(c.get(), c->name);
        out_ << "\ncoalgebra " << quote_name(name) << "\n";
        space(c->space);
        for (int j = 0; j < c->dim(); ++j) {
            const Vec<S> v = c->delta(j);
            if (!v.empty()) out_ << "  comul " << ref(c->space, j) << " = " << tensor(c->space, c->space, v) << "\n";
        }
        if (!c->counit.empty()) out_ << "  counit = " << expr(c->space, c->counit) << "\n";
        diff(c->space, c->d);
        if (!c->h.empty()) out_ << "  h = " << expr(c->space, c->h) << "\n";
        out_ << "end\n";
        return name;
    }

    std::string add(const ComodulePtr<S>& m) {
        if (auto n = known(m.get())) return *n;
        const std::string co = add(m->coalgebra);
        const std::string name = claim(m.get(), m->name);
        out_ << "\ncomodule " << quote_name(name) << " over " << quote_name(co) << "\n";
        space(m->space);
        for (int j = 0; j < m->dim(); ++j) {
            const Vec<S> v = m->coact(j);
            if (!v.empty()) out_ << "  coact " << ref(m->space, j) << " = " << tensor(m->coalgebra->space, m->space, v) << "\n";
        }
        diff(m->space, m->d);
        out_ << "end\n";
        return name;
    }

    std::string add(const ContramodulePtr<S>& p) {
        if (auto n = known(p.get())) return *n;
        const std::string co = add(p->coalgebra);
        const std::string name = claim(p.get(), p->name);
        out_ << "\ncontramodule " << quote_name(name) << " over " << quote_name(co) << "\n";
        space(p->space);
        for (int c = 0; c < p->coalgebra->dim(); ++c)
            for (int j = 0; j < p->dim(); ++j) {
                const Vec<S> v = p->alpha(c, j);
                if (!v.empty()) out_ << "  contra " << ref(p->coalgebra->space, c) << " " << ref(p->space, j) << " = " << expr(p->space, v) << "\n";
            }
        diff(p->space, p->d);
        out_ << "end\n";
        return name;
    }

    std::string add(const ModMap<S>& f, const std::string& wanted) {
        const std::string src = add(f.source), tgt = add(f.target);
        const std::string name = claim(nullptr, wanted);
        out_ << "\nmap " << quote_name(name) << " : " << quote_name(src) << " -> " << quote_name(tgt) << " degree " << f.degree << "\n";
        for (int j = 0; j < f.source->dim(); ++j) {
            const Vec<S> v = f(j);
            if (!v.empty()) out_ << "  image " << ref(f.source->space, j) << " = " << expr(f.target->space, v) << "\n";
        }
        out_ << "end\n";
        return name;
    }

    std::string str() const { return out_.str(); }

private:
    std::optional<std::string> known(const void* p) const {
        auto it = names_.find(p);
        if (it == names_.end()) return std::nullopt;
        return it->second;
    }

    std::string claim(const void* p, std::string name) {
        if (name.empty()) name = "obj";
        while (used_.count(name)) name += "'";
        used_.insert(name);
        if (p) names_[p] = name;
        return name;
    }

    static std::string ref(const GradedSpace& sp, int i) {
        int same = 0;
        for (int j = 0; j < sp.dim(); ++j) same += sp.label(j) == sp.label(i) ? 1 : 0;
        std::string r = quote_name(sp.label(i));
        if (same > 1) r += "@" + std::to_string(sp.degree(i));
        return r;
    }

    static std::string term(const S& c, const std::string& body, bool first) {
        if (c == S(1)) return (first ? "" : " + ") + body;
        if (c == S(-1)) return (first ? "- " : " - ") + body;
        return signed_coefficient(c.str(), first) + "*" + body;
    }

    static std::string expr(const GradedSpace& sp, const Vec<S>& v) {
        if (v.empty()) return "0";
        std::string out;
        for (const auto& [k, c] : v) out += term(c, ref(sp, k), out.empty());
        return out;
    }

    static std::string tensor(const GradedSpace& left, const GradedSpace& right, const Vec<S>& v) {
        if (v.empty()) return "0";
        std::string out;
        const int n = right.dim();
        for (const auto& [k, c] : v) out += term(c, ref(left, k / n) + "|" + ref(right, k % n), out.empty());
        return out;
    }

    void space(const GradedSpace& sp) {
        for (int i = 0; i < sp.dim();) {
            int j = i;
            out_ << "  basis " << sp.degree(i) << " :";
            while (j < sp.dim() && sp.degree(j) == sp.degree(i)) out_ << " " << quote_name(sp.label(j++));
            out_ << "\n";
            i = j;
        }
        for (int i = 0; i < sp.dim(); ++i)
            if (sp.weight(i) != 0) out_ << "  weight " << ref(sp, i) << " " << sp.weight(i) << "\n";
        if (!sp.window.total)
            out_ << "  window " << (sp.window.lo <= Window::kMin ? std::string("-inf") : std::to_string(sp.window.lo)) << " "
                 << (sp.window.hi >= Window::kMax ? std::string("inf") : std::to_string(sp.window.hi)) << "\n";
        if (!sp.truncation.exact())
            out_ << "  truncation " << (sp.truncation.kind == Truncation::Kind::input ? "input" : "output") << " " << sp.truncation.limit << "\n";
    }

    void diff(const GradedSpace& sp, const SparseMat<S>& d) {
        for (int j = 0; j < sp.dim(); ++j) {
            const Vec<S> v = column(d, j);
            if (!v.empty()) out_ << "  d " << ref(sp, j) << " = " << expr(sp, v) << "\n";
        }
    }

    std::ostringstream out_;
    std::map<const void*, std::string> names_;
    std::set<std::string> used_;
};

}  // namespace cdg::app
