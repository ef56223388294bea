#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cdg/corpus.hpp"
#include "json.hpp"
#include "paper_suite.hpp"
#include "workspace.hpp"

namespace cdg::app {

namespace {

int env_int(const char* name, int fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    long x = std::strtol(v, &end, 10);
    if (*end != '\0' || x < 0 || x > 100000) return fallback;
    return static_cast<int>(x);
}

constexpr std::uint64_t kDefaultSeed = 20240611;

struct UsageError {
    std::string message;
};

// Collects report lines and the most severe exit code.  Axiom failures
// outrank verdict failures, which outrank window problems.
class Report {
public:
    void line(const std::string& s) { lines_.push_back(s); }
    void block(const std::string& s) {
        std::istringstream is(s);
        std::string l;
        while (std::getline(is, l)) lines_.push_back(l);
    }
    void flag(int code) {
        auto rank = [](int c) { return c == 2 ? 4 : c == 3 ? 3 : c == 4 ? 2 : c == 5 ? 1 : 0; };
        if (rank(code) > rank(code_)) code_ = code;
    }
    void verdict(const std::string& subject, bool pass, const std::string& detail = "") { verdicts_.push_back({subject, pass, detail}); }
    int code() const { return code_; }

    std::string text() const {
        std::string s;
        for (const auto& l : lines_) s += l + "\n";
        return s;
    }
    std::string json(const std::string& command, std::uint64_t seed) const {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["seed"] = seed;
        j["exit_code"] = code_;
        j["verdicts"] = nlohmann::ordered_json::array();
        for (const auto& v : verdicts_) j["verdicts"].push_back({{"subject", v.subject}, {"pass", v.pass}, {"detail", v.detail}});
        j["lines"] = lines_;
        return j.dump(2) + "\n";
    }

private:
    struct Verdict {
        std::string subject;
        bool pass;
        std::string detail;
    };
    std::vector<std::string> lines_;
    std::vector<Verdict> verdicts_;
    int code_ = 0;
};

void axiom_line(Report& r, const std::string& what, const AxiomReport& rep, const std::string& scope = "") {
    const std::string suffix = scope.empty() ? "" : "  [" + scope + "]";
    if (rep.ok()) {
        r.line(what + ": ok (" + std::to_string(rep.results.size()) + " checks)" + suffix);
    } else {
        r.line(what + ": FAIL " + rep.first_witness() + suffix);
        r.flag(ExitCode::axiom_failure);
    }
    r.verdict(what, rep.ok(), rep.first_witness());
}

template <class S>
std::string field_name() {
    if constexpr (std::is_same_v<S, ModP>) return "prime " + std::to_string(ModP::modulus());
    else return "rational";
}

std::string range_str(int lo, int hi) { return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]"; }

template <class S>
class Runner {
public:
    Runner(const Options& o, Workspace<S>& w, Report& r) : opts_(o), w_(w), r_(r) {}

    void check(const std::vector<std::string>& only) {
        for (const auto& name : only)
            if (!w_.has(name)) throw UsageError{"UnknownName: no object named '" + name + "'"};
        int n = 0;
        for (const auto& e : w_.order) {
            if (!only.empty() && std::find(only.begin(), only.end(), e.name) == only.end()) continue;
            ++n;
            if (e.kind == "algebra") {
                const auto& a = w_.algebras.at(e.name);
                axiom_line(r_, "algebra " + e.name, check_cdg_algebra(*a), a->space.window.total ? "" : "window " + a->space.window.str());
            } else if (e.kind == "module") {
                const auto& m = w_.modules.at(e.name);
                axiom_line(r_, "module " + e.name, check_module(*m), m->space.window.total ? "" : "window " + m->space.window.str());
            } else if (e.kind == "coalgebra") {
                const auto& c = w_.coalgebras.at(e.name);
                axiom_line(r_, "coalgebra " + e.name, check_cdg_coalgebra(*c), c->truncation().exact() ? "" : c->truncation().str());
            } else if (e.kind == "comodule") {
                axiom_line(r_, "comodule " + e.name, check_comodule(*w_.comodules.at(e.name)));
            } else if (e.kind == "contramodule") {
                axiom_line(r_, "contramodule " + e.name, check_contramodule(*w_.contramodules.at(e.name)));
            } else if (e.kind == "map") {
                const auto& f = w_.maps.at(e.name);
                AxiomReport rep = check_modmap(f);
                axiom_line(r_, "map " + e.name, rep, is_closed(f) ? "closed" : "not closed");
            }
        }
        if (n == 0) r_.line("nothing to check");
    }

    void cohomology(const std::string& src, const std::string& tgt, std::optional<int> lo, std::optional<int> hi) {
        const auto& m = module(src);
        const auto& n = module(tgt);
        auto [dlo, dhi] = hom_degree_range<S>({m}, {n});
        const int a = lo.value_or(dlo), b = hi.value_or(dhi);
        if (a > b) throw UsageError{"empty degree range " + range_str(a, b)};
        HomComplex<S> h(m, n, a, b);
        const Window t = h.complex().trusted;
        std::string dims;
        int known = 0;
        for (int p = a; p <= b; ++p) {
            if (!t.contains(p)) {
                dims += " ?";
                continue;
            }
            ++known;
            dims += " " + std::to_string(cohomology_data(h.complex(), p).dim());
        }
        r_.line("H(Hom(" + src + ", " + tgt + ")) degrees " + range_str(a, b) + ", exact on " + t.str() + ":" + dims);
        if (known == 0) {
            r_.line("  no degree of the range is inside the window");
            r_.flag(ExitCode::out_of_window);
        }
    }

    void bar_command(const std::string& alg, int n, Serializer<S>* emit) {
        const auto& a = algebra(alg);
        try {
            auto b = bar(a, n);
            std::string dims;
            for (const auto& [d, k] : b.coalgebra->space.dims()) dims += " " + std::to_string(d) + ":" + std::to_string(k);
            r_.line("bar(" + alg + ", " + std::to_string(n) + "): dim " + std::to_string(b.dim()) + ", degrees" + dims);
            axiom_line(r_, "  coalgebra " + b.coalgebra->name, check_cdg_coalgebra(*b.coalgebra), b.coalgebra->truncation().str());
            if (emit) emit->add(b.coalgebra);
        } catch (const OutOfWindow& e) {
            r_.line("bar(" + alg + ", " + std::to_string(n) + "): out of window: " + e.what());
            r_.flag(ExitCode::out_of_window);
        }
    }

    void twist(const std::string& mod, int n, Serializer<S>* emit) {
        const auto& m = module(mod);
        try {
            auto b = bar(m->algebra, n);
            auto comod = share(twisted_tensor_comod(b, m));
            auto contra = share(hom_tau_contra(b, m));
            auto back_mod = share(twisted_tensor_mod(b, comod));
            auto back_contra = share(hom_tau_mod(b, contra));
            r_.line("twisted functors of " + mod + " through " + b.coalgebra->name + ":");
            axiom_line(r_, "  C⊗τM", check_comodule(*comod), b.coalgebra->truncation().str());
            axiom_line(r_, "  Homτ(C,M)", check_contramodule(*contra), b.coalgebra->truncation().str());
            axiom_line(r_, "  A⊗τ(C⊗τM)", check_module(*back_mod));
            axiom_line(r_, "  Homτ(A,Homτ(C,M))", check_module(*back_contra));
            if (emit) {
                emit->add(comod);
                emit->add(contra);
                emit->add(back_mod);
                emit->add(back_contra);
            }
        } catch (const OutOfWindow& e) {
            r_.line("twist " + mod + ": out of window: " + e.what());
            r_.flag(ExitCode::out_of_window);
        }
    }

    void we(const std::string& map_name, const std::string& family_name, const std::optional<std::string>& cofamily_name) {
        auto it = w_.maps.find(map_name);
        if (it == w_.maps.end()) throw UsageError{"UnknownName: no map named '" + map_name + "'"};
        const ModMap<S>& f = it->second;
        if (!is_closed(f) || f.degree != 0) {
            r_.line("we " + map_name + ": not a closed degree-0 map");
            r_.flag(ExitCode::verdict_failure);
            return;
        }
        const std::vector<ModulePtr<S>>& fam = family(family_name);
        std::optional<WEReport> proj, inj;
        const std::string& model = opts_.model;
        if (model == "proj" || model == "both") {
            auto [lo, hi] = hom_degree_range<S>(fam, {f.source, f.target});
            proj = run_model([&] { return we_projective(f, fam, opts_.lo.value_or(lo), opts_.hi.value_or(hi)); }, "projective");
        }
        if (model == "inj" || model == "both") {
            std::vector<ModulePtr<S>> cog;
            std::string source;
            try {
                if (cofamily_name) {
                    cog = family(*cofamily_name);
                    source = "family " + *cofamily_name;
                } else {
                    if (f.source->algebra->curved()) throw OutOfWindow("no default cogenerators over a curved algebra");
                    cog = bar_cogenerators(bar(f.source->algebra, 3), 2, -2, 2);
                    source = "bar cogenerators, N = 3, n <= 2, shifts [-2,2]";
                }
            } catch (const std::exception& e) {
                r_.line("we-injective " + map_name + ": no cogenerator family: " + e.what());
                r_.flag(ExitCode::out_of_window);
            }
            if (!cog.empty()) {
                r_.line("cogenerators: " + source);
                auto [lo, hi] = hom_degree_range<S>({f.source, f.target}, cog);
                inj = run_model([&] { return we_injective(f, cog, opts_.lo.value_or(lo), opts_.hi.value_or(hi)); }, "injective");
            }
        }
        if (proj && inj) {
            Agreement ag{*proj, *inj};
            if (ag.agree()) r_.line("models agree");
            else r_.line(std::string(proj->weak_equivalence ? "injective" : "projective") + " model detects a defect the other family misses: family insufficiency");
        }
    }

    void triality(const std::string& mod, int n) {
        const auto& m = module(mod);
        try {
            auto b = bar(m->algebra, n);
            Auxeq<S> aux = auxeq_iso(b, m);
            r_.line("comparison isomorphisms for " + mod + " through " + b.coalgebra->name + ":");
            verdict_line("  A⊗τ(C⊗τM) ≅ M and Homτ(A,Homτ(C,M)) ≅ M", aux.report);
            for (const auto& [name, g] : w_.maps) {
                if (g.degree != 0 || !is_closed(g)) continue;
                if (g.source != m && g.target != m) continue;
                if (g.source->algebra != m->algebra || g.target->algebra != m->algebra) continue;
                Auxeq<S> src = g.source == m ? aux : auxeq_iso(b, g.source);
                Auxeq<S> tgt = g.target == m ? aux : auxeq_iso(b, g.target);
                verdict_line("  naturality along " + name, auxeq_naturality(g, src, tgt));
            }
        } catch (const OutOfWindow& e) {
            r_.line("triality " + mod + ": out of window: " + e.what());
            r_.flag(ExitCode::out_of_window);
        }
    }

    void phi_psi_all() {
        for (const auto& [pn, p] : w_.contramodules)
            for (const auto& [nn, c] : w_.comodules)
                if (p->coalgebra == c->coalgebra) verdict_line("Φ/Ψ triangles on " + pn + ", " + nn, verify_phi_psi(p, c, false, false));
    }

    void run_task(const TaskDecl& t) {
        auto arg = [&](std::size_t i) -> const std::string& {
            if (i >= t.args.size()) throw UsageError{"task " + t.command + " at line " + std::to_string(t.pos.line) + ": missing argument"};
            return t.args[i];
        };
        auto integer = [&](std::size_t i) {
            try {
                return std::stoi(arg(i));
            } catch (const std::logic_error&) {
                throw UsageError{"task " + t.command + " at line " + std::to_string(t.pos.line) + ": expected an integer"};
            }
        };
        r_.line("task " + t.command + (t.args.empty() ? "" : " " + join(t.args)));
        if (t.command == "check") {
            check(t.args);
        } else if (t.command == "cohomology") {
            if (t.args.size() == 4) cohomology(arg(0), arg(1), integer(2), integer(3));
            else cohomology(arg(0), arg(1), std::nullopt, std::nullopt);
        } else if (t.command == "bar") {
            bar_command(arg(0), t.args.size() > 1 ? integer(1) : opts_.truncate, nullptr);
        } else if (t.command == "twist") {
            twist(arg(0), t.args.size() > 1 ? integer(1) : opts_.truncate, nullptr);
        } else if (t.command == "we") {
            we(arg(0), arg(1), t.args.size() > 2 ? std::optional<std::string>(arg(2)) : std::nullopt);
        } else if (t.command == "triality") {
            triality(arg(0), t.args.size() > 1 ? integer(1) : opts_.truncate);
        } else {
            throw UsageError{"task at line " + std::to_string(t.pos.line) + ": unknown command '" + t.command + "'"};
        }
    }

    std::vector<const TaskDecl*> tasks(const std::string& command) const {
        std::vector<const TaskDecl*> out;
        for (const auto& t : w_.manifest.tasks)
            if (t.command == command) out.push_back(&t);
        return out;
    }

    std::vector<std::string> modules_by_order() const {
        std::vector<std::string> out;
        for (const auto& e : w_.order)
            if (e.kind == "module") out.push_back(e.name);
        return out;
    }

    std::vector<std::string> algebras_by_order() const {
        std::vector<std::string> out;
        for (const auto& e : w_.order)
            if (e.kind == "algebra") out.push_back(e.name);
        return out;
    }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
        return s;
    }

    const ModulePtr<S>& module(const std::string& name) const {
        auto it = w_.modules.find(name);
        if (it == w_.modules.end()) throw UsageError{"UnknownName: no module named '" + name + "'"};
        return it->second;
    }
    const AlgebraPtr<S>& algebra(const std::string& name) const {
        auto it = w_.algebras.find(name);
        if (it == w_.algebras.end()) throw UsageError{"UnknownName: no algebra named '" + name + "'"};
        return it->second;
    }
    const std::vector<ModulePtr<S>>& family(const std::string& name) const {
        auto it = w_.families.find(name);
        if (it == w_.families.end()) throw UsageError{"UnknownName: no family named '" + name + "'"};
        return it->second;
    }

    template <class F>
    std::optional<WEReport> run_model(F&& f, const std::string& what) {
        try {
            WEReport rep = f();
            r_.block(rep.str());
            r_.verdict("we-" + what + " " + rep.map, rep.weak_equivalence, rep.witness.value_or(""));
            if (!rep.weak_equivalence) r_.flag(ExitCode::verdict_failure);
            return rep;
        } catch (const OutOfWindow& e) {
            r_.line("we-" + what + ": out of window: " + e.what());
            r_.flag(ExitCode::out_of_window);
        } catch (const NotClosed& e) {
            r_.line("we-" + what + ": " + e.what());
            r_.flag(ExitCode::verdict_failure);
        }
        return std::nullopt;
    }

    void verdict_line(const std::string& what, const AxiomReport& rep) {
        r_.line(what + ": " + (rep.ok() ? "ok" : "FAIL " + rep.first_witness()));
        r_.verdict(what, rep.ok(), rep.first_witness());
        if (!rep.ok()) r_.flag(ExitCode::verdict_failure);
    }

    const Options& opts_;
    Workspace<S>& w_;
    Report& r_;
};

template <class S>
void dispatch(const Options& o, Workspace<S>& w, Report& r) {
    Runner<S> run(o, w, r);
    std::optional<Serializer<S>> emit;
    if (!o.emit.empty()) emit.emplace(field_name<S>());
    const std::string& c = o.command;
    if (c == "run") {
        if (w.manifest.tasks.empty()) r.line("no tasks");
        for (const auto& t : w.manifest.tasks) run.run_task(t);
    } else if (c == "check") {
        run.check(o.objects);
    } else if (c == "cohomology") {
        if (o.objects.size() == 2) {
            run.cohomology(o.objects[0], o.objects[1], o.lo, o.hi);
        } else if (!o.objects.empty()) {
            throw UsageError{"cohomology takes a source and a target module"};
        } else if (auto ts = run.tasks("cohomology"); !ts.empty()) {
            for (const auto* t : ts) run.run_task(*t);
        } else {
            for (const auto& m : run.modules_by_order()) run.cohomology(m, m, o.lo, o.hi);
        }
    } else if (c == "bar") {
        auto names = o.objects.empty() ? run.algebras_by_order() : o.objects;
        for (const auto& a : names) run.bar_command(a, o.truncate, emit ? &*emit : nullptr);
    } else if (c == "twist") {
        auto names = o.objects.empty() ? run.modules_by_order() : o.objects;
        for (const auto& m : names) run.twist(m, o.truncate, emit ? &*emit : nullptr);
    } else if (c == "we") {
        if (o.map) {
            if (!o.family) throw UsageError{"we --map needs --family"};
            run.we(*o.map, *o.family, o.cofamily);
        } else {
            auto ts = run.tasks("we");
            if (ts.empty()) throw UsageError{"no map selected: pass --map and --family or add a 'task we' line"};
            for (const auto* t : ts) run.run_task(*t);
        }
    } else if (c == "triality") {
        auto names = o.objects.empty() ? run.modules_by_order() : o.objects;
        for (const auto& m : names) run.triality(m, o.truncate);
        run.phi_psi_all();
    } else {
        throw UsageError{"unknown command '" + c + "'"};
    }
    if (emit) {
        std::ofstream out(o.emit);
        if (!out) throw UsageError{"cannot write " + o.emit};
        out << emit->str();
        r.line("wrote " + o.emit);
    }
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void pushout_command(const Options& o, std::uint64_t seed, Report& r) {
    using Q = Rational;
    Envelopes<Q> env;
    auto cases = pushout_corpus<Q>(seed, o.count, env);
    int idx = 0;
    for (const auto& c : cases) {
        auto p = pushout_product(c.f, c.u, c.v, c.g, c.w, c.x, env);
        const std::string name = "instance " + std::to_string(idx++) + (c.trivial ? " (trivial shape)" : "");
        AxiomReport mods;
        mods.merge(check_module(*p.z.module), "Z ");
        mods.merge(check_module(*p.vx.result.module), "V⊗X ");
        axiom_line(r, name + ": pushout and tensor modules", mods);
        const bool inj = rank<Q>(p.map.matrix) == p.z.module->dim();
        r.line(name + ": f□g " + (inj ? "injective" : "NOT injective") + ", dim Z = " + std::to_string(p.z.module->dim()) + ", dim V⊗X = " +
               std::to_string(p.vx.result.module->dim()));
        r.verdict(name + " injective", inj);
        if (!inj) r.flag(ExitCode::verdict_failure);
        if (c.trivial) {
            auto rep = verify_pushout_inverse(p, c.f, *c.f_inv, *c.h, c.w, c.x);
            r.line(name + ": ψ and homotopies " + (rep.ok() ? "verified" : "FAIL " + rep.first_witness()));
            r.verdict(name + " homotopy inverse", rep.ok(), rep.first_witness());
            if (!rep.ok()) r.flag(ExitCode::verdict_failure);
        }
    }
}

}  // namespace

int default_window() { return env_int("CDG_WINDOW", 12); }
int default_telescope_window() { return env_int("CDG_TELESCOPE_WINDOW", 8); }

Outcome parse_only(const std::string& path) {
    Outcome out;
    auto text = read_file(path);
    if (!text) {
        out.exit_code = ExitCode::parse_failure;
        out.text = "cannot read " + path + "\n";
        return out;
    }
    ParseResult p = parse_manifest(*text);
    if (!p.ok()) {
        out.exit_code = ExitCode::parse_failure;
        for (const auto& e : p.errors) out.text += path + ": " + e.str() + "\n";
    }
    return out;
}

Outcome run_command(const Options& opts) {
    Report r;
    std::uint64_t seed = opts.seed.value_or(kDefaultSeed);
    auto finish = [&]() {
        Outcome out;
        out.exit_code = r.code();
        out.text = opts.json ? r.json(opts.command, seed) : r.text();
        return out;
    };
    try {
        if (opts.command == "verify-paper") {
            SuiteConfig cfg;
            cfg.seed = seed;
            cfg.polynomial_window = default_window();
            cfg.telescope_window = default_telescope_window();
            auto results = run_suite(cfg);
            if (!opts.timings)
                for (auto& res : results) res.seconds = 0;
            r.block(format_suite(results, cfg, true));
            for (const auto& res : results) {
                r.verdict("criterion " + std::to_string(res.id), res.pass, res.window);
                if (!res.pass) r.flag(ExitCode::verdict_failure);
            }
            return finish();
        }
        if (opts.command == "pushout-product" && opts.manifest.empty()) {
            r.line("cdgtool pushout-product, field rational, seed " + std::to_string(seed));
            pushout_command(opts, seed, r);
            return finish();
        }
        if (opts.manifest.empty()) throw UsageError{opts.command + " needs a manifest"};
        auto text = read_file(opts.manifest);
        if (!text) throw UsageError{"cannot read " + opts.manifest};
        ParseResult p = parse_manifest(*text);
        if (!p.ok()) {
            for (const auto& e : p.errors) r.line(opts.manifest + ": " + e.str());
            r.flag(ExitCode::parse_failure);
            return finish();
        }
        const Manifest& m = *p.manifest;
        if (!opts.seed && m.seed) seed = *m.seed;
        if (opts.command == "pushout-product") {
            r.line("cdgtool pushout-product, field rational, seed " + std::to_string(seed));
            pushout_command(opts, seed, r);
            return finish();
        }
        auto go = [&](auto tag) {
            using S = decltype(tag);
            BuildResult<S> b = build_workspace<S>(m, default_window(), seed);
            if (!b.workspace) {
                for (const auto& e : b.errors) r.line(opts.manifest + ": " + e.str());
                r.flag(ExitCode::parse_failure);
                return;
            }
            r.line("cdgtool " + opts.command + ", field " + field_name<S>() + ", seed " + std::to_string(seed) + ", window " + std::to_string(b.workspace->window));
            dispatch<S>(opts, *b.workspace, r);
        };
        if (m.field == "prime") {
            ModP::Scope scope(m.prime);
            go(ModP());
        } else {
            go(Rational());
        }
    } catch (const UsageError& e) {
        r.line("error: " + e.message);
        r.flag(ExitCode::parse_failure);
    } catch (const OutOfWindow& e) {
        r.line("out of window: " + std::string(e.what()));
        r.flag(ExitCode::out_of_window);
    }
    return finish();
}

}  // namespace cdg::app
