// Acceptance suite: every criterion is run through the library and then
// cross-checked against the dense reference computations in support/.
// One PASS/FAIL line per criterion; exit status 1 if any criterion fails.
//
//   acceptance            all criteria
//   acceptance 3 7        only criteria 3 and 7
//   acceptance -v ...     also print the library details

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "cdg/corpus.hpp"
#include "cdg/examples.hpp"
#include "paper_suite.hpp"
#include "support/dense.hpp"

using cdg::ModP;
using Q = cdg::Rational;

namespace {

// Wall-clock limits in seconds for library plus oracle; 0 = none.
constexpr double kLimit[] = {60, 10, 60, 0, 0, 0, 0, 0, 0, 0};
constexpr std::uint64_t kSeed = 20240611;
constexpr int kPolynomialWindow = 12;
constexpr int kTelescopeWindow = 8;

struct OracleResult {
    bool ok = true;
    std::vector<std::string> notes;
    void require(bool cond, const std::string& what) {
        if (!cond) ok = false;
        notes.push_back(std::string(cond ? "ok    " : "FAIL  ") + what);
    }
};

std::string frac(int a, int b) { return std::to_string(a) + "/" + std::to_string(b); }

template <class S>
std::pair<int, int> degree_span(const cdg::ModulePtr<S>& m, const cdg::ModulePtr<S>& n) {
    int mlo = 1 << 20, mhi = -(1 << 20), nlo = mlo, nhi = mhi;
    for (int j = 0; j < m->dim(); ++j) mlo = std::min(mlo, m->deg(j)), mhi = std::max(mhi, m->deg(j));
    for (int j = 0; j < n->dim(); ++j) nlo = std::min(nlo, n->deg(j)), nhi = std::max(nhi, n->deg(j));
    return {nlo - mhi, nhi - mlo};
}

OracleResult oracle_battery() {
    OracleResult r;
    auto cases = cdg::axiom_battery<Q>(kSeed, 200);
    int alg_agree = 0, mod_agree = 0, mods = 0, pairs = 0, d2 = 0, hdims = 0, hdims_total = 0, curved = 0, corrupted_invalid = 0, corrupted = 0;
    for (const auto& c : cases) {
        const bool dense_ok = dense::algebra_ok(*c.algebra);
        if (dense_ok == cdg::check_cdg_algebra(*c.algebra).ok()) ++alg_agree;
        if (c.corrupted) {
            ++corrupted;
            if (!dense_ok) ++corrupted_invalid;
        }
        if (!dense_ok) continue;
        if (c.algebra->curved()) ++curved;
        std::vector<cdg::ModulePtr<Q>> good;
        for (const auto& m : c.modules) {
            ++mods;
            const bool ok = dense::module_ok(*m);
            if (ok == cdg::check_module(*m).ok()) ++mod_agree;
            if (ok) good.push_back(m);
        }
        for (const auto& m : good)
            for (const auto& n : good) {
                ++pairs;
                dense::Hom<Q> h(m, n);
                auto [lo, hi] = degree_span(m, n);
                bool sq = true;
                for (int p = lo; p <= hi; ++p) sq = sq && h.d_squared_zero(p);
                if (sq) ++d2;
                auto lib = cdg::HomComplex<Q>::full(m, n).cohomology(lo, hi);
                for (const auto& cd : lib) {
                    ++hdims_total;
                    if (cd.dim == h.h(cd.degree)) ++hdims;
                }
            }
    }
    r.require(alg_agree == static_cast<int>(cases.size()), "algebra verdicts agree with the dense evaluator: " + frac(alg_agree, static_cast<int>(cases.size())));
    r.notes.push_back("      corrupted algebras that really violate an axiom: " + frac(corrupted_invalid, corrupted) + "; valid algebras that are curved: " + std::to_string(curved));
    r.require(mod_agree == mods, "module verdicts agree: " + frac(mod_agree, mods));
    r.require(d2 == pairs, "dense D^2 = 0 on valid pairs: " + frac(d2, pairs));
    r.require(hdims == hdims_total, "cohomology dimensions agree: " + frac(hdims, hdims_total));
    return r;
}

OracleResult oracle_polynomial() {
    OracleResult r;
    const int hi = kPolynomialWindow - 2;
    auto e = cdg::polynomial_example<Q>(kPolynomialWindow);
    // d(x^n) = -x^{n+1} for odd n and 0 for even n; on A^x the parity flips.
    auto rank_d = [](int n, bool twisted) { return (n % 2 == 1) != twisted ? 1 : 0; };
    dense::Hom<Q> ha(e.free, e.free), hx(e.free, e.twisted);
    cdg::HomComplex<Q> la(e.free, e.free, 0, hi), lx(e.free, e.twisted, 0, hi);
    auto lib_a = la.cohomology(0, hi), lib_x = lx.cohomology(0, hi);
    bool ok_a = true, ok_x = true;
    for (int p = 0; p <= hi; ++p) {
        const int rule_a = 1 - rank_d(p, false) - (p > 0 ? rank_d(p - 1, false) : 0);
        const int rule_x = 1 - rank_d(p, true) - (p > 0 ? rank_d(p - 1, true) : 0);
        ok_a = ok_a && rule_a == (p == 0 ? 1 : 0) && ha.h(p) == rule_a && lib_a[static_cast<std::size_t>(p)].dim == rule_a;
        ok_x = ok_x && rule_x == 0 && hx.h(p) == 0 && lib_x[static_cast<std::size_t>(p)].dim == 0;
    }
    r.require(ok_a, "H(A) = k, 0, ..., 0 by the rank rule, the dense Hom and the library");
    r.require(ok_x, "H(Hom(A, A^x)) = 0 in degrees 0.." + std::to_string(hi) + ", so closed maps are null-homotopic");
    r.require(dense::projective_we(e.augmentation, {e.free}, 0, hi), "dense: augmentation is a quasi-isomorphism");
    r.require(!dense::projective_we(e.augmentation, {e.twisted}, 0, hi), "dense: A^x detects that the augmentation is not a weak equivalence");
    return r;
}

OracleResult oracle_notcofib() {
    OracleResult r;
    ModP::Scope scope(5);
    std::vector<ModP> lambdas;
    for (int l = 0; l < 5; ++l) lambdas.emplace_back(l);
    auto e = cdg::notcofib_example<ModP>(lambdas, kTelescopeWindow);
    const int na = e.A->dim();
    dense::Col<ModP> d0 = dense::col(dense::of(e.X->d), 0);
    dense::Col<ModP> want(d0.size(), ModP(0));
    want[static_cast<std::size_t>(na + 1)] = ModP(1);
    r.require(d0 == want, "d_X(1⊗1) = ε⊗x in the dense structure matrix");
    r.require(dense::module_ok(*e.X) && dense::module_ok(*e.BX), "X and _BX satisfy the module axioms");
    dense::Hom<ModP> h0(e.BX, e.sum);
    r.require(h0.basis(0).empty(), "dense Hom^0(_BX, T) = 0");
    // stable test: classes of Hom(B_μ, T') that survive into Hom(B_μ, T)
    auto stable = [&](const cdg::ModMap<ModP>& phi, const cdg::ModMap<ModP>& inc, const cdg::ModulePtr<ModP>& p) {
        dense::Hom<ModP> hs(p, inc.source), hl(p, inc.target), hn(p, phi.target);
        const dense::Mat<ModP> gi = dense::of(inc.matrix), gc = dense::mul(dense::of(phi.matrix), gi);
        for (int q = 0; q <= 3; ++q) {
            const int before = dense::induced_rank(hs, hl, q, [&](const dense::Col<ModP>& z) { return dense::post(gi, z, inc.source->dim(), p->dim()); });
            const int rk = dense::induced_rank(hs, hn, q, [&](const dense::Col<ModP>& z) { return dense::post(gc, z, inc.source->dim(), p->dim()); });
            if (rk != before || rk != hn.h(q)) return false;
        }
        return true;
    };
    std::string own, all;
    int summands_we = 0;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        bool every = true;
        std::string detected;
        for (std::size_t m = 0; m < e.family.size(); ++m) {
            const bool iso = stable(e.phi_summand[l], e.inclusion_summand[l], e.family[m]);
            every = every && iso;
            if (iso) detected += (detected.empty() ? "" : ",") + lambdas[m].str();
        }
        if (every) ++summands_we;
        own += " λ=" + lambdas[l].str() + ":{" + detected + "}";
    }
    bool whole = true;
    for (const auto& p : e.family) whole = whole && stable(e.phi, e.inclusion, p);
    r.notes.push_back("      dense: family members against which each summand is iso:" + own);
    r.require(whole, "dense: φ on the whole sum is a weak equivalence against the family");
    r.require(summands_we == static_cast<int>(lambdas.size()), "dense: φ on every summand is a weak equivalence (" + frac(summands_we, static_cast<int>(lambdas.size())) + ")");
    return r;
}

OracleResult oracle_bar() {
    OracleResult r;
    std::mt19937_64 rng(kSeed + 4);
    int coalg = 0, coalg_total = 0, four = 0, four_total = 0;
    for (const auto& ra : cdg::bar_algebras<Q>(kSeed + 4)) {
        auto b = cdg::bar(ra.algebra, 3);
        ++coalg_total;
        if (dense::coalgebra_ok(*b.coalgebra)) ++coalg;
        for (const auto& m : cdg::bar_modules(rng, ra)) {
            ++four_total;
            auto comod = cdg::share(cdg::twisted_tensor_comod(b, m));
            auto contra = cdg::share(cdg::hom_tau_contra(b, m));
            if (dense::comodule_ok(*comod) && dense::contramodule_ok(*contra) && dense::module_ok(cdg::twisted_tensor_mod(b, comod)) &&
                dense::module_ok(cdg::hom_tau_mod(b, contra)))
                ++four;
        }
    }
    r.require(coalg == coalg_total, "dense coalgebra axioms on the bar constructions: " + frac(coalg, coalg_total));
    r.require(four == four_total, "dense axioms of the four twisted objects: " + frac(four, four_total));
    return r;
}

OracleResult oracle_auxeq() {
    OracleResult r;
    std::mt19937_64 rng(kSeed + 5);
    int inv = 0, total = 0, coact = 0;
    for (const auto& ra : cdg::bar_algebras<Q>(kSeed + 4)) {
        auto mods = cdg::bar_modules(rng, ra);
        for (int n : {2, 3}) {
            auto b = cdg::bar(ra.algebra, n);
            const int nc = b.dim();
            for (const auto& m : mods) {
                ++total;
                auto a = cdg::auxeq_iso(b, m);
                const dense::Mat<Q> i1 = dense::of(a.iso1), i2 = dense::of(a.iso2);
                const bool square = a.iso1.rows() == a.iso1.cols() && a.iso2.rows() == a.iso2.cols();
                if (square && dense::rank(i1) == dense::rows(i1) && dense::rank(i2) == dense::rows(i2)) ++inv;
                // ρ(iso1 x) = (1 ⊗ iso1) ρ(x)
                const dense::Mat<Q> rs = dense::of(a.phi_hom.comod.coaction), rt = dense::of(a.tensor->coaction);
                const int ks = a.phi_hom.comod.dim(), kt = a.tensor->dim();
                dense::Mat<Q> lhs = dense::mul(rt, i1);
                dense::Mat<Q> lift = dense::zeros<Q>(nc * kt, nc * ks);
                for (int c = 0; c < nc; ++c)
                    for (int i = 0; i < kt; ++i)
                        for (int j = 0; j < ks; ++j) lift[c * kt + i][c * ks + j] = i1[i][j];
                if (dense::same(lhs, dense::mul(lift, rs))) ++coact;
            }
        }
    }
    r.require(inv == total, "dense: both comparison maps are square and invertible: " + frac(inv, total));
    r.require(coact == total, "dense: the first comparison map is a comodule map: " + frac(coact, total));
    return r;
}

OracleResult oracle_phi_psi() {
    OracleResult r;
    auto cases = cdg::coalgebra_corpus<Q>(kSeed + 6, 20);
    int good = 0, small = 0;
    for (const auto& c : cases) {
        if (c.coalgebra->dim() <= 4) ++small;
        if (dense::coalgebra_ok(*c.coalgebra) && dense::contramodule_ok(*c.contra) && dense::comodule_ok(*c.comod)) ++good;
    }
    const int n = static_cast<int>(cases.size());
    r.require(n == 20 && small == n, "20 coalgebras of dimension <= 4: " + frac(small, n));
    r.require(good == n, "dense axioms of each coalgebra, contramodule and Φ-comodule: " + frac(good, n));
    return r;
}

OracleResult oracle_cylinder() {
    OracleResult r;
    auto mods = cdg::module_corpus<Q>(kSeed + 7, 10);
    int fold = 0, inj = 0, he = 0;
    for (const auto& x : mods) {
        auto cy = cdg::cylinder(x);
        const dense::Mat<Q> j = dense::of(cy.j.matrix), p = dense::of(cy.p.matrix);
        if (dense::same(dense::mul(p, j), dense::of(cy.fold.matrix))) ++fold;
        if (dense::rank(j) == cy.sum->dim()) ++inj;
        // p is a homotopy equivalence with inverse s: p s = id and id - s p exact in End(Cyl)
        const dense::Mat<Q> s = dense::of(cy.section.matrix);
        dense::Hom<Q> end(cy.module, cy.module);
        const dense::Mat<Q> g = dense::add(dense::eye<Q>(cy.module->dim()), dense::mul(s, p), Q(-1));
        if (dense::same(dense::mul(p, s), dense::eye<Q>(x->dim())) && end.exact(dense::flatten(g), 0)) ++he;
    }
    const int n = static_cast<int>(mods.size());
    r.require(fold == n, "dense p∘j = fold: " + frac(fold, n));
    r.require(inj == n, "dense j injective: " + frac(inj, n));
    r.require(he == n, "dense: id - s∘p is a boundary in End(Cyl): " + frac(he, n));
    return r;
}

OracleResult oracle_pushout() {
    OracleResult r;
    cdg::Envelopes<Q> env;
    auto cases = cdg::pushout_corpus<Q>(kSeed + 8, 20, env);
    int dims = 0, injective = 0, generating = 0, trivial = 0, homotopies = 0;
    for (const auto& c : cases) {
        auto p = cdg::pushout_product(c.f, c.u, c.v, c.g, c.w, c.x, env);
        auto o = dense::pushout_oracle(c.f, c.u, c.v, c.g, c.w, c.x);
        if (o.dim_z == p.z.module->dim() && o.dim_vx == p.vx.result.dim() && o.image_rank == cdg::rank<Q>(p.map.matrix)) ++dims;
        if (!c.trivial) {
            ++generating;
            if (o.image_rank == o.dim_z) ++injective;
        } else {
            ++trivial;
            const dense::Mat<Q> f = dense::of(c.f.matrix), fi = dense::of(c.f_inv->matrix), h = dense::of(c.h->matrix);
            const dense::Mat<Q> dv = dense::of(c.v.module->d);
            const int kv = c.v.dim();
            const bool retract = dense::same(dense::mul(fi, f), dense::eye<Q>(c.u.dim()));
            const bool homotopy = dense::same(dense::add(dense::mul(dv, h), dense::mul(h, dv)), dense::add(dense::eye<Q>(kv), dense::mul(f, fi), Q(-1)));
            if (retract && homotopy && dense::is_zero(dense::mul(h, f))) ++homotopies;
        }
    }
    const int n = static_cast<int>(cases.size());
    r.require(dims == n, "colimit oracle agrees on dim Z, dim V⊗X and rank of f□g: " + frac(dims, n));
    r.require(injective == generating, "generating shapes: f□g injective by the oracle: " + frac(injective, generating));
    r.require(homotopies == trivial, "trivial shapes: f'f = id, dh + hd = id - ff', hf = 0: " + frac(homotopies, trivial));
    return r;
}

OracleResult oracle_agreement() {
    OracleResult r;
    auto a = cdg::share(cdg::exterior<Q>("ε", 1));
    auto pool = cdg::exterior_pool(a);
    auto maps = cdg::exterior_maps<Q>(kSeed + 9, 50, pool);
    cdg::TwistedBounds<Q> tb;
    tb.max_rank = 1;
    tb.deg_lo = -1;
    tb.deg_hi = 1;
    tb.coefficients = {Q(0), Q(1), Q(-1)};
    auto family = cdg::enumerate_twisted(a, tb);
    const int lo = -4, hi = 4;
    int verdicts = 0, he_flags = 0, he = 0, accepted = 0;
    for (const auto& c : maps) {
        const bool dense_proj = dense::projective_we(c.map, family, lo, hi);
        if (dense_proj == cdg::we_projective(c.map, family, lo, hi).weak_equivalence) ++verdicts;
        // homotopy equivalence iff the identity of the cone is a boundary
        auto cone = cdg::cone(c.map).module;
        dense::Hom<Q> end(cone, cone);
        const bool dense_he = end.exact(dense::flatten(dense::eye<Q>(cone->dim())), 0);
        if (dense_he == c.homotopy_equivalence) ++he_flags;
        if (dense_he) {
            ++he;
            if (dense_proj) ++accepted;
        }
    }
    const int n = static_cast<int>(maps.size());
    r.require(verdicts == n, "dense projective verdicts agree with the library: " + frac(verdicts, n));
    r.require(he_flags == n, "dense homotopy-equivalence certificates agree: " + frac(he_flags, n));
    r.require(accepted == he, "dense: every homotopy equivalence is accepted: " + frac(accepted, he));
    return r;
}

OracleResult oracle_splitting() {
    OracleResult r;
    const int lo = -4, hi = 4;
    auto a = cdg::share(cdg::exterior<Q>("ε", 1));
    auto pool = cdg::exterior_pool(a);
    auto b = cdg::bar(a, 3);
    auto ys = cdg::bar_cogenerators(b, 2, -1, 1);
    std::mt19937_64 rng(kSeed + 10);
    auto hes = cdg::homotopy_equivalence_corpus(pool, 10);
    int acyclic = 0, identity = 0, closed = 0;
    for (std::size_t i = 0; i < hes.size(); ++i) {
        auto m = cdg::cone(hes[i]).module;
        const auto& y = ys[i % ys.size()];
        auto delta = cdg::random_closed_map<Q>(rng, m, y, 1);
        auto s = cdg::splitting_certificate(y, m, delta ? *delta : cdg::zero_map(m, y, 1), lo, hi);
        dense::Hom<Q> my(m, y);
        bool zero = true;
        for (int p = lo; p <= hi; ++p) zero = zero && my.h(p) == 0;
        if (zero) ++acyclic;
        if (!s.phi || !s.psi_prime) continue;
        const dense::Mat<Q> dx = dense::of(s.extension->d), dy = dense::of(y->d);
        const dense::Mat<Q> phi = dense::of(s.phi->matrix), pp = dense::of(s.psi_prime->matrix), f = dense::of(s.f.matrix);
        if (dense::is_zero(dense::add(dense::mul(dy, phi), dense::mul(phi, dx), Q(-1)))) ++closed;
        // D(ψ') = d ψ' + ψ' d for a degree -1 map
        const dense::Mat<Q> dpsi = dense::add(dense::mul(dy, pp), dense::mul(pp, dx));
        if (dense::same(dense::mul(dense::add(phi, dpsi, Q(-1)), f), dense::eye<Q>(y->dim()))) ++identity;
    }
    const int n = static_cast<int>(hes.size());
    r.require(n == 10, "10 cones of homotopy equivalences");
    r.require(acyclic == n, "dense H(Hom(M, Y)) = 0 in degrees [" + std::to_string(lo) + "," + std::to_string(hi) + "]: " + frac(acyclic, n));
    r.require(closed == n, "dense: φ closed: " + frac(closed, n));
    r.require(identity == n, "dense: (φ - D(ψ'))∘f = id exactly: " + frac(identity, n));
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    bool verbose = false;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "-v") verbose = true;
        else only.push_back(std::atoi(a.c_str()));
    }
    const std::vector<std::function<OracleResult()>> oracles = {
        oracle_battery, oracle_polynomial, oracle_notcofib, oracle_bar,       oracle_auxeq,
        oracle_phi_psi, oracle_cylinder,   oracle_pushout,  oracle_agreement, oracle_splitting,
    };
    cdg::app::SuiteConfig cfg;
    cfg.seed = kSeed;
    cfg.polynomial_window = kPolynomialWindow;
    cfg.telescope_window = kTelescopeWindow;
    std::cout << "seed " << kSeed << ", k[x] window " << kPolynomialWindow << ", telescope window " << kTelescopeWindow << "\n";
    bool all = true;
    for (int id = 1; id <= 10; ++id) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        auto lib = cdg::app::run_criterion(id, cfg);
        const auto t0 = std::chrono::steady_clock::now();
        OracleResult o = oracles[static_cast<std::size_t>(id - 1)]();
        const double oracle_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double total = lib.seconds + oracle_s;
        const double limit = kLimit[id - 1];
        const bool in_time = limit == 0 || total <= limit;
        const bool pass = lib.pass && o.ok && in_time;
        all = all && pass;
        std::cout << "criterion " << std::setw(2) << id << "  " << (pass ? "PASS" : "FAIL") << "  " << lib.title << "  [" << lib.window << "]  " << std::fixed
                  << std::setprecision(2) << total << "s";
        if (limit > 0) std::cout << " (limit " << std::setprecision(0) << limit << "s)";
        std::cout << "\n";
        if (verbose || !pass) {
            std::cout << "    library: " << (lib.pass ? "pass" : "FAIL") << "\n";
            for (const auto& d : lib.details) std::cout << "      " << d << "\n";
            std::cout << "    oracle: " << (o.ok ? "pass" : "FAIL") << "\n";
            for (const auto& n : o.notes) std::cout << "      " << n << "\n";
            if (!in_time) std::cout << "    over the time limit\n";
        }
    }
    return all ? 0 : 1;
}
