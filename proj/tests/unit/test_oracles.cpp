#include <random>

#include "cdg/corpus.hpp"
#include "cdg/examples.hpp"
#include "doctest.h"
#include "support/dense.hpp"

using Q = cdg::Rational;

namespace {

std::vector<cdg::ModulePtr<Q>> exterior_family(const cdg::AlgebraPtr<Q>& a) {
    cdg::TwistedBounds<Q> tb;
    tb.max_rank = 1;
    tb.deg_lo = -1;
    tb.deg_hi = 1;
    tb.coefficients = {Q(0), Q(1), Q(-1)};
    return cdg::enumerate_twisted(a, tb);
}

}  // namespace

TEST_CASE("identities are weak equivalences and zero maps out of nonzero cohomology are not") {
    auto a = cdg::share(cdg::exterior<Q>("ε", 1));
    auto fam = exterior_family(a);
    auto pool = cdg::exterior_pool(a);
    for (const auto& m : pool) {
        auto id = cdg::identity_map(m);
        CHECK(cdg::we_projective(id, fam, -3, 3).weak_equivalence);
        CHECK(dense::projective_we(id, fam, -3, 3));
    }
    auto k = pool[6];
    auto z = cdg::zero_map(k, k, 0);
    auto rep = cdg::we_projective(z, fam, -3, 3);
    CHECK_FALSE(rep.weak_equivalence);
    CHECK(rep.witness.has_value());
    CHECK_FALSE(dense::projective_we(z, fam, -3, 3));
}

TEST_CASE("homotopy equivalence certificates match the dense boundary test") {
    auto a = cdg::share(cdg::exterior<Q>("ε", 1));
    auto pool = cdg::exterior_pool(a);
    for (const auto& f : cdg::homotopy_equivalence_corpus(pool, 6)) {
        auto psi = cdg::certify_homotopy_equivalence(f);
        REQUIRE(psi.has_value());
        CHECK(dense::contracts(cdg::cone(f).module, *psi));
    }
    // k -> 0 is not a homotopy equivalence: the cone is k[1] with zero differential
    auto k = pool[6];
    auto z = cdg::zero_map(k, k, 0);
    CHECK_FALSE(cdg::certify_homotopy_equivalence(z).has_value());
}

TEST_CASE("model agreement on a handful of maps") {
    auto a = cdg::share(cdg::exterior<Q>("ε", 1));
    auto pool = cdg::exterior_pool(a);
    auto fam = exterior_family(a);
    auto cogen = cdg::bar_cogenerators(cdg::bar(a, 3), 2, -2, 2);
    CHECK_FALSE(cogen.empty());
    for (const auto& c : cdg::exterior_maps<Q>(51, 8, pool)) {
        auto ag = cdg::we_agreement(c.map, fam, cogen, -3, 3);
        if (c.homotopy_equivalence) {
            CHECK(ag.projective.weak_equivalence);
            CHECK(ag.injective.weak_equivalence);
        }
        CHECK(ag.projective.weak_equivalence == dense::projective_we(c.map, fam, -3, 3));
    }
}

TEST_CASE("pushout products agree with the colimit oracle") {
    cdg::Envelopes<Q> env;
    for (const auto& c : cdg::pushout_corpus<Q>(52, 6, env)) {
        auto p = cdg::pushout_product(c.f, c.u, c.v, c.g, c.w, c.x, env);
        auto o = dense::pushout_oracle(c.f, c.u, c.v, c.g, c.w, c.x);
        CHECK(o.dim_z == p.z.module->dim());
        CHECK(o.dim_vx == p.vx.result.dim());
        CHECK(o.image_rank == cdg::rank<Q>(p.map.matrix));
        CHECK(dense::module_ok(*p.z.module));
        CHECK(cdg::is_closed(p.map));
        if (c.trivial) CHECK(cdg::verify_pushout_inverse(p, c.f, *c.f_inv, *c.h, c.w, c.x).ok());
    }
}

TEST_CASE("splitting certificates") {
    auto a = cdg::share(cdg::exterior<Q>("ε", 1));
    auto pool = cdg::exterior_pool(a);
    auto ys = cdg::bar_cogenerators(cdg::bar(a, 3), 2, -1, 1);
    std::mt19937_64 rng(53);
    for (const auto& f : cdg::homotopy_equivalence_corpus(pool, 3)) {
        auto m = cdg::cone(f).module;
        const auto& y = ys.front();
        auto delta = cdg::random_closed_map<Q>(rng, m, y, 1);
        auto s = cdg::splitting_certificate(y, m, delta ? *delta : cdg::zero_map(m, y, 1), -4, 4);
        CHECK(s.report.ok());
        CHECK(dense::module_ok(*s.extension));
    }
}

TEST_CASE("the non-cofibrancy example: Hom^0 vanishes and each summand sees only its own twist") {
    cdg::ModP::Scope scope(5);
    using F = cdg::ModP;
    std::vector<F> lambdas = {F(0), F(1), F(2)};
    auto e = cdg::notcofib_example<F>(lambdas, 4);
    CHECK(cdg::HomComplex<F>(e.BX, e.sum, 0, 0).dim(0) == 0);
    for (std::size_t l = 0; l < lambdas.size(); ++l)
        for (std::size_t m = 0; m < lambdas.size(); ++m) {
            auto rep = cdg::stable_we_projective(e.phi_summand[l], e.inclusion_summand[l], {e.family[m]}, 0, 3);
            CHECK(rep.weak_equivalence == (l == m));
        }
}
