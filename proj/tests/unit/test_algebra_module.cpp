#include <algorithm>
#include <random>

#include "cdg/corpus.hpp"
#include "cdg/examples.hpp"
#include "doctest.h"
#include "support/dense.hpp"

using Q = cdg::Rational;

namespace {

cdg::RandomAlgebra<Q> random_alg(std::mt19937_64& rng, bool curved, int max_dim = 5) {
    cdg::RandomSpec spec;
    spec.max_dim = max_dim;
    spec.curved = curved;
    return cdg::random_algebra<Q>(rng, spec);
}

}  // namespace

TEST_CASE("named algebras satisfy the axioms") {
    CHECK(dense::algebra_ok(cdg::ground_field<Q>()));
    CHECK(dense::algebra_ok(cdg::exterior<Q>("e", 1)));
    CHECK(dense::algebra_ok(cdg::exterior<Q>("e", 2)));
    auto kx = cdg::truncated_polynomial<Q>("x", 1, 8, Q(-1));
    CHECK(dense::algebra_ok(kx));
    CHECK(cdg::check_cdg_algebra(kx).ok());
}

TEST_CASE("random algebras pass, curved and flat, and corruptions are judged like the dense evaluator") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 30; ++i) {
        auto ra = random_alg(rng, i % 2 == 0);
        CHECK(dense::algebra_ok(*ra.algebra));
        CHECK(cdg::check_cdg_algebra(*ra.algebra).ok());
        if (i % 2 == 0) CHECK(ra.algebra->curved());
        auto bad = cdg::corrupt_algebra(rng, *ra.algebra);
        CHECK(cdg::check_cdg_algebra(bad).ok() == dense::algebra_ok(bad));
    }
}

TEST_CASE("tensor products and opposites of algebras") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 8; ++i) {
        auto a = random_alg(rng, i % 2 == 0, 3), b = random_alg(rng, i % 3 == 0, 3);
        auto t = cdg::tensor_algebra(*a.algebra, *b.algebra);
        CHECK(t.dim() == a.algebra->dim() * b.algebra->dim());
        CHECK(dense::algebra_ok(t));
        CHECK(dense::algebra_ok(cdg::opposite(*b.algebra)));
    }
}

TEST_CASE("twisted modules satisfy the module axioms and D^2 = 0 on Hom") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 15; ++i) {
        auto ra = random_alg(rng, i % 2 == 0, 4);
        auto m = cdg::share(cdg::random_twisted_module(rng, ra));
        auto n = cdg::share(cdg::random_twisted_module(rng, ra));
        CHECK(dense::module_ok(*m));
        CHECK(cdg::check_module(*m).ok());
        auto h = cdg::HomComplex<Q>::full(m, n);
        CHECK(cdg::is_zero<Q>(cdg::product(h.complex().d, h.complex().d)));
        dense::Hom<Q> dh(m, n);
        int lo = 1 << 20, hi = -lo;
        for (int i = 0; i < m->dim(); ++i)
            for (int j = 0; j < n->dim(); ++j) lo = std::min(lo, n->deg(j) - m->deg(i)), hi = std::max(hi, n->deg(j) - m->deg(i));
        for (const auto& c : h.cohomology(lo, hi)) CHECK(c.dim == dh.h(c.degree));
    }
}

TEST_CASE("a connection that does not square to h is rejected") {
    auto a = cdg::share(cdg::exterior<Q>("e", 1));
    // d(g) = g·1 has the wrong degree; d(g) = e g squares to zero but h = 0, so try a curved algebra
    CHECK_THROWS_AS(cdg::rank_one<Q>(a, 0, cdg::Vec<Q>{{0, Q(1)}}, "bad"), cdg::InvalidConnection);
    auto kx = cdg::share(cdg::truncated_polynomial<Q>("x", 1, 6, Q(-1)));
    // on k[x] with d(x) = -x^2 the connection +x gives (d + x)^2 = 2x^2 != 0
    CHECK_THROWS_AS(cdg::rank_one<Q>(kx, 0, cdg::Vec<Q>{{1, Q(1)}}, "bad"), cdg::InvalidConnection);
    CHECK_NOTHROW(cdg::rank_one<Q>(kx, 0, cdg::Vec<Q>{{1, Q(-1)}}, "A^x"));
}

TEST_CASE("cones of identities are contractible and cones of closed maps are modules") {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 10; ++i) {
        auto ra = random_alg(rng, i % 2 == 0, 4);
        auto m = cdg::share(cdg::random_twisted_module(rng, ra));
        auto c = cdg::cone(cdg::identity_map(m));
        CHECK(dense::module_ok(*c.module));
        auto h = cdg::null_homotopy(cdg::identity_map(c.module));
        REQUIRE(h.psi.has_value());
        CHECK(dense::contracts(c.module, *h.psi));
        auto n = cdg::share(cdg::random_twisted_module(rng, ra));
        if (auto f = cdg::random_closed_map<Q>(rng, m, n, 0)) CHECK(dense::module_ok(*cdg::cone(*f).module));
    }
}

TEST_CASE("null_homotopy finds a homotopy exactly when the class vanishes") {
    auto e = cdg::polynomial_example<Q>(10);
    cdg::HomComplex<Q> h(e.free, e.free, 0, 6);
    // the identity of A is closed and not null-homotopic; 1 is a nonzero class
    CHECK_FALSE(cdg::null_homotopy(cdg::identity_map(e.free)).psi.has_value());
    cdg::HomComplex<Q> hx(e.free, e.twisted, 0, 6);
    for (int p = 0; p <= 6; ++p)
        for (const auto& z : cdg::cohomology_data(hx.complex(), p).cycles) {
            auto f = hx.map_of(z);
            f.degree = p;
            auto psi = cdg::null_homotopy(f).psi;
            REQUIRE(psi.has_value());
            CHECK(cdg::equal<Q>(cdg::hom_differential(*psi).matrix, f.matrix));
        }
}

TEST_CASE("cylinder identities") {
    std::mt19937_64 rng(25);
    for (int i = 0; i < 6; ++i) {
        auto ra = random_alg(rng, i % 2 == 0, 3);
        auto x = cdg::share(cdg::random_twisted_module(rng, ra));
        auto cy = cdg::cylinder(x);
        CHECK(dense::module_ok(*cy.module));
        CHECK(cdg::check_cylinder(x).ok());
        CHECK(cy.module->dim() == 3 * x->dim());
    }
}

TEST_CASE("k[x]: truncation at an even top is an honest quotient") {
    auto e = cdg::polynomial_example<Q>(12);
    CHECK(dense::algebra_ok(*e.algebra));
    CHECK(dense::module_ok(*e.free));
    CHECK(dense::module_ok(*e.twisted));
    CHECK(dense::module_ok(*e.ground));
    dense::Hom<Q> h(e.free, e.free);
    CHECK(h.h(0) == 1);
    for (int p = 1; p <= 10; ++p) CHECK(h.h(p) == 0);
}
