#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "cdg/bar.hpp"
#include "cdg/random.hpp"
#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "manifest.hpp"
#include "workspace.hpp"

using cdg::app::ExitCode;
using cdg::app::ManifestError;
using cdg::app::parse_manifest;
using Q = cdg::Rational;

namespace {

const ManifestError& first_error(const cdg::app::ParseResult& r) {
    REQUIRE_FALSE(r.errors.empty());
    return r.errors.front();
}

std::string write_temp(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / ("cdgtest_" + name + ".cdg");
    std::ofstream(p) << text;
    return p.string();
}

cdg::app::Outcome run(const std::string& command, const std::string& text, const std::string& tag) {
    cdg::app::Options o;
    o.command = command;
    o.manifest = write_temp(tag, text);
    return cdg::app::run_command(o);
}

std::string source_dir() { return CDG_SOURCE_DIR; }

template <class S>
cdg::app::Workspace<S> build(const std::string& text) {
    auto pr = parse_manifest(text);
    INFO(text);
    REQUIRE(pr.ok());
    auto br = cdg::app::build_workspace<S>(*pr.manifest, 12, 1);
    if (!br.errors.empty()) INFO(br.errors.front().str());
    REQUIRE(br.errors.empty());
    return *br.workspace;
}

bool same_space(const cdg::GradedSpace& a, const cdg::GradedSpace& b) {
    if (a.dim() != b.dim()) return false;
    for (int i = 0; i < a.dim(); ++i)
        if (a.degree(i) != b.degree(i) || a.label(i) != b.label(i) || a.weight(i) != b.weight(i)) return false;
    return a.truncation.kind == b.truncation.kind && a.truncation.limit == b.truncation.limit;
}

}  // namespace

TEST_CASE("syntax errors carry line and column") {
    auto r = parse_manifest("field rational\nalgebra a\n  basis 0 : 1 x\n  mul x x = = x\nend\n");
    CHECK(first_error(r).kind == ManifestError::Kind::syntax);
    CHECK(first_error(r).pos.line == 4);
    CHECK(first_error(r).pos.col == 13);
    CHECK(first_error(r).str().rfind("SyntaxError(4,13)", 0) == 0);
}

TEST_CASE("unterminated blocks and unknown keywords are syntax errors") {
    CHECK(first_error(parse_manifest("algebra a\n  basis 0 : 1\n")).kind == ManifestError::Kind::syntax);
    CHECK(first_error(parse_manifest("frobnicate 3\n")).pos.line == 1);
    CHECK(first_error(parse_manifest("field prime x\n")).kind == ManifestError::Kind::syntax);
}

TEST_CASE("the empty manifest parses and runs") {
    auto r = parse_manifest("");
    CHECK(r.ok());
    auto out = run("run", "# nothing\n", "empty");
    CHECK(out.exit_code == ExitCode::ok);
}

TEST_CASE("columns count code points") {
    auto r = parse_manifest("algebra a\n  basis 0 : 1\n  basis 1 : ε\n  d ε = = 1\nend\n");
    CHECK(first_error(r).pos.line == 4);
    CHECK(first_error(r).pos.col == 9);
}

TEST_CASE("unknown names and dimension mismatches") {
    auto unknown = run("check", "module m = trivial over nowhere\n", "unknown");
    CHECK(unknown.exit_code == ExitCode::parse_failure);
    CHECK(unknown.text.find("UnknownName") != std::string::npos);

    const std::string bad_block =
        "algebra k = ground\n"
        "module E over k\n"
        "  basis 0 : a b\n"
        "  basis 1 : c\n"
        "  d 0 = [1 0 0; 0 1 0]\n"
        "end\n";
    auto mismatch = run("check", bad_block, "mismatch");
    CHECK(mismatch.exit_code == ExitCode::parse_failure);
    CHECK(mismatch.text.find("DimensionMismatch(5,") != std::string::npos);
    CHECK(mismatch.text.find("E degree 0") != std::string::npos);
}

TEST_CASE("explicit objects build and a violated axiom exits 3") {
    const std::string ok =
        "algebra B\n"
        "  basis 0 : 1\n"
        "  basis 1 : e\n"
        "end\n"
        "module M over B\n"
        "  basis 0 : m\n"
        "  basis 1 : n\n"
        "  act e m = n\n"
        "end\n"
        "task check\n";
    CHECK(run("run", ok, "explicit").exit_code == ExitCode::ok);
    const std::string broken =
        "algebra B\n"
        "  basis 0 : 1\n"
        "  basis 1 : e\n"
        "  mul e e = 0\n"
        "end\n"
        "module M over B\n"
        "  basis 0 : m\n"
        "  basis 1 : n\n"
        "  basis 2 : p\n"
        "  d m = n\n"
        "  d n = p\n"
        "end\n"
        "task check\n";
    auto out = run("run", broken, "broken");
    CHECK(out.exit_code == ExitCode::axiom_failure);
}

TEST_CASE("shipped manifests") {
    cdg::app::Options o;
    o.command = "check";
    o.manifest = source_dir() + "/manifests/kx.cdg";
    CHECK(cdg::app::run_command(o).exit_code == ExitCode::ok);

    o.command = "we";
    o.manifest = source_dir() + "/manifests/augmentation.cdg";
    o.model = "proj";
    auto we = cdg::app::run_command(o);
    CHECK(we.exit_code == ExitCode::verdict_failure);
    CHECK(we.text.find("witness A^x") != std::string::npos);
}

TEST_CASE("reports are deterministic and JSON is well formed") {
    cdg::app::Options o;
    o.command = "run";
    o.manifest = source_dir() + "/manifests/kx.cdg";
    auto a = cdg::app::run_command(o), b = cdg::app::run_command(o);
    CHECK(a.text == b.text);
    CHECK(a.text.find("seed 20240611") != std::string::npos);
    o.json = true;
    auto j = cdg::app::run_command(o);
    CHECK(nlohmann::json::accept(j.text));
}

TEST_CASE("the window comes from the environment") {
    ::setenv("CDG_WINDOW", "7", 1);
    CHECK(cdg::app::default_window() == 7);
    ::unsetenv("CDG_WINDOW");
    CHECK(cdg::app::default_window() == 12);
}

TEST_CASE("random objects survive a serialization round trip") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 12; ++i) {
        cdg::RandomSpec spec;
        spec.max_dim = 4;
        spec.curved = i % 2 == 0;
        auto ra = cdg::random_algebra<Q>(rng, spec);
        auto m = cdg::share(cdg::random_twisted_module(rng, ra));
        cdg::app::Serializer<Q> s("rational");
        const std::string an = s.add(ra.algebra);
        const std::string mn = s.add(m);
        auto ws = build<Q>(s.str());
        const auto& a2 = *ws.algebras.at(an);
        CHECK(same_space(a2.space, ra.algebra->space));
        CHECK(cdg::equal<Q>(a2.mult, ra.algebra->mult));
        CHECK(cdg::equal<Q>(a2.d, ra.algebra->d));
        CHECK(a2.h == ra.algebra->h);
        const auto& m2 = *ws.modules.at(mn);
        CHECK(same_space(m2.space, m->space));
        CHECK(cdg::equal<Q>(m2.action, m->action));
        CHECK(cdg::equal<Q>(m2.d, m->d));
    }
}

TEST_CASE("bar coalgebras and their comodules round trip over F_5") {
    cdg::ModP::Scope scope(5);
    using F = cdg::ModP;
    auto a = cdg::share(cdg::exterior<F>("e", 2));
    auto b = cdg::bar(a, 3);
    auto m = cdg::share(cdg::rank_one<F>(a, 0, {}, "A"));
    auto comod = cdg::share(cdg::twisted_tensor_comod(b, m));
    auto contra = cdg::share(cdg::hom_tau_contra(b, m));
    cdg::app::Serializer<F> s("prime 5");
    const std::string cn = s.add(b.coalgebra);
    const std::string mn = s.add(comod);
    const std::string pn = s.add(contra);
    auto ws = build<F>(s.str());
    const auto& c2 = *ws.coalgebras.at(cn);
    CHECK(same_space(c2.space, b.coalgebra->space));
    CHECK(cdg::equal<F>(c2.comult, b.coalgebra->comult));
    CHECK(cdg::equal<F>(c2.d, b.coalgebra->d));
    CHECK(c2.counit == b.coalgebra->counit);
    CHECK(cdg::equal<F>(ws.comodules.at(mn)->coaction, comod->coaction));
    CHECK(cdg::equal<F>(ws.contramodules.at(pn)->contraaction, contra->contraaction));
}
