#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using cdg::app::Options;

namespace {

CLI::App* add_command(CLI::App& app, Options& o, const std::string& name, const std::string& help, bool manifest_required) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* m = sub->add_option("manifest", o.manifest, "manifest file");
    if (manifest_required) m->required();
    sub->add_option("--seed", o.seed, "seed for randomized corpora (overrides the manifest)");
    sub->add_flag("--json", o.json, "machine-readable report");
    sub->callback([&o, name] { o.command = name; });
    return sub;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks for curved dg-algebras, modules, coalgebras and their model structures"};
    app.require_subcommand(1);
    Options o;
    std::string report_path;
    app.add_option("--report", report_path, "also write the report to this file");

    add_command(app, o, "run", "execute the task list of a manifest", true);
    auto* check = add_command(app, o, "check", "axiom suites for every declared object", true);
    check->add_option("--object", o.objects, "restrict to these objects");

    auto* coh = add_command(app, o, "cohomology", "dimensions of H(Hom(M, N)) per degree", true);
    coh->add_option("--pair", o.objects, "source and target module")->expected(2);
    coh->add_option("--lo", o.lo, "lowest degree");
    coh->add_option("--hi", o.hi, "highest degree");

    auto* bar = add_command(app, o, "bar", "truncated bar coalgebras of the declared algebras", true);
    bar->add_option("--truncate", o.truncate, "word length N")->check(CLI::NonNegativeNumber);
    bar->add_option("--object", o.objects, "restrict to these algebras");
    bar->add_option("--emit", o.emit, "write the coalgebras as a manifest");

    auto* twist = add_command(app, o, "twist", "the four twisted functors applied to each module", true);
    twist->add_option("--truncate", o.truncate, "word length N")->check(CLI::NonNegativeNumber);
    twist->add_option("--object", o.objects, "restrict to these modules");
    twist->add_option("--emit", o.emit, "write the constructed objects as a manifest");

    auto* we = add_command(app, o, "we", "projective and injective weak-equivalence tests", true);
    we->add_option("--model", o.model, "proj, inj or both")->check(CLI::IsMember({"proj", "inj", "both"}));
    we->add_option("--map", o.map, "map to test (default: the manifest's we tasks)");
    we->add_option("--family", o.family, "twisted family for the projective test");
    we->add_option("--cofamily", o.cofamily, "cogenerator family for the injective test");
    we->add_option("--lo", o.lo, "lowest Hom degree");
    we->add_option("--hi", o.hi, "highest Hom degree");

    auto* po = add_command(app, o, "pushout-product", "pushout products on a seeded corpus of bimodule pairs", false);
    po->add_option("--count", o.count, "number of instances")->check(CLI::PositiveNumber);

    auto* tri = add_command(app, o, "triality", "comparison isomorphisms and Φ/Ψ identities", true);
    tri->add_option("--truncate", o.truncate, "word length N")->check(CLI::NonNegativeNumber);
    tri->add_option("--object", o.objects, "restrict to these modules");

    auto* vp = add_command(app, o, "verify-paper", "the full acceptance suite", false);
    bool no_timings = false;
    vp->add_flag("--no-timings", no_timings, "omit runtimes so the table is byte-stable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cdg::app::ExitCode::parse_failure;
    }
    o.timings = !no_timings;

    cdg::app::Outcome out = cdg::app::run_command(o);
    std::cout << out.text;
    if (!report_path.empty()) {
        std::ofstream f(report_path);
        if (!f) {
            std::cerr << "cannot write " << report_path << "\n";
            return cdg::app::ExitCode::parse_failure;
        }
        f << out.text;
    }
    return out.exit_code;
}
