#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace cdg {

struct AxiomResult {
    std::string axiom;
    bool passed = true;
    std::string witness;  // first failing basis tuple, empty on success
    std::string scope;    // "exact" or a window description
};

/// Outcome of an axiom battery.  Failures carry the first witness found.
struct AxiomReport {
    std::string subject;
    std::vector<AxiomResult> results;

    void pass(const std::string& axiom, const std::string& scope = "exact") {
        results.push_back({axiom, true, "", scope});
    }
    void fail(const std::string& axiom, const std::string& witness, const std::string& scope = "exact") {
        results.push_back({axiom, false, witness, scope});
    }
    void record(const std::string& axiom, const std::string& witness, const std::string& scope = "exact") {
        if (witness.empty()) pass(axiom, scope);
        else fail(axiom, witness, scope);
    }
    void merge(const AxiomReport& o, const std::string& prefix = "") {
        for (const auto& r : o.results) results.push_back({prefix + r.axiom, r.passed, r.witness, r.scope});
    }

    bool ok() const {
        for (const auto& r : results)
            if (!r.passed) return false;
        return true;
    }
    bool passed(const std::string& axiom) const {
        for (const auto& r : results)
            if (r.axiom == axiom) return r.passed;
        return false;
    }
    const AxiomResult* first_failure() const {
        for (const auto& r : results)
            if (!r.passed) return &r;
        return nullptr;
    }

    /// "axiom: witness" of the first failure, empty when all passed.
    std::string first_witness() const {
        const AxiomResult* f = first_failure();
        return f ? f->axiom + ": " + f->witness : std::string();
    }

    std::string str() const {
        std::ostringstream os;
        os << "[" << subject << "]\n";
        for (const auto& r : results) {
            os << "  " << (r.passed ? "pass" : "FAIL") << "  " << r.axiom << "  (" << r.scope << ")";
            if (!r.passed) os << "  witness: " << r.witness;
            os << "\n";
        }
        return os.str();
    }
};

}  // namespace cdg
