#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace atomlab {

/// One violated clause with its witness. A verdict is never just a boolean:
/// an empty report means "no violation found", anything else carries the
/// first concrete counterexample per clause.
struct Violation {
    std::string clause;
    std::string witness;
};

/// Thrown when a search exhausts its budget; callers surface it as a
/// first-class inconclusive outcome, never as a guessed verdict.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> notes;  // mode disclosures, budgets, skipped checks

    bool ok() const { return violations.empty(); }

    void fail(std::string clause, std::string witness) {
        violations.push_back({std::move(clause), std::move(witness)});
    }
    void note(std::string n) { notes.push_back(std::move(n)); }

    std::string to_string() const {
        std::string s;
        for (const auto& v : violations)
            s += "violation: " + v.clause + " witness: " + v.witness + "\n";
        for (const auto& n : notes) s += "note: " + n + "\n";
        if (violations.empty()) s += "ok\n";
        return s;
    }
};

}  // namespace atomlab
