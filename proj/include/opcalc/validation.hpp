#ifndef OPCALC_VALIDATION_HPP
#define OPCALC_VALIDATION_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace opcalc {

/// One failed relation instance: which law, at which indices.
struct Violation {
    std::string relation;
    std::vector<long> indices;
};

/// Outcome of an exhaustive axiom sweep.  Failures are data, not errors.
struct ValidationReport {
    std::size_t checks = 0;
    std::vector<Violation> violations;

    bool pass() const { return violations.empty(); }

    void count() { ++checks; }

    void fail(std::string relation, std::initializer_list<long> idx) {
        violations.push_back(Violation{std::move(relation), std::vector<long>(idx)});
    }

    void merge(const ValidationReport& o) {
        checks += o.checks;
        violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    }
};

}  // namespace opcalc

#endif
