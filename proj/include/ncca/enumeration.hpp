#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncca/conservation.hpp"

namespace ncca {

struct EnumerationRequest {
    int dimension = 2;
    StateSet states{{0, 1}};
    bool rotation_symmetric = false;  // d = 2 only; pushed into the search
    bool passive = false;             // f(M_{0:q}) = q; pushed into the search
    bool axis_extension_only = false; // applied to the finished catalog
};

struct RuleLabel {
    bool identity = false;
    std::vector<Direction> shifts;   // f(N) = N(v)
    std::vector<Direction> traffic;  // binary jam rule fed from v, see classify()
    std::vector<int> axis_extensions;
    bool rotation_symmetric = false;
    bool passive = false;

    // "identity", "shift:+1", "traffic:-2", "axis_extension:1", "rotation_symmetric", "passive".
    std::vector<std::string> tags() const;
    bool is_axis_extension() const { return !axis_extensions.empty(); }
};

struct CatalogEntry {
    DenseRule rule;
    RuleLabel label;
};

class NotConservingError : public std::runtime_error {
public:
    explicit NotConservingError(Verdict verdict)
        : std::runtime_error("rule is not number-conserving"), verdict_(std::move(verdict)) {}
    const Verdict& verdict() const { return verdict_; }

private:
    Verdict verdict_;
};

// (2d+1)(|Q|-1) monomers plus d^2(|Q|-1)^2 selection dimers.
std::uint64_t free_parameter_count(int dimension, const StateSet& states);

struct SearchEstimate {
    std::uint64_t table_size = 0;           // |Q|^{2d+1}, 0 when beyond the dense bound
    std::uint64_t free_parameters = 0;
    std::uint64_t monomer_assignments = 0;  // product of per-state composition counts
    std::uint64_t dimer_parameters = 0;
    double log10_candidates = 0;            // before dimer pruning
};

SearchEstimate estimate_search(const EnumerationRequest& request);

// All number-conserving rules for the request, ascending by table. Throws
// BudgetError (mentioning the estimate) when the table bound is exceeded.
std::vector<CatalogEntry> enumerate_ncca(const EnumerationRequest& request);
// Same search without the OpenMP work distribution.
std::vector<CatalogEntry> enumerate_ncca_serial(const EnumerationRequest& request);
// d = 2 rotation-symmetric catalog.
std::vector<CatalogEntry> enumerate_rnca(const StateSet& states);

// Throws NotConservingError for rules that are not number-conserving.
RuleLabel classify(const DenseRule& f);
// Skips the conservation check; the caller vouches for the rule.
RuleLabel classify_conserving(const DenseRule& f);

}  // namespace ncca
