#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncca/rules.hpp"

namespace ncca {

// One rule evaluation inside the reconstruction sum, with its sign.
struct ReconstructionTerm {
    enum class Kind { monomer, dimer };
    Kind kind;
    Direction direction;  // monomer only
    OmegaPair pair;       // dimer only; a on pair.first, b on pair.second
    State a;
    State b;
    int sign;
};

// Walks the right-hand side of the reconstruction identity for N with leading
// direction eta and selection lambda:
//
//   N(eta) + sum_{v != eta} f^E(H_{N(v)})
//     + sum_{{u,w} in lambda} [ f(D_{u:N(u),w:N(w)}) - f(D_{u:N(-w),w:N(-u)})
//                               - f^E(D_{u:N(u),w:N(w)}) - f^E(D_{-w:N(u),-u:N(w)}) ]
//     - sum_{v in V+} f(M_{v:N(-v)})
//
// with f^E of a dimer taken as the sum of its two monomers. Every term is
// passed to emit; the constant N(eta) is returned.
template <class Emit>
State reconstruction_terms(const NeighborhoodConfig& n, Direction eta, const LambdaSelection& lambda, Emit&& emit) {
    using Kind = ReconstructionTerm::Kind;
    const int d = n.dimension();
    auto mono = [&](Direction v, State q, int sign) { emit(ReconstructionTerm{Kind::monomer, v, {}, q, 0, sign}); };

    for (Direction v : direction_set(d)) {
        if (v == eta) continue;
        for (Direction u : direction_set(d)) mono(u, n[v], +1);
    }
    for (const OmegaPair& p : lambda.pairs()) {
        const Direction u = p.first, w = p.second;
        emit(ReconstructionTerm{Kind::dimer, {}, p, n[u], n[w], +1});
        emit(ReconstructionTerm{Kind::dimer, {}, p, n[w.negated()], n[u.negated()], -1});
        mono(u, n[u], -1);
        mono(w, n[w], -1);
        mono(w.negated(), n[u], -1);
        mono(u.negated(), n[w], -1);
    }
    for (Direction v : positive_directions(d)) mono(v, n[v.negated()], -1);
    return n[eta];
}

// Right-hand side of the reconstruction identity. The value may lie outside Q.
template <LocalValues R>
State reconstruct(const R& f, const NeighborhoodConfig& n, Direction eta, const LambdaSelection& lambda) {
    State value = 0;
    value += reconstruction_terms(n, eta, lambda, [&](const ReconstructionTerm& t) {
        const State term = t.kind == ReconstructionTerm::Kind::monomer ? f.monomer_value(t.direction, t.a)
                                                                        : f.dimer_value(t.pair, t.a, t.b);
        value += t.sign * term;
    });
    return value;
}

// Reconstruction compiled into one linear form per configuration, over the
// free parameters: monomer values (v, q in Q+) followed by selection dimer
// values (pair, p in Q+, q in Q+). Assumes f(H_0) = 0.
class ReconstructionPlan {
public:
    struct Coefficient {
        int variable;
        State weight;
    };
    struct LinearForm {
        State constant = 0;
        std::vector<Coefficient> terms;
    };

    ReconstructionPlan(int dimension, StateSet states, Direction eta, LambdaSelection lambda);

    int dimension() const { return dimension_; }
    const StateSet& states() const { return states_; }
    Direction eta() const { return eta_; }
    const LambdaSelection& lambda() const { return lambda_; }

    int monomer_variable_count() const { return monomer_variables_; }
    int variable_count() const { return monomer_variables_ + dimer_variables_; }
    std::optional<int> monomer_variable(Direction v, State q) const;
    std::optional<int> dimer_variable(std::size_t pair_index, State a, State b) const;
    // The configuration whose rule value a variable stores.
    NeighborhoodConfig variable_config(int variable) const;

    std::uint64_t size() const { return forms_.size(); }
    const LinearForm& form(std::uint64_t index) const { return forms_[index]; }
    State evaluate(std::uint64_t index, std::span<const State> values) const;

    template <LocalValues R>
    std::vector<State> parameters(const R& f) const {
        std::vector<State> values(variable_count());
        for (int k = 0; k < variable_count(); ++k) {
            values[k] = k < monomer_variables_ ? f.monomer_value(variable_direction(k), variable_states(k).first)
                                               : f.dimer_value(lambda_.pairs()[variable_pair(k)],
                                                               variable_states(k).first, variable_states(k).second);
        }
        return values;
    }

private:
    Direction variable_direction(int variable) const;
    std::size_t variable_pair(int variable) const;
    std::pair<State, State> variable_states(int variable) const;

    int dimension_;
    StateSet states_;
    Direction eta_;
    LambdaSelection lambda_;
    int monomer_variables_;
    int dimer_variables_;
    std::vector<LinearForm> forms_;
};

enum class Status { conserving, violated };

// Which necessary or sufficient condition a witness breaks.
enum class Equation { none, quiescence, monomer_sum, matching_dimer, reconstruction };

// Wire tag used in check reports.
std::string equation_tag(Equation e);

struct Verdict {
    Status status = Status::conserving;
    std::optional<NeighborhoodConfig> witness;
    Equation equation = Equation::none;

    bool conserving() const { return status == Status::conserving; }
};

struct PrescreenReport {
    struct Check {
        bool ok = true;
        std::optional<NeighborhoodConfig> counterexample;
    };
    Check quiescence;      // f(H_q) = q
    Check monomer_sum;     // f^E(H_q) = q
    Check matching_dimer;  // f(D) + f(D') = f^E(D) + f^E(D') for matching dimers

    bool passed() const { return quiescence.ok && monomer_sum.ok && matching_dimer.ok; }
};

PrescreenReport prescreen(const DenseRule& f);

// Prescreen, then compares f with its reconstruction on every configuration.
// The witness is the lowest failing configuration index.
Verdict is_number_conserving(const DenseRule& f, Direction eta, const LambdaSelection& lambda);
Verdict is_number_conserving(const DenseRule& f);
Verdict is_number_conserving(const DenseRule& f, const ReconstructionPlan& plan);
// Single-threaded reference for the scan above.
Verdict is_number_conserving_serial(const DenseRule& f, const ReconstructionPlan& plan);

ParametricRule extract_params(const DenseRule& f, Direction eta, const LambdaSelection& lambda);
ParametricRule extract_params(const DenseRule& f);

struct Materialized {
    enum class Failure { none, value_outside_states, inconsistent_parameters };

    std::optional<DenseRule> rule;
    Failure failure = Failure::none;
    // First configuration whose reconstructed value leaves Q, or whose value
    // disagrees with the stored parameter.
    std::optional<NeighborhoodConfig> witness;
    State witness_value = 0;

    bool ok() const { return rule.has_value(); }
};

Materialized materialize(const ParametricRule& p);

// Reconstructs with the rule's stored leading direction and selection; throws
// InputError("not-closed") when the value leaves Q.
State evaluate(const ParametricRule& p, const NeighborhoodConfig& n);

}  // namespace ncca
