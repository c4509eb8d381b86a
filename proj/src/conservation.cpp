#include "ncca/conservation.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace ncca {

namespace {

// Rank of a nonzero state among Q+.
std::size_t positive_rank(const StateSet& q, State value) {
    const std::size_t pos = q.position_or_throw(value);
    return pos < q.zero_position() ? pos : pos - 1;
}

State positive_state(const StateSet& q, std::size_t rank) {
    return q[rank < q.zero_position() ? rank : rank + 1];
}

}  // namespace

ReconstructionPlan::ReconstructionPlan(int dimension, StateSet states, Direction eta, LambdaSelection lambda)
    : dimension_(dimension), states_(std::move(states)), eta_(eta), lambda_(std::move(lambda)) {
    require_dimension(dimension);
    if (lambda_.dimension() != dimension) throw InputError("bad-lambda", "selection dimension mismatch");
    if (eta_.index() < 0 || eta_.index() > 2 * dimension) throw InputError("bad-direction", "eta outside dimension");

    const int m = static_cast<int>(states_.size()) - 1;
    monomer_variables_ = (2 * dimension + 1) * m;
    dimer_variables_ = static_cast<int>(lambda_.size()) * m * m;

    const std::uint64_t count = config_count(dimension, states_);
    forms_.resize(count);
    std::vector<State> scratch(variable_count(), 0);
    std::vector<int> touched;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto n = index_config(i, dimension, states_);
        auto add = [&](std::optional<int> var, State weight) {
            if (!var) return;
            if (scratch[*var] == 0) touched.push_back(*var);
            scratch[*var] += weight;
        };
        LinearForm& form = forms_[i];
        form.constant = reconstruction_terms(n, eta_, lambda_, [&](const ReconstructionTerm& t) {
            if (t.kind == ReconstructionTerm::Kind::monomer) {
                add(monomer_variable(t.direction, t.a), t.sign);
            } else if (t.a == 0) {
                add(monomer_variable(t.pair.second, t.b), t.sign);
            } else if (t.b == 0) {
                add(monomer_variable(t.pair.first, t.a), t.sign);
            } else {
                add(dimer_variable(*lambda_.index_of(t.pair), t.a, t.b), t.sign);
            }
        });
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (int var : touched) {
            if (scratch[var] != 0) form.terms.push_back({var, scratch[var]});
            scratch[var] = 0;
        }
        touched.clear();
    }
}

std::optional<int> ReconstructionPlan::monomer_variable(Direction v, State q) const {
    if (q == 0) return std::nullopt;
    const int m = static_cast<int>(states_.size()) - 1;
    return v.index() * m + static_cast<int>(positive_rank(states_, q));
}

std::optional<int> ReconstructionPlan::dimer_variable(std::size_t pair_index, State a, State b) const {
    if (a == 0 || b == 0) return std::nullopt;
    const std::size_t m = states_.size() - 1;
    return monomer_variables_ +
           static_cast<int>((pair_index * m + positive_rank(states_, a)) * m + positive_rank(states_, b));
}

Direction ReconstructionPlan::variable_direction(int variable) const {
    return Direction{variable / (static_cast<int>(states_.size()) - 1)};
}

std::size_t ReconstructionPlan::variable_pair(int variable) const {
    const std::size_t m = states_.size() - 1;
    return static_cast<std::size_t>(variable - monomer_variables_) / (m * m);
}

std::pair<State, State> ReconstructionPlan::variable_states(int variable) const {
    const std::size_t m = states_.size() - 1;
    if (variable < monomer_variables_) return {positive_state(states_, variable % m), 0};
    const std::size_t rest = static_cast<std::size_t>(variable - monomer_variables_) % (m * m);
    return {positive_state(states_, rest / m), positive_state(states_, rest % m)};
}

NeighborhoodConfig ReconstructionPlan::variable_config(int variable) const {
    if (variable < 0 || variable >= variable_count()) throw InputError("bad-variable", "no such parameter");
    auto [a, b] = variable_states(variable);
    if (variable < monomer_variables_) return monomer(variable_direction(variable), a, dimension_);
    return dimer(lambda_.pairs()[variable_pair(variable)], a, b, dimension_);
}

State ReconstructionPlan::evaluate(std::uint64_t index, std::span<const State> values) const {
    const LinearForm& form = forms_[index];
    State value = form.constant;
    for (const auto& c : form.terms) value += c.weight * values[c.variable];
    return value;
}

std::string equation_tag(Equation e) {
    switch (e) {
        case Equation::quiescence:
        case Equation::monomer_sum: return "lemma-4.1";
        case Equation::matching_dimer: return "lemma-4.2";
        case Equation::reconstruction: return "eq-13";
        case Equation::none: break;
    }
    return "none";
}

PrescreenReport prescreen(const DenseRule& f) {
    PrescreenReport report;
    const int d = f.dimension();
    const auto& states = f.states().values();

    for (State q : states) {
        auto h = homogeneous(q, d);
        if (report.quiescence.ok && f(h) != q) report.quiescence = {false, h};
        if (report.monomer_sum.ok && monomer_expansion(f, h) != q) report.monomer_sum = {false, h};
    }

    for (const OmegaPair& pair : omega_pairs(d)) {
        if (!report.matching_dimer.ok) break;
        for (State p : states) {
            for (State q : states) {
                auto first = dimer(pair, p, q, d);
                auto second = homogeneous(0, d);
                second[pair.second.negated()] = p;
                second[pair.first.negated()] = q;
                const State lhs = f(first) + f(second);
                const State rhs = monomer_expansion(f, first) + monomer_expansion(f, second);
                if (lhs != rhs) {
                    report.matching_dimer = {false, first};
                    break;
                }
            }
            if (!report.matching_dimer.ok) break;
        }
    }
    return report;
}

namespace {

std::optional<Verdict> prescreen_verdict(const DenseRule& f) {
    const auto report = prescreen(f);
    if (!report.quiescence.ok) return Verdict{Status::violated, report.quiescence.counterexample, Equation::quiescence};
    if (!report.monomer_sum.ok)
        return Verdict{Status::violated, report.monomer_sum.counterexample, Equation::monomer_sum};
    if (!report.matching_dimer.ok)
        return Verdict{Status::violated, report.matching_dimer.counterexample, Equation::matching_dimer};
    return std::nullopt;
}

void require_compatible(const DenseRule& f, const ReconstructionPlan& plan) {
    if (f.dimension() != plan.dimension() || !(f.states() == plan.states()))
        throw InputError("mismatch", "rule and reconstruction plan disagree on dimension or states");
}

Verdict scan_result(const DenseRule& f, std::uint64_t first) {
    if (first == std::numeric_limits<std::uint64_t>::max()) return Verdict{};
    return Verdict{Status::violated, index_config(first, f.dimension(), f.states()), Equation::reconstruction};
}

}  // namespace

Verdict is_number_conserving_serial(const DenseRule& f, const ReconstructionPlan& plan) {
    require_compatible(f, plan);
    if (auto early = prescreen_verdict(f)) return *early;
    const auto params = plan.parameters(f);
    for (std::uint64_t i = 0; i < f.table_size(); ++i)
        if (f.at(i) != plan.evaluate(i, params)) return scan_result(f, i);
    return Verdict{};
}

Verdict is_number_conserving(const DenseRule& f, const ReconstructionPlan& plan) {
    require_compatible(f, plan);
    if (auto early = prescreen_verdict(f)) return *early;
    const auto params = plan.parameters(f);
    const auto count = static_cast<std::int64_t>(f.table_size());
    std::uint64_t first = std::numeric_limits<std::uint64_t>::max();
#pragma omp parallel for schedule(static) reduction(min : first)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto index = static_cast<std::uint64_t>(i);
        if (index < first && f.at(index) != plan.evaluate(index, params)) first = index;
    }
    return scan_result(f, first);
}

Verdict is_number_conserving(const DenseRule& f, Direction eta, const LambdaSelection& lambda) {
    return is_number_conserving(f, ReconstructionPlan(f.dimension(), f.states(), eta, lambda));
}

Verdict is_number_conserving(const DenseRule& f) {
    return is_number_conserving(f, Direction::zero(), canonical_lambda(f.dimension()));
}

ParametricRule extract_params(const DenseRule& f, Direction eta, const LambdaSelection& lambda) {
    ParametricRule p(f.dimension(), f.states(), eta, lambda);
    const auto positive = f.states().positive();
    for (Direction v : direction_set(f.dimension()))
        for (State q : positive) p.set_monomer(v, q, f.monomer_value(v, q));
    for (const OmegaPair& pair : lambda.pairs())
        for (State a : positive)
            for (State b : positive) p.set_dimer(pair, a, b, f.dimer_value(pair, a, b));
    return p;
}

ParametricRule extract_params(const DenseRule& f) {
    return extract_params(f, Direction::zero(), canonical_lambda(f.dimension()));
}

Materialized materialize(const ParametricRule& p) {
    const ReconstructionPlan plan(p.dimension(), p.states(), p.eta(), p.lambda());
    const auto params = plan.parameters(p);
    const StateSet& states = p.states();

    Materialized out;
    std::vector<std::uint16_t> digits(plan.size());
    for (std::uint64_t i = 0; i < plan.size(); ++i) {
        const State value = plan.evaluate(i, params);
        const auto pos = states.position(value);
        if (!pos) {
            out.failure = Materialized::Failure::value_outside_states;
            out.witness = index_config(i, p.dimension(), states);
            out.witness_value = value;
            return out;
        }
        digits[i] = static_cast<std::uint16_t>(*pos);
    }
    auto rule = DenseRule::from_digits(p.dimension(), states, std::move(digits));

    // A closed table is conserving, but when the parameters break the monomer
    // sums it no longer reproduces them.
    for (int k = 0; k < plan.variable_count(); ++k) {
        const auto n = plan.variable_config(k);
        if (rule(n) != params[k]) {
            out.failure = Materialized::Failure::inconsistent_parameters;
            out.witness = n;
            out.witness_value = rule(n);
            return out;
        }
    }
    out.rule = std::move(rule);
    return out;
}

State evaluate(const ParametricRule& p, const NeighborhoodConfig& n) {
    if (n.dimension() != p.dimension()) throw InputError("bad-config", "dimension mismatch");
    const State value = reconstruct(p, n, p.eta(), p.lambda());
    if (!p.states().contains(value))
        throw InputError("not-closed", "reconstructed value " + std::to_string(value) + " is not in the state set");
    return value;
}

}  // namespace ncca
