#include "ncca/rules.hpp"

#include <algorithm>
#include <cstdlib>

namespace ncca {

StateSet::StateSet(std::vector<State> states) : states_(std::move(states)) {
    std::sort(states_.begin(), states_.end());
    if (std::adjacent_find(states_.begin(), states_.end()) != states_.end())
        throw InputError("bad-states", "duplicate state in state set");
    if (states_.size() < 2) throw InputError("bad-states", "a state set needs at least two states");
    if (states_.size() > 0xFFFF) throw InputError("bad-states", "too many states");
    for (State q : states_)
        if (q > kMaxAbsState || q < -kMaxAbsState) throw InputError("bad-states", "state magnitude exceeds 2^40");
    auto zero = position(0);
    if (!zero) throw InputError("bad-states", "a state set must contain 0");
    zero_position_ = *zero;
}

std::vector<State> StateSet::positive() const {
    std::vector<State> out;
    for (State q : states_)
        if (q != 0) out.push_back(q);
    return out;
}

std::optional<std::size_t> StateSet::position(State q) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), q);
    if (it == states_.end() || *it != q) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

std::size_t StateSet::position_or_throw(State q) const {
    auto p = position(q);
    if (!p) throw InputError("bad-state", "state " + std::to_string(q) + " is not in the state set");
    return *p;
}

NeighborhoodConfig::NeighborhoodConfig(int dimension, std::vector<State> states)
    : dimension_(dimension), states_(std::move(states)) {
    require_dimension(dimension);
    if (states_.size() != static_cast<std::size_t>(2 * dimension + 1))
        throw InputError("bad-config", "a neighborhood configuration in dimension " + std::to_string(dimension) +
                                           " has " + std::to_string(2 * dimension + 1) + " entries");
}

bool NeighborhoodConfig::is_trivial() const {
    return std::all_of(states_.begin(), states_.end(), [](State q) { return q == 0; });
}

int NeighborhoodConfig::nonzero_count() const {
    return static_cast<int>(std::count_if(states_.begin(), states_.end(), [](State q) { return q != 0; }));
}

std::uint64_t config_count(int dimension, const StateSet& q) {
    require_dimension(dimension);
    std::uint64_t total = 1;
    for (int i = 0; i < 2 * dimension + 1; ++i) {
        total *= q.size();
        if (total > kMaxTableSize)
            throw BudgetError("|Q|^(2d+1) exceeds the dense table bound of 2^31 entries");
    }
    return total;
}

std::uint64_t config_index(const NeighborhoodConfig& n, const StateSet& q) {
    std::uint64_t index = 0;
    const auto& s = n.states();
    for (std::size_t k = s.size(); k-- > 0;) index = index * q.size() + q.position_or_throw(s[k]);
    return index;
}

NeighborhoodConfig index_config(std::uint64_t index, int dimension, const StateSet& q) {
    std::vector<State> s(2 * dimension + 1);
    for (auto& entry : s) {
        entry = q[index % q.size()];
        index /= q.size();
    }
    if (index != 0) throw InputError("bad-index", "configuration index out of range");
    return NeighborhoodConfig(dimension, std::move(s));
}

NeighborhoodConfig homogeneous(State q, int dimension) {
    return NeighborhoodConfig(dimension, std::vector<State>(2 * dimension + 1, q));
}

NeighborhoodConfig monomer(Direction v, State q, int dimension) {
    auto n = homogeneous(0, dimension);
    if (v.index() > 2 * dimension) throw InputError("bad-direction", "direction outside dimension");
    n[v] = q;
    return n;
}

NeighborhoodConfig dimer(const OmegaPair& p, State a, State b, int dimension) {
    if (!is_omega_pair(p.first, p.second) || p.second.index() > 2 * dimension)
        throw InputError("bad-pair", "invalid dimer pair " + to_string(p));
    auto n = homogeneous(0, dimension);
    n[p.first] = a;
    n[p.second] = b;
    return n;
}

DenseRule::DenseRule(int dimension, StateSet states) : dimension_(dimension), states_(std::move(states)) {
    require_dimension(dimension);
}

DenseRule::DenseRule(int dimension, StateSet states, std::span<const State> table)
    : DenseRule(dimension, std::move(states)) {
    const auto count = config_count(dimension_, states_);
    if (table.size() != count)
        throw InputError("bad-table", "table has " + std::to_string(table.size()) + " entries, expected " +
                                          std::to_string(count));
    digits_.resize(count);
    for (std::uint64_t i = 0; i < count; ++i)
        digits_[i] = static_cast<std::uint16_t>(states_.position_or_throw(table[i]));
}

DenseRule DenseRule::from_function(int dimension, StateSet states,
                                   const std::function<State(const NeighborhoodConfig&)>& fn) {
    DenseRule rule(dimension, std::move(states));
    const auto count = config_count(dimension, rule.states_);
    rule.digits_.resize(count);
    for (std::uint64_t i = 0; i < count; ++i)
        rule.digits_[i] =
            static_cast<std::uint16_t>(rule.states_.position_or_throw(fn(index_config(i, dimension, rule.states_))));
    return rule;
}

DenseRule DenseRule::from_digits(int dimension, StateSet states, std::vector<std::uint16_t> digits) {
    DenseRule rule(dimension, std::move(states));
    if (digits.size() != config_count(dimension, rule.states_)) throw InputError("bad-table", "table size mismatch");
    for (auto d : digits)
        if (d >= rule.states_.size()) throw InputError("bad-table", "table digit out of range");
    rule.digits_ = std::move(digits);
    return rule;
}

std::vector<State> DenseRule::table() const {
    std::vector<State> out(digits_.size());
    for (std::size_t i = 0; i < digits_.size(); ++i) out[i] = states_[digits_[i]];
    return out;
}

State DenseRule::monomer_value(Direction v, State q) const { return (*this)(monomer(v, q, dimension_)); }

State DenseRule::dimer_value(const OmegaPair& p, State a, State b) const {
    return (*this)(dimer(p, a, b, dimension_));
}

ParametricRule::ParametricRule(int dimension, StateSet states, Direction eta, LambdaSelection lambda)
    : dimension_(dimension), states_(std::move(states)), eta_(eta), lambda_(std::move(lambda)) {
    require_dimension(dimension);
    if (lambda_.dimension() != dimension) throw InputError("bad-lambda", "selection dimension mismatch");
    if (eta_.index() < 0 || eta_.index() > 2 * dimension) throw InputError("bad-direction", "eta outside dimension");
    const std::size_t q = states_.size();
    monomers_.assign((2 * dimension + 1) * q, 0);
    dimers_.assign(lambda_.size() * q * q, 0);
}

std::size_t ParametricRule::monomer_slot(Direction v, State q) const {
    if (v.index() < 0 || v.index() > 2 * dimension_) throw InputError("bad-direction", "direction outside dimension");
    return v.index() * states_.size() + states_.position_or_throw(q);
}

std::size_t ParametricRule::dimer_slot(std::size_t pair_index, State a, State b) const {
    const std::size_t q = states_.size();
    return (pair_index * q + states_.position_or_throw(a)) * q + states_.position_or_throw(b);
}

void ParametricRule::check_value(State value) const {
    if (!states_.contains(value))
        throw InputError("bad-state", "parameter value " + std::to_string(value) + " is not in the state set");
}

State ParametricRule::monomer_value(Direction v, State q) const {
    if (q == 0) return 0;
    return monomers_[monomer_slot(v, q)];
}

State ParametricRule::dimer_value(const OmegaPair& p, State a, State b) const {
    if (a == 0) return monomer_value(p.second, b);
    if (b == 0) return monomer_value(p.first, a);
    auto k = lambda_.index_of(p);
    if (!k) throw InputError("bad-pair", "dimer " + to_string(p) + " is not part of the stored selection");
    return dimers_[dimer_slot(*k, a, b)];
}

void ParametricRule::set_monomer(Direction v, State q, State value) {
    if (q == 0) throw InputError("bad-state", "monomers with state 0 are fixed");
    check_value(value);
    monomers_[monomer_slot(v, q)] = value;
}

void ParametricRule::set_dimer(const OmegaPair& p, State a, State b, State value) {
    if (a == 0 || b == 0) throw InputError("bad-state", "dimers with a zero state are monomers");
    auto k = lambda_.index_of(p);
    if (!k) throw InputError("bad-pair", "dimer " + to_string(p) + " is not part of the stored selection");
    check_value(value);
    dimers_[dimer_slot(*k, a, b)] = value;
}

State evaluate(const DenseRule& f, const NeighborhoodConfig& n) {
    if (n.dimension() != f.dimension()) throw InputError("bad-config", "dimension mismatch");
    return f(n);
}

Direction rotate90(Direction v) {
    if (v.axis() > 2) throw InputError("bad-dimension", "rotation is defined for d = 2 only");
    switch (v.index()) {
        case 1: return Direction::plus(2);
        case 3: return Direction::minus(1);
        case 2: return Direction::minus(2);
        case 4: return Direction::plus(1);
        default: return v;
    }
}

NeighborhoodConfig rotate90(const NeighborhoodConfig& n) {
    if (n.dimension() != 2) throw InputError("bad-dimension", "rotation is defined for d = 2 only");
    auto out = n;
    for (Direction v : direction_set(2)) out[rotate90(v)] = n[v];
    return out;
}

bool is_rotation_symmetric(const DenseRule& f) {
    if (f.dimension() != 2) throw InputError("bad-dimension", "rotation is defined for d = 2 only");
    for (std::uint64_t i = 0; i < f.table_size(); ++i) {
        auto n = index_config(i, 2, f.states());
        if (f.at(i) != f(rotate90(n))) return false;
    }
    return true;
}

}  // namespace ncca
