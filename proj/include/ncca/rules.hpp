#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ncca/lattice.hpp"

namespace ncca {

using State = std::int64_t;

// Bound on |q| so that reconstruction sums cannot overflow for d <= 8.
constexpr State kMaxAbsState = State{1} << 40;
// Upper bound on |Q|^{2d+1} for dense tables.
constexpr std::uint64_t kMaxTableSize = std::uint64_t{1} << 31;

// A finite set of integer states containing 0, kept sorted.
class StateSet {
public:
    explicit StateSet(std::vector<State> states);

    std::size_t size() const { return states_.size(); }
    State operator[](std::size_t position) const { return states_[position]; }
    const std::vector<State>& values() const { return states_; }
    std::vector<State> positive() const;  // Q \ {0}

    std::optional<std::size_t> position(State q) const;
    std::size_t position_or_throw(State q) const;
    bool contains(State q) const { return position(q).has_value(); }
    std::size_t zero_position() const { return zero_position_; }

    State min() const { return states_.front(); }
    State max() const { return states_.back(); }

    bool operator==(const StateSet& other) const { return states_ == other.states_; }

private:
    std::vector<State> states_;
    std::size_t zero_position_ = 0;
};

// N: V -> Q, stored by direction index.
class NeighborhoodConfig {
public:
    NeighborhoodConfig(int dimension, std::vector<State> states);

    int dimension() const { return dimension_; }
    State operator[](Direction v) const { return states_[v.index()]; }
    State& operator[](Direction v) { return states_[v.index()]; }
    const std::vector<State>& states() const { return states_; }
    bool is_trivial() const;
    int nonzero_count() const;

    bool operator==(const NeighborhoodConfig&) const = default;

private:
    int dimension_;
    std::vector<State> states_;
};

// |Q|^{2d+1}; throws BudgetError when it exceeds kMaxTableSize.
std::uint64_t config_count(int dimension, const StateSet& q);

// Mixed radix, least significant digit = direction index 0, digit = position in sorted Q.
std::uint64_t config_index(const NeighborhoodConfig& n, const StateSet& q);
NeighborhoodConfig index_config(std::uint64_t index, int dimension, const StateSet& q);

NeighborhoodConfig homogeneous(State q, int dimension);
NeighborhoodConfig monomer(Direction v, State q, int dimension);
// a sits on p.first, b on p.second.
NeighborhoodConfig dimer(const OmegaPair& p, State a, State b, int dimension);

// Anything that can answer monomer and dimer values of a local rule.
template <class R>
concept LocalValues = requires(const R& r, Direction v, OmegaPair p, State a) {
    { r.monomer_value(v, a) } -> std::convertible_to<State>;
    { r.dimer_value(p, a, a) } -> std::convertible_to<State>;
};

// Full lookup table f: N -> Q.
class DenseRule {
public:
    DenseRule(int dimension, StateSet states, std::span<const State> table);
    static DenseRule from_function(int dimension, StateSet states,
                                   const std::function<State(const NeighborhoodConfig&)>& fn);
    static DenseRule from_digits(int dimension, StateSet states, std::vector<std::uint16_t> digits);

    int dimension() const { return dimension_; }
    const StateSet& states() const { return states_; }
    std::uint64_t table_size() const { return digits_.size(); }

    State at(std::uint64_t index) const { return states_[digits_[index]]; }
    std::uint16_t digit(std::uint64_t index) const { return digits_[index]; }
    const std::vector<std::uint16_t>& digits() const { return digits_; }
    std::vector<State> table() const;

    State operator()(const NeighborhoodConfig& n) const { return at(config_index(n, states_)); }
    State monomer_value(Direction v, State q) const;
    State dimer_value(const OmegaPair& p, State a, State b) const;

    bool operator==(const DenseRule& other) const {
        return dimension_ == other.dimension_ && states_ == other.states_ && digits_ == other.digits_;
    }

private:
    DenseRule(int dimension, StateSet states);

    int dimension_;
    StateSet states_;
    std::vector<std::uint16_t> digits_;
};

// Monomer values for every (v, q in Q+) and dimer values for every pair of a
// stored selection with both states nonzero, plus the leading direction.
class ParametricRule {
public:
    ParametricRule(int dimension, StateSet states, Direction eta, LambdaSelection lambda);

    int dimension() const { return dimension_; }
    const StateSet& states() const { return states_; }
    Direction eta() const { return eta_; }
    const LambdaSelection& lambda() const { return lambda_; }

    // Zero-state arguments collapse: f(M_{v:0}) = 0 and D_{u:p,w:0} = M_{u:p}.
    State monomer_value(Direction v, State q) const;
    State dimer_value(const OmegaPair& p, State a, State b) const;

    void set_monomer(Direction v, State q, State value);
    void set_dimer(const OmegaPair& p, State a, State b, State value);

    bool operator==(const ParametricRule&) const = default;

private:
    std::size_t monomer_slot(Direction v, State q) const;
    std::size_t dimer_slot(std::size_t pair_index, State a, State b) const;
    void check_value(State value) const;

    int dimension_;
    StateSet states_;
    Direction eta_;
    LambdaSelection lambda_;
    std::vector<State> monomers_;
    std::vector<State> dimers_;
};

State evaluate(const DenseRule& f, const NeighborhoodConfig& n);

// f^E(N) = sum over V of f(M_{v:N(v)}).
template <LocalValues R>
State monomer_expansion(const R& f, const NeighborhoodConfig& n) {
    State total = 0;
    for (Direction v : direction_set(n.dimension())) total += f.monomer_value(v, n[v]);
    return total;
}

// d = 2 only: +v1 -> +v2 -> -v1 -> -v2 -> +v1, centre fixed.
Direction rotate90(Direction v);
NeighborhoodConfig rotate90(const NeighborhoodConfig& n);
bool is_rotation_symmetric(const DenseRule& f);

}  // namespace ncca
