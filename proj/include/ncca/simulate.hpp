#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncca/conservation.hpp"

namespace ncca {

// x: C -> Q stored row-major (last coordinate fastest).
class TorusConfiguration {
public:
    TorusConfiguration(LatticeShape shape, std::vector<State> cells);
    static TorusConfiguration zeros(LatticeShape shape);

    const LatticeShape& shape() const { return shape_; }
    const std::vector<State>& cells() const { return cells_; }
    State at(const CellIndex& i) const { return cells_[shape_.flat(i)]; }
    void set(const CellIndex& i, State q) { cells_[shape_.flat(i)] = q; }

    bool operator==(const TorusConfiguration&) const = default;

private:
    LatticeShape shape_;
    std::vector<State> cells_;
};

NeighborhoodConfig local_view(const TorusConfiguration& x, const CellIndex& i);
TorusConfiguration global_step(const DenseRule& f, const TorusConfiguration& x);
State sigma(const TorusConfiguration& x);
// Cyclic translation by one step along v.
TorusConfiguration translate(const TorusConfiguration& x, Direction v);

struct OracleVerdict {
    Status status = Status::conserving;
    std::optional<TorusConfiguration> witness;
    std::uint64_t configurations_checked = 0;

    bool conserving() const { return status == Status::conserving; }
};

constexpr std::uint64_t kDefaultExhaustiveBudget = std::uint64_t{1} << 26;

// Every x in Q^C, in mixed-radix order with cell 0 as the least significant
// digit; the witness is the first violating configuration. Throws BudgetError
// when |Q|^|C| exceeds the budget.
OracleVerdict exhaustive_oracle(const DenseRule& f, const LatticeShape& shape,
                                std::uint64_t budget = kDefaultExhaustiveBudget);
OracleVerdict exhaustive_oracle_serial(const DenseRule& f, const LatticeShape& shape,
                                       std::uint64_t budget = kDefaultExhaustiveBudget);

// On a torus with side 7: every configuration supported on one von Neumann
// neighborhood, then every two-cell configuration at distance 1 or 2.
OracleVerdict finite_support_oracle(const DenseRule& f);

// Uniform configurations from std::mt19937_64(seed); each cell takes
// Q[draw mod |Q|] in row-major order. Passing is inconclusive.
OracleVerdict sampled_oracle(const DenseRule& f, const LatticeShape& shape, std::uint64_t samples,
                             std::uint64_t seed);

}  // namespace ncca
