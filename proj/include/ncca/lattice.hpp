#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ncca {

// Input validation failures (malformed files, bad flags, inconsistent
// dimensions). The code is a short machine-readable tag.
class InputError : public std::runtime_error {
public:
    InputError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// A request that is well formed but too large to decide within the
// configured limits.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int kMaxDimension = 8;

// One of the 2d+1 von Neumann directions.
// Index 0 is the zero vector; axis k (1-based) has +v_k at 2k-1 and -v_k at 2k.
class Direction {
public:
    constexpr Direction() = default;
    constexpr explicit Direction(int index) : index_(index) {}

    static constexpr Direction zero() { return Direction{0}; }
    static constexpr Direction plus(int axis) { return Direction{2 * axis - 1}; }
    static constexpr Direction minus(int axis) { return Direction{2 * axis}; }

    constexpr int index() const { return index_; }
    constexpr bool is_zero() const { return index_ == 0; }
    // 1-based axis, 0 for the zero vector.
    constexpr int axis() const { return (index_ + 1) / 2; }
    constexpr int sign() const { return index_ == 0 ? 0 : (index_ % 2 == 1 ? 1 : -1); }
    constexpr Direction negated() const {
        if (index_ == 0) return *this;
        return Direction{index_ % 2 == 1 ? index_ + 1 : index_ - 1};
    }

    constexpr auto operator<=>(const Direction&) const = default;

private:
    int index_ = 0;
};

constexpr Direction negate(Direction v) { return v.negated(); }

// "0", "+1", "-1", "+2", ...
std::string to_string(Direction v);
Direction parse_direction(std::string_view text, int dimension);

void require_dimension(int dimension);

// V in canonical index order; V+ is everything but the first entry.
std::vector<Direction> direction_set(int dimension);
std::vector<Direction> positive_directions(int dimension);

// Unordered pair {u, w} from Omega, stored with first.index() < second.index().
struct OmegaPair {
    Direction first;
    Direction second;

    auto operator<=>(const OmegaPair&) const = default;
};

bool is_omega_pair(Direction u, Direction w);
// Normalizes the order; throws InputError when {u, w} is not in Omega.
OmegaPair make_omega_pair(Direction u, Direction w);
std::vector<OmegaPair> omega_pairs(int dimension);
OmegaPair matching_pair(const OmegaPair& p);
std::string to_string(const OmegaPair& p);

// One representative from each of the d^2 matching classes of Omega.
class LambdaSelection {
public:
    LambdaSelection(int dimension, std::vector<OmegaPair> pairs);

    int dimension() const { return dimension_; }
    const std::vector<OmegaPair>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    std::optional<std::size_t> index_of(const OmegaPair& p) const;
    bool contains(const OmegaPair& p) const { return index_of(p).has_value(); }

    bool operator==(const LambdaSelection&) const = default;

private:
    int dimension_;
    std::vector<OmegaPair> pairs_;
};

LambdaSelection canonical_lambda(int dimension);
// All 2^{d^2} selections, ordered by the bit pattern choosing the
// non-canonical member of each class.
std::vector<LambdaSelection> all_lambda_selections(int dimension);

struct CellIndex {
    std::vector<int> coords;

    bool operator==(const CellIndex&) const = default;
    auto operator<=>(const CellIndex&) const = default;
};

class LatticeShape {
public:
    explicit LatticeShape(std::vector<int> dims);

    int dimension() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    std::size_t cell_count() const { return cell_count_; }

    bool contains(const CellIndex& i) const;
    // Row-major: the last coordinate varies fastest.
    std::size_t flat(const CellIndex& i) const;
    CellIndex cell(std::size_t flat_index) const;

    bool operator==(const LatticeShape&) const = default;

private:
    std::vector<int> dims_;
    std::size_t cell_count_ = 1;
};

CellIndex torus_step(const CellIndex& i, Direction v, const LatticeShape& shape);
int manhattan_distance(const CellIndex& i, const CellIndex& j, const LatticeShape& shape);
// P(i) listed in direction index order.
std::vector<CellIndex> neighborhood_cells(const CellIndex& i, const LatticeShape& shape);

enum class OverlapCase { adjacent, collinear, diagonal, disjoint };

struct Overlap {
    OverlapCase kind;
    std::vector<CellIndex> shared;  // sorted
    // Set when two cells are shared: the unique pair with j = (i + u) + w.
    std::optional<OmegaPair> pair;
};

Overlap neighborhood_overlap(const CellIndex& i, const CellIndex& j, const LatticeShape& shape);

}  // namespace ncca
