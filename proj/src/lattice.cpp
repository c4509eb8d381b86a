#include "ncca/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace ncca {

std::string to_string(Direction v) {
    if (v.is_zero()) return "0";
    return (v.sign() > 0 ? "+" : "-") + std::to_string(v.axis());
}

Direction parse_direction(std::string_view text, int dimension) {
    require_dimension(dimension);
    if (text == "0") return Direction::zero();
    if (text.size() < 2 || (text[0] != '+' && text[0] != '-'))
        throw InputError("bad-direction", "malformed direction '" + std::string(text) + "'");
    int axis = 0;
    auto [end, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), axis);
    if (ec != std::errc{} || end != text.data() + text.size() || axis < 1 || axis > dimension)
        throw InputError("bad-direction", "direction '" + std::string(text) + "' is not valid in dimension " +
                                              std::to_string(dimension));
    return text[0] == '+' ? Direction::plus(axis) : Direction::minus(axis);
}

void require_dimension(int dimension) {
    if (dimension < 1 || dimension > kMaxDimension)
        throw InputError("bad-dimension", "dimension must be in [1, " + std::to_string(kMaxDimension) +
                                              "], got " + std::to_string(dimension));
}

std::vector<Direction> direction_set(int dimension) {
    require_dimension(dimension);
    std::vector<Direction> out;
    out.reserve(2 * dimension + 1);
    for (int i = 0; i <= 2 * dimension; ++i) out.emplace_back(i);
    return out;
}

std::vector<Direction> positive_directions(int dimension) {
    auto all = direction_set(dimension);
    all.erase(all.begin());
    return all;
}

bool is_omega_pair(Direction u, Direction w) {
    if (u == w) return false;
    if (u.is_zero() || w.is_zero()) return true;
    return u.axis() != w.axis();
}

OmegaPair make_omega_pair(Direction u, Direction w) {
    if (!is_omega_pair(u, w))
        throw InputError("bad-pair", "{" + to_string(u) + "," + to_string(w) + "} is not a dimer pair");
    if (w < u) std::swap(u, w);
    return OmegaPair{u, w};
}

std::vector<OmegaPair> omega_pairs(int dimension) {
    auto dirs = direction_set(dimension);
    std::vector<OmegaPair> out;
    for (std::size_t a = 0; a < dirs.size(); ++a)
        for (std::size_t b = a + 1; b < dirs.size(); ++b)
            if (is_omega_pair(dirs[a], dirs[b])) out.push_back(OmegaPair{dirs[a], dirs[b]});
    return out;
}

OmegaPair matching_pair(const OmegaPair& p) {
    return make_omega_pair(p.first.negated(), p.second.negated());
}

std::string to_string(const OmegaPair& p) {
    return "{" + to_string(p.first) + "," + to_string(p.second) + "}";
}

LambdaSelection::LambdaSelection(int dimension, std::vector<OmegaPair> pairs)
    : dimension_(dimension), pairs_(std::move(pairs)) {
    require_dimension(dimension);
    const std::size_t expected = static_cast<std::size_t>(dimension) * dimension;
    if (pairs_.size() != expected)
        throw InputError("bad-lambda", "a selection needs " + std::to_string(expected) + " pairs, got " +
                                           std::to_string(pairs_.size()));
    for (const auto& p : pairs_) {
        if (!is_omega_pair(p.first, p.second) || !(p.first < p.second) || p.second.axis() > dimension)
            throw InputError("bad-lambda", "invalid pair " + to_string(p));
    }
    for (std::size_t a = 0; a < pairs_.size(); ++a)
        for (std::size_t b = a + 1; b < pairs_.size(); ++b)
            if (pairs_[a] == pairs_[b] || matching_pair(pairs_[a]) == pairs_[b])
                throw InputError("bad-lambda", "pairs " + to_string(pairs_[a]) + " and " + to_string(pairs_[b]) +
                                                   " belong to the same matching class");
}

std::optional<std::size_t> LambdaSelection::index_of(const OmegaPair& p) const {
    auto it = std::find(pairs_.begin(), pairs_.end(), p);
    if (it == pairs_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - pairs_.begin());
}

LambdaSelection canonical_lambda(int dimension) {
    std::vector<OmegaPair> picked;
    for (const auto& p : omega_pairs(dimension))
        if (p < matching_pair(p)) picked.push_back(p);
    return LambdaSelection(dimension, std::move(picked));
}

std::vector<LambdaSelection> all_lambda_selections(int dimension) {
    const auto base = canonical_lambda(dimension).pairs();
    if (base.size() > 20) throw BudgetError("too many lambda selections to list");
    std::vector<LambdaSelection> out;
    const std::uint64_t count = std::uint64_t{1} << base.size();
    out.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::vector<OmegaPair> pairs = base;
        for (std::size_t k = 0; k < base.size(); ++k)
            if (mask >> k & 1) pairs[k] = matching_pair(pairs[k]);
        out.emplace_back(dimension, std::move(pairs));
    }
    return out;
}

LatticeShape::LatticeShape(std::vector<int> dims) : dims_(std::move(dims)) {
    require_dimension(static_cast<int>(dims_.size()));
    for (int n : dims_) {
        if (n <= 4) throw InputError("bad-shape", "every torus side must exceed 4, got " + std::to_string(n));
        if (cell_count_ > (std::size_t{1} << 40) / static_cast<std::size_t>(n))
            throw InputError("bad-shape", "torus is too large");
        cell_count_ *= static_cast<std::size_t>(n);
    }
}

bool LatticeShape::contains(const CellIndex& i) const {
    if (i.coords.size() != dims_.size()) return false;
    for (std::size_t k = 0; k < dims_.size(); ++k)
        if (i.coords[k] < 0 || i.coords[k] >= dims_[k]) return false;
    return true;
}

std::size_t LatticeShape::flat(const CellIndex& i) const {
    if (!contains(i)) throw InputError("bad-cell", "cell index outside the torus");
    std::size_t out = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) out = out * dims_[k] + i.coords[k];
    return out;
}

CellIndex LatticeShape::cell(std::size_t flat_index) const {
    CellIndex out{std::vector<int>(dims_.size())};
    for (std::size_t k = dims_.size(); k-- > 0;) {
        out.coords[k] = static_cast<int>(flat_index % dims_[k]);
        flat_index /= dims_[k];
    }
    return out;
}

CellIndex torus_step(const CellIndex& i, Direction v, const LatticeShape& shape) {
    if (!shape.contains(i)) throw InputError("bad-cell", "cell index outside the torus");
    CellIndex out = i;
    if (v.is_zero()) return out;
    const int k = v.axis() - 1;
    if (k >= shape.dimension()) throw InputError("bad-direction", "direction outside the torus dimension");
    const int n = shape.dims()[k];
    out.coords[k] = (out.coords[k] + v.sign() + n) % n;
    return out;
}

namespace {

// Minimal signed displacement from a to b on a ring of size n, in (-n/2, n/2].
int ring_delta(int a, int b, int n) {
    int d = ((b - a) % n + n) % n;
    if (2 * d > n) d -= n;
    return d;
}

}  // namespace

int manhattan_distance(const CellIndex& i, const CellIndex& j, const LatticeShape& shape) {
    if (!shape.contains(i) || !shape.contains(j)) throw InputError("bad-cell", "cell index outside the torus");
    int total = 0;
    for (int k = 0; k < shape.dimension(); ++k) {
        const int d = std::abs(i.coords[k] - j.coords[k]);
        total += std::min(d, shape.dims()[k] - d);
    }
    return total;
}

std::vector<CellIndex> neighborhood_cells(const CellIndex& i, const LatticeShape& shape) {
    std::vector<CellIndex> out;
    for (Direction v : direction_set(shape.dimension())) out.push_back(torus_step(i, v, shape));
    return out;
}

Overlap neighborhood_overlap(const CellIndex& i, const CellIndex& j, const LatticeShape& shape) {
    if (!shape.contains(i) || !shape.contains(j)) throw InputError("bad-cell", "cell index outside the torus");
    if (i == j) throw InputError("same-cell", "overlap is only defined for distinct cells");

    std::vector<Direction> steps;
    int distance = 0;
    for (int k = 0; k < shape.dimension(); ++k) {
        const int d = ring_delta(i.coords[k], j.coords[k], shape.dims()[k]);
        distance += std::abs(d);
        if (d > 0) steps.push_back(Direction::plus(k + 1));
        if (d < 0) steps.push_back(Direction::minus(k + 1));
    }

    Overlap out{OverlapCase::disjoint, {}, std::nullopt};
    if (distance == 1) {
        out.kind = OverlapCase::adjacent;
        out.shared = {i, j};
        out.pair = make_omega_pair(Direction::zero(), steps[0]);
    } else if (distance == 2 && steps.size() == 1) {
        out.kind = OverlapCase::collinear;
        out.shared = {torus_step(i, steps[0], shape)};
    } else if (distance == 2) {
        out.kind = OverlapCase::diagonal;
        out.shared = {torus_step(i, steps[0], shape), torus_step(i, steps[1], shape)};
        out.pair = make_omega_pair(steps[0], steps[1]);
    }
    std::sort(out.shared.begin(), out.shared.end());
    return out;
}

}  // namespace ncca
