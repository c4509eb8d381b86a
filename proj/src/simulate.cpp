#include "ncca/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <random>
#include <set>

namespace ncca {

TorusConfiguration::TorusConfiguration(LatticeShape shape, std::vector<State> cells)
    : shape_(std::move(shape)), cells_(std::move(cells)) {
    if (cells_.size() != shape_.cell_count())
        throw InputError("bad-config", "configuration has " + std::to_string(cells_.size()) + " cells, shape needs " +
                                           std::to_string(shape_.cell_count()));
}

TorusConfiguration TorusConfiguration::zeros(LatticeShape shape) {
    const auto count = shape.cell_count();
    return TorusConfiguration(std::move(shape), std::vector<State>(count, 0));
}

NeighborhoodConfig local_view(const TorusConfiguration& x, const CellIndex& i) {
    const int d = x.shape().dimension();
    std::vector<State> states;
    states.reserve(2 * d + 1);
    for (Direction v : direction_set(d)) states.push_back(x.at(torus_step(i, v, x.shape())));
    return NeighborhoodConfig(d, std::move(states));
}

TorusConfiguration global_step(const DenseRule& f, const TorusConfiguration& x) {
    if (f.dimension() != x.shape().dimension()) throw InputError("mismatch", "rule and torus dimension differ");
    auto next = x;
    for (std::size_t c = 0; c < x.shape().cell_count(); ++c) {
        const auto i = x.shape().cell(c);
        next.set(i, f(local_view(x, i)));
    }
    return next;
}

State sigma(const TorusConfiguration& x) {
    State total = 0;
    for (State q : x.cells()) total += q;
    return total;
}

TorusConfiguration translate(const TorusConfiguration& x, Direction v) {
    auto out = x;
    for (std::size_t c = 0; c < x.shape().cell_count(); ++c) {
        const auto i = x.shape().cell(c);
        out.set(torus_step(i, v, x.shape()), x.at(i));
    }
    return out;
}

namespace {

std::uint64_t configuration_total(const StateSet& q, const LatticeShape& shape, std::uint64_t budget) {
    std::uint64_t total = 1;
    for (std::size_t c = 0; c < shape.cell_count(); ++c) {
        if (total > budget / q.size())
            throw BudgetError("exhaustive check needs more than " + std::to_string(budget) + " configurations");
        total *= q.size();
    }
    return total;
}

void require_shape(const DenseRule& f, const LatticeShape& shape) {
    if (f.dimension() != shape.dimension()) throw InputError("mismatch", "rule and torus dimension differ");
}

TorusConfiguration decode(std::uint64_t index, const StateSet& q, const LatticeShape& shape) {
    std::vector<State> cells(shape.cell_count());
    for (auto& cell : cells) {
        cell = q[index % q.size()];
        index /= q.size();
    }
    return TorusConfiguration(shape, std::move(cells));
}

// Flat-index geometry shared by the oracle kernels.
struct TorusKernel {
    std::size_t cells = 0;
    std::size_t width = 0;               // 2d+1
    std::vector<std::size_t> neighbor;   // [c * width + k] = c + v_k
    std::vector<std::size_t> reader;     // [c * width + k] = c - v_k, the cell seeing c at slot k
    std::vector<std::int64_t> weight;    // |Q|^k
    std::vector<State> rule_value;       // f by configuration index
    std::vector<State> state_value;      // Q by digit

    TorusKernel(const DenseRule& f, const LatticeShape& shape) {
        cells = shape.cell_count();
        width = 2 * shape.dimension() + 1;
        neighbor.resize(cells * width);
        reader.resize(cells * width);
        const auto dirs = direction_set(shape.dimension());
        for (std::size_t c = 0; c < cells; ++c) {
            const auto i = shape.cell(c);
            for (std::size_t k = 0; k < width; ++k) {
                neighbor[c * width + k] = shape.flat(torus_step(i, dirs[k], shape));
                reader[c * width + k] = shape.flat(torus_step(i, dirs[k].negated(), shape));
            }
        }
        std::int64_t w = 1;
        for (std::size_t k = 0; k < width; ++k) {
            weight.push_back(w);
            w *= static_cast<std::int64_t>(f.states().size());
        }
        rule_value = f.table();
        state_value = f.states().values();
    }

    // Scans configurations [start, start + count) incrementally; returns the
    // first index where the state sum changes.
    std::optional<std::uint64_t> scan(std::uint64_t start, std::uint64_t count) const {
        const auto radix = static_cast<std::uint16_t>(state_value.size());
        std::vector<std::uint16_t> digit(cells);
        std::uint64_t rest = start;
        for (auto& dg : digit) {
            dg = static_cast<std::uint16_t>(rest % radix);
            rest /= radix;
        }
        std::vector<std::int64_t> view(cells, 0);
        State in = 0, out = 0;
        for (std::size_t c = 0; c < cells; ++c) {
            in += state_value[digit[c]];
            for (std::size_t k = 0; k < width; ++k) view[c] += digit[neighbor[c * width + k]] * weight[k];
            out += rule_value[view[c]];
        }
        auto change = [&](std::size_t c, std::uint16_t to) {
            const std::int64_t delta = static_cast<std::int64_t>(to) - digit[c];
            in += state_value[to] - state_value[digit[c]];
            for (std::size_t k = 0; k < width; ++k) {
                const std::size_t r = reader[c * width + k];
                out -= rule_value[view[r]];
                view[r] += delta * weight[k];
                out += rule_value[view[r]];
            }
            digit[c] = to;
        };
        for (std::uint64_t t = 0; t < count; ++t) {
            if (in != out) return start + t;
            for (std::size_t c = 0; c < cells; ++c) {
                if (digit[c] + 1 < radix) {
                    change(c, static_cast<std::uint16_t>(digit[c] + 1));
                    break;
                }
                change(c, 0);
            }
        }
        return std::nullopt;
    }
};

OracleVerdict violated_at(std::uint64_t index, const DenseRule& f, const LatticeShape& shape) {
    return OracleVerdict{Status::violated, decode(index, f.states(), shape), index + 1};
}

}  // namespace

OracleVerdict exhaustive_oracle(const DenseRule& f, const LatticeShape& shape, std::uint64_t budget) {
    require_shape(f, shape);
    const std::uint64_t total = configuration_total(f.states(), shape, budget);
    const TorusKernel kernel(f, shape);

    constexpr std::uint64_t kBlock = std::uint64_t{1} << 16;
    const auto blocks = static_cast<std::int64_t>((total + kBlock - 1) / kBlock);
    std::atomic<std::uint64_t> first{std::numeric_limits<std::uint64_t>::max()};
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::uint64_t start = static_cast<std::uint64_t>(b) * kBlock;
        if (start >= first.load(std::memory_order_relaxed)) continue;
        if (auto hit = kernel.scan(start, std::min(kBlock, total - start))) {
            std::uint64_t seen = first.load();
            while (*hit < seen && !first.compare_exchange_weak(seen, *hit)) {
            }
        }
    }
    const std::uint64_t hit = first.load();
    if (hit != std::numeric_limits<std::uint64_t>::max()) return violated_at(hit, f, shape);
    return OracleVerdict{Status::conserving, std::nullopt, total};
}

OracleVerdict exhaustive_oracle_serial(const DenseRule& f, const LatticeShape& shape, std::uint64_t budget) {
    require_shape(f, shape);
    const std::uint64_t total = configuration_total(f.states(), shape, budget);
    for (std::uint64_t index = 0; index < total; ++index) {
        const auto x = decode(index, f.states(), shape);
        if (sigma(global_step(f, x)) != sigma(x)) return violated_at(index, f, shape);
    }
    return OracleVerdict{Status::conserving, std::nullopt, total};
}

namespace {

// Change of the state sum under one step, evaluating only cells whose
// neighborhood meets the support; every other cell sees H_0.
State sparse_sigma_change(const DenseRule& f, const TorusConfiguration& x, const std::vector<CellIndex>& touched) {
    const State background = f(homogeneous(0, f.dimension()));
    State after = static_cast<State>(x.shape().cell_count() - touched.size()) * background;
    for (const auto& c : touched) after += f(local_view(x, c));
    return after - sigma(x);
}

std::vector<CellIndex> touched_cells(const std::vector<CellIndex>& support, const LatticeShape& shape) {
    std::set<CellIndex> out;
    for (const auto& s : support)
        for (const auto& c : neighborhood_cells(s, shape)) out.insert(c);
    return {out.begin(), out.end()};
}

}  // namespace

OracleVerdict finite_support_oracle(const DenseRule& f) {
    const int d = f.dimension();
    const LatticeShape shape(std::vector<int>(d, 7));
    const CellIndex centre{std::vector<int>(d, 3)};
    const auto& states = f.states();
    OracleVerdict verdict;

    // Cross-shaped supports: one neighborhood holding an arbitrary N.
    const auto cross = neighborhood_cells(centre, shape);
    const auto cross_touched = touched_cells(cross, shape);
    const std::uint64_t count = config_count(d, states);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto n = index_config(i, d, states);
        auto x = TorusConfiguration::zeros(shape);
        for (Direction v : direction_set(d)) x.set(cross[v.index()], n[v]);
        ++verdict.configurations_checked;
        if (sparse_sigma_change(f, x, cross_touched) != 0) {
            verdict.status = Status::violated;
            verdict.witness = std::move(x);
            return verdict;
        }
    }

    // Two occupied cells at distance 1 or 2.
    std::vector<CellIndex> partners;
    for (std::size_t c = 0; c < shape.cell_count(); ++c) {
        const auto j = shape.cell(c);
        const int dist = manhattan_distance(centre, j, shape);
        if (dist == 1 || dist == 2) partners.push_back(j);
    }
    const auto positive = states.positive();
    for (const auto& j : partners) {
        const auto touched = touched_cells({centre, j}, shape);
        for (State p : positive) {
            for (State q : positive) {
                auto x = TorusConfiguration::zeros(shape);
                x.set(centre, p);
                x.set(j, q);
                ++verdict.configurations_checked;
                if (sparse_sigma_change(f, x, touched) != 0) {
                    verdict.status = Status::violated;
                    verdict.witness = std::move(x);
                    return verdict;
                }
            }
        }
    }
    return verdict;
}

OracleVerdict sampled_oracle(const DenseRule& f, const LatticeShape& shape, std::uint64_t samples,
                             std::uint64_t seed) {
    require_shape(f, shape);
    if (samples == 0) throw InputError("bad-samples", "at least one sample is required");
    std::mt19937_64 rng(seed);
    const auto& states = f.states();
    OracleVerdict verdict;
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::vector<State> cells(shape.cell_count());
        for (auto& cell : cells) cell = states[rng() % states.size()];
        TorusConfiguration x(shape, std::move(cells));
        ++verdict.configurations_checked;
        if (sigma(global_step(f, x)) != sigma(x)) {
            verdict.status = Status::violated;
            verdict.witness = std::move(x);
            return verdict;
        }
    }
    return verdict;
}

}  // namespace ncca
