#include "ncca/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace ncca {

std::vector<std::string> RuleLabel::tags() const {
    std::vector<std::string> out;
    if (identity) out.emplace_back("identity");
    for (Direction v : shifts) out.push_back("shift:" + to_string(v));
    for (Direction v : traffic) out.push_back("traffic:" + to_string(v));
    for (int k : axis_extensions) out.push_back("axis_extension:" + std::to_string(k));
    if (rotation_symmetric) out.emplace_back("rotation_symmetric");
    if (passive) out.emplace_back("passive");
    return out;
}

std::uint64_t free_parameter_count(int dimension, const StateSet& states) {
    const std::uint64_t m = states.size() - 1;
    const std::uint64_t d = static_cast<std::uint64_t>(dimension);
    return (2 * d + 1) * m + d * d * m * m;
}

namespace {

// Assignments of group values from Q with sum of weight * value == target.
// A group with a fixed value only takes that value.
void for_each_composition(const std::vector<State>& weights, const std::vector<std::optional<State>>& fixed,
                          State target, const StateSet& states,
                          const std::function<void(const std::vector<State>&)>& emit) {
    const std::size_t groups = weights.size();
    std::vector<State> suffix(groups + 1, 0);
    for (std::size_t g = groups; g-- > 0;) suffix[g] = suffix[g + 1] + weights[g];
    std::vector<State> value(groups, 0);

    std::function<void(std::size_t, State)> rec = [&](std::size_t g, State remaining) {
        if (g == groups) {
            if (remaining == 0) emit(value);
            return;
        }
        const State rest = suffix[g + 1];
        auto try_value = [&](State q) {
            const State left = remaining - weights[g] * q;
            if (left < states.min() * rest || left > states.max() * rest) return;
            value[g] = q;
            rec(g + 1, left);
        };
        if (fixed[g]) {
            try_value(*fixed[g]);
        } else {
            for (State q : states.values()) try_value(q);
        }
    };
    rec(0, target);
}

// Monomer groups for one state: weights and fixed values, in the same order
// the search assigns them (centre first, then the remaining directions).
struct MonomerGroups {
    std::vector<std::vector<Direction>> members;
    std::vector<State> weights;
    std::vector<std::optional<State>> fixed;
};

MonomerGroups monomer_groups(const EnumerationRequest& request, State q) {
    MonomerGroups g;
    const int d = request.dimension;
    g.members.push_back({Direction::zero()});
    g.weights.push_back(1);
    g.fixed.push_back(request.passive ? std::optional<State>(q) : std::nullopt);
    if (request.rotation_symmetric) {
        g.members.push_back(positive_directions(d));
        g.weights.push_back(2 * d);
        g.fixed.push_back(std::nullopt);
    } else {
        for (Direction v : positive_directions(d)) {
            g.members.push_back({v});
            g.weights.push_back(1);
            g.fixed.push_back(std::nullopt);
        }
    }
    return g;
}

void validate(const EnumerationRequest& request) {
    require_dimension(request.dimension);
    if (request.rotation_symmetric && request.dimension != 2)
        throw InputError("bad-filter", "the rotation-symmetric filter is defined for d = 2 only");
}

class StateLookup {
public:
    explicit StateLookup(const StateSet& states) : states_(states) {
        const State span = states.max() - states.min();
        if (span < (State{1} << 20)) {
            present_.assign(static_cast<std::size_t>(span) + 1, 0);
            for (State q : states.values()) present_[q - states.min()] = 1;
        }
    }
    bool contains(State v) const {
        if (present_.empty()) return states_.contains(v);
        if (v < states_.min() || v > states_.max()) return false;
        return present_[v - states_.min()] != 0;
    }

private:
    const StateSet& states_;
    std::vector<char> present_;
};

using LinearForm = ReconstructionPlan::LinearForm;

State evaluate_form(const LinearForm& form, const std::vector<State>& values) {
    State v = form.constant;
    for (const auto& c : form.terms) v += c.weight * values[c.variable];
    return v;
}

struct Constraint {
    bool equality;  // form must vanish; otherwise its value must lie in Q
    LinearForm form;
    int nonzero;
};

// Backtracking over free parameters. Monomers are fixed per work item (one
// composition per nonzero state); selection dimers are then assigned one at a
// time, and every constraint is checked as soon as its last variable is set.
class Search {
public:
    explicit Search(const EnumerationRequest& request)
        : request_(request),
          plan_(request.dimension, request.states, Direction::zero(), canonical_lambda(request.dimension)),
          lookup_(request_.states) {
        build_representatives();
        build_forms();
        build_compositions();
        build_dimer_order();
        build_buckets();
        for (int k = 0; k < plan_.variable_count(); ++k)
            variable_index_.push_back(config_index(plan_.variable_config(k), request_.states));
    }

    std::uint64_t item_count() const {
        if (infeasible_) return 0;
        std::uint64_t total = 1;
        for (const auto& c : compositions_) total *= c.size();
        return total;
    }

    void run_item(std::uint64_t item, std::vector<std::vector<std::uint16_t>>& out) const {
        std::vector<State> values(plan_.variable_count(), 0);
        for (const auto& per_state : compositions_) {
            for (const auto& [var, value] : per_state[item % per_state.size()]) values[var] = value;
            item /= per_state.size();
        }
        if (!satisfied(0, values)) return;
        descend(0, values, out);
    }

private:
    int find(int v) {
        while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
        return v;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

    void build_representatives() {
        parent_.resize(plan_.variable_count());
        std::iota(parent_.begin(), parent_.end(), 0);
        const int d = request_.dimension;
        if (request_.rotation_symmetric) {
            for (State q : request_.states.positive())
                for (Direction v : positive_directions(d))
                    unite(*plan_.monomer_variable(v, q), *plan_.monomer_variable(rotate90(v), q));
            const auto& lambda = plan_.lambda();
            for (std::size_t k = 0; k < lambda.size(); ++k) {
                const OmegaPair p = lambda.pairs()[k];
                const Direction u = rotate90(p.first), w = rotate90(p.second);
                const OmegaPair r = make_omega_pair(u, w);
                const auto target = lambda.index_of(r);
                if (!target) continue;
                for (State a : request_.states.positive())
                    for (State b : request_.states.positive()) {
                        const State ra = r.first == u ? a : b;
                        const State rb = r.first == u ? b : a;
                        unite(*plan_.dimer_variable(k, a, b), *plan_.dimer_variable(*target, ra, rb));
                    }
            }
        }
        representative_.resize(parent_.size());
        for (int v = 0; v < static_cast<int>(parent_.size()); ++v) representative_[v] = find(v);
    }

    LinearForm substitute(const LinearForm& form) const {
        std::map<int, State> merged;
        for (const auto& c : form.terms) merged[representative_[c.variable]] += c.weight;
        LinearForm out{form.constant, {}};
        for (const auto& [var, w] : merged)
            if (w != 0) out.terms.push_back({var, w});
        return out;
    }

    void add_constraint(bool equality, LinearForm form, int nonzero) {
        if (form.terms.empty()) {
            const bool ok = equality ? form.constant == 0 : lookup_.contains(form.constant);
            if (!ok) infeasible_ = true;
            return;
        }
        constraints_.push_back({equality, std::move(form), nonzero});
    }

    void build_forms() {
        const int d = request_.dimension;
        forms_.reserve(plan_.size());
        for (std::uint64_t i = 0; i < plan_.size(); ++i) forms_.push_back(substitute(plan_.form(i)));
        for (std::uint64_t i = 0; i < plan_.size(); ++i) {
            const auto n = index_config(i, d, request_.states);
            add_constraint(false, forms_[i], n.nonzero_count());
            if (request_.rotation_symmetric) {
                const std::uint64_t j = config_index(rotate90(n), request_.states);
                if (j == i) continue;
                LinearForm diff = forms_[i];
                diff.constant -= forms_[j].constant;
                for (auto c : forms_[j].terms) diff.terms.push_back({c.variable, -c.weight});
                add_constraint(true, substitute(diff), n.nonzero_count());
            }
        }
    }

    void build_compositions() {
        for (State q : request_.states.positive()) {
            const auto groups = monomer_groups(request_, q);
            std::vector<std::vector<std::pair<int, State>>> options;
            for_each_composition(groups.weights, groups.fixed, q, request_.states, [&](const std::vector<State>& vals) {
                std::vector<std::pair<int, State>> assignment;
                for (std::size_t g = 0; g < vals.size(); ++g)
                    for (Direction v : groups.members[g])
                        assignment.emplace_back(representative_[*plan_.monomer_variable(v, q)], vals[g]);
                options.push_back(std::move(assignment));
            });
            if (options.empty()) infeasible_ = true;
            compositions_.push_back(std::move(options));
        }
    }

    // Greedy: next variable is the one that completes the most constraints.
    void build_dimer_order() {
        std::vector<int> reps;
        for (int v = plan_.monomer_variable_count(); v < plan_.variable_count(); ++v)
            if (representative_[v] == v) reps.push_back(v);

        std::vector<std::vector<int>> pending(constraints_.size());
        for (std::size_t c = 0; c < constraints_.size(); ++c)
            for (const auto& t : constraints_[c].form.terms)
                if (t.variable >= plan_.monomer_variable_count()) pending[c].push_back(t.variable);

        std::vector<char> assigned(plan_.variable_count(), 0);
        for (std::size_t step = 0; step < reps.size(); ++step) {
            int best = -1;
            long best_score = -1;
            for (int v : reps) {
                if (assigned[v]) continue;
                long score = 0;
                for (const auto& vars : pending) {
                    long open = 0;
                    bool has = false;
                    for (int x : vars) {
                        if (!assigned[x]) ++open;
                        if (x == v) has = true;
                    }
                    if (has && open == 1) ++score;
                }
                if (score > best_score) {
                    best_score = score;
                    best = v;
                }
            }
            assigned[best] = 1;
            dimer_order_.push_back(best);
        }
    }

    void build_buckets() {
        std::vector<int> position(plan_.variable_count(), 0);
        for (std::size_t s = 0; s < dimer_order_.size(); ++s) position[dimer_order_[s]] = static_cast<int>(s) + 1;
        buckets_.assign(dimer_order_.size() + 1, {});
        for (const auto& c : constraints_) {
            int step = 0;
            for (const auto& t : c.form.terms) step = std::max(step, position[t.variable]);
            buckets_[step].push_back(c);
        }
        // Dense configurations first: they fail earliest.
        for (auto& bucket : buckets_)
            std::stable_sort(bucket.begin(), bucket.end(),
                             [](const Constraint& a, const Constraint& b) { return a.nonzero > b.nonzero; });
    }

    bool satisfied(std::size_t step, const std::vector<State>& values) const {
        for (const auto& c : buckets_[step]) {
            const State v = evaluate_form(c.form, values);
            if (c.equality ? v != 0 : !lookup_.contains(v)) return false;
        }
        return true;
    }

    void descend(std::size_t step, std::vector<State>& values, std::vector<std::vector<std::uint16_t>>& out) const {
        if (step == dimer_order_.size()) {
            emit(values, out);
            return;
        }
        const int var = dimer_order_[step];
        for (State q : request_.states.values()) {
            values[var] = q;
            if (satisfied(step + 1, values)) descend(step + 1, values, out);
        }
        values[var] = 0;
    }

    void emit(const std::vector<State>& values, std::vector<std::vector<std::uint16_t>>& out) const {
        std::vector<std::uint16_t> digits(forms_.size());
        for (std::size_t i = 0; i < forms_.size(); ++i)
            digits[i] = static_cast<std::uint16_t>(*request_.states.position(evaluate_form(forms_[i], values)));
        // Parameters that break the monomer sums can still close; the table
        // then belongs to another branch, so it is only kept where it
        // reproduces its own parameters.
        for (std::size_t k = 0; k < variable_index_.size(); ++k)
            if (request_.states[digits[variable_index_[k]]] != values[representative_[k]]) return;
        out.push_back(std::move(digits));
    }

    const EnumerationRequest& request_;
    ReconstructionPlan plan_;
    StateLookup lookup_;
    std::vector<int> parent_;
    std::vector<int> representative_;
    std::vector<LinearForm> forms_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::vector<std::pair<int, State>>>> compositions_;
    std::vector<int> dimer_order_;
    std::vector<std::vector<Constraint>> buckets_;
    std::vector<std::uint64_t> variable_index_;
    bool infeasible_ = false;
};

std::uint64_t table_size_or_throw(const EnumerationRequest& request) {
    try {
        return config_count(request.dimension, request.states);
    } catch (const BudgetError&) {
        const auto est = estimate_search(request);
        throw BudgetError("enumeration infeasible: |Q|^(2d+1) exceeds 2^31; " + std::to_string(est.free_parameters) +
                          " free parameters, about 10^" + std::to_string(static_cast<int>(est.log10_candidates)) +
                          " candidates before pruning");
    }
}

std::vector<CatalogEntry> finish(const EnumerationRequest& request,
                                 std::vector<std::vector<std::vector<std::uint16_t>>>& per_item) {
    std::vector<std::vector<std::uint16_t>> tables;
    for (auto& item : per_item)
        for (auto& t : item) tables.push_back(std::move(t));
    std::sort(tables.begin(), tables.end());
    tables.erase(std::unique(tables.begin(), tables.end()), tables.end());

    std::vector<CatalogEntry> out;
    for (auto& t : tables) {
        auto rule = DenseRule::from_digits(request.dimension, request.states, std::move(t));
        auto label = classify_conserving(rule);
        if (request.axis_extension_only && !label.is_axis_extension()) continue;
        out.push_back({std::move(rule), std::move(label)});
    }
    return out;
}

}  // namespace

SearchEstimate estimate_search(const EnumerationRequest& request) {
    validate(request);
    SearchEstimate est;
    const auto& states = request.states;
    try {
        est.table_size = config_count(request.dimension, states);
    } catch (const BudgetError&) {
        est.table_size = 0;
    }
    est.free_parameters = free_parameter_count(request.dimension, states);
    est.dimer_parameters = static_cast<std::uint64_t>(request.dimension) * request.dimension * (states.size() - 1) *
                           (states.size() - 1);
    est.monomer_assignments = 1;
    double log_monomers = 0;
    for (State q : states.positive()) {
        const auto groups = monomer_groups(request, q);
        std::uint64_t count = 0;
        for_each_composition(groups.weights, groups.fixed, q, states, [&](const std::vector<State>&) { ++count; });
        est.monomer_assignments *= count;
        log_monomers += count == 0 ? 0 : std::log10(static_cast<double>(count));
    }
    est.log10_candidates = log_monomers + static_cast<double>(est.dimer_parameters) *
                                              std::log10(static_cast<double>(states.size()));
    return est;
}

std::vector<CatalogEntry> enumerate_ncca(const EnumerationRequest& request) {
    validate(request);
    table_size_or_throw(request);
    const Search search(request);
    const auto items = static_cast<std::int64_t>(search.item_count());
    std::vector<std::vector<std::vector<std::uint16_t>>> per_item(items);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < items; ++i) search.run_item(static_cast<std::uint64_t>(i), per_item[i]);
    return finish(request, per_item);
}

std::vector<CatalogEntry> enumerate_ncca_serial(const EnumerationRequest& request) {
    validate(request);
    table_size_or_throw(request);
    const Search search(request);
    const auto items = search.item_count();
    std::vector<std::vector<std::vector<std::uint16_t>>> per_item(items);
    for (std::uint64_t i = 0; i < items; ++i) search.run_item(i, per_item[i]);
    return finish(request, per_item);
}

std::vector<CatalogEntry> enumerate_rnca(const StateSet& states) {
    EnumerationRequest request;
    request.dimension = 2;
    request.states = states;
    request.rotation_symmetric = true;
    return enumerate_ncca(request);
}

namespace {

bool binary(const StateSet& states) { return states.values() == std::vector<State>{0, 1}; }

bool depends_only_on_axis(const DenseRule& f, int axis) {
    const int d = f.dimension();
    const Direction up = Direction::plus(axis), down = Direction::minus(axis);
    for (std::uint64_t i = 0; i < f.table_size(); ++i) {
        const auto n = index_config(i, d, f.states());
        auto reduced = homogeneous(0, d);
        reduced[Direction::zero()] = n[Direction::zero()];
        reduced[up] = n[up];
        reduced[down] = n[down];
        if (f.at(i) != f(reduced)) return false;
    }
    return true;
}

DenseRule axis_rule(const DenseRule& f, int axis) {
    const int d = f.dimension();
    return DenseRule::from_function(1, f.states(), [&](const NeighborhoodConfig& n) {
        auto lifted = homogeneous(0, d);
        lifted[Direction::zero()] = n[Direction::zero()];
        lifted[Direction::plus(axis)] = n[Direction::plus(1)];
        lifted[Direction::minus(axis)] = n[Direction::minus(1)];
        return f(lifted);
    });
}

template <class Pred>
bool holds_everywhere(const DenseRule& f, Pred&& pred) {
    for (std::uint64_t i = 0; i < f.table_size(); ++i)
        if (f.at(i) != pred(index_config(i, f.dimension(), f.states()))) return false;
    return true;
}

}  // namespace

RuleLabel classify_conserving(const DenseRule& f) {
    RuleLabel label;
    const int d = f.dimension();
    label.identity = holds_everywhere(f, [](const NeighborhoodConfig& n) { return n[Direction::zero()]; });
    for (Direction v : positive_directions(d)) {
        if (holds_everywhere(f, [v](const NeighborhoodConfig& n) { return n[v]; })) label.shifts.push_back(v);
        // Elementary rule 184 along the axis, particles arriving from v.
        if (binary(f.states()) && holds_everywhere(f, [v](const NeighborhoodConfig& n) {
                const State c = n[Direction::zero()];
                return std::min(n[v], 1 - c) + std::min(c, n[v.negated()]);
            }))
            label.traffic.push_back(v);
    }
    for (int axis = 1; axis <= d; ++axis)
        if (depends_only_on_axis(f, axis) && is_number_conserving(axis_rule(f, axis)).conserving())
            label.axis_extensions.push_back(axis);
    label.rotation_symmetric = d == 2 && is_rotation_symmetric(f);
    label.passive = true;
    for (State q : f.states().values())
        if (f(monomer(Direction::zero(), q, d)) != q) label.passive = false;
    return label;
}

RuleLabel classify(const DenseRule& f) {
    auto verdict = is_number_conserving(f);
    if (!verdict.conserving()) throw NotConservingError(std::move(verdict));
    return classify_conserving(f);
}

}  // namespace ncca
