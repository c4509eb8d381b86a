// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "ncca/enumeration.hpp"
#include "ncca/simulate.hpp"
#include "oracles.hpp"

using namespace ncca;

namespace {

const StateSet kBinary({0, 1});
const StateSet kTernary({0, 1, 2});

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int number, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0 && seconds > limit_seconds) {
        out.pass = false;
        out.detail += "; over the time limit";
    }
    if (!out.pass) ++failures;
    std::printf("%s criterion %d: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", number, out.detail.c_str(), seconds);
    std::fflush(stdout);
}

int count_if(const std::vector<CatalogEntry>& c, const std::function<bool(const RuleLabel&)>& pred) {
    int n = 0;
    for (const auto& e : c) n += pred(e.label);
    return n;
}

std::string label_summary(const std::vector<CatalogEntry>& c) {
    std::ostringstream s;
    s << c.size() << " rules, identity " << count_if(c, [](const RuleLabel& l) { return l.identity; })
      << ", shift " << count_if(c, [](const RuleLabel& l) { return !l.shifts.empty(); })
      << ", traffic " << count_if(c, [](const RuleLabel& l) { return !l.traffic.empty(); });
    return s.str();
}

// identity, shifts and traffic rules partition the catalog
bool partitioned(const std::vector<CatalogEntry>& c, int shifts, int traffic) {
    for (const auto& e : c) {
        const int kinds = e.label.identity + !e.label.shifts.empty() + !e.label.traffic.empty();
        if (kinds != 1) return false;
    }
    return count_if(c, [](const RuleLabel& l) { return l.identity; }) == 1 &&
           count_if(c, [](const RuleLabel& l) { return !l.shifts.empty(); }) == shifts &&
           count_if(c, [](const RuleLabel& l) { return !l.traffic.empty(); }) == traffic;
}

std::vector<CatalogEntry> binary_plane, ternary_plane, binary_space;

}  // namespace

int main() {
    criterion(1, 1.0, [] {
        binary_plane = enumerate_ncca(EnumerationRequest{2, kBinary});
        return Outcome{binary_plane.size() == 9 && partitioned(binary_plane, 4, 4), label_summary(binary_plane)};
    });

    criterion(2, 600.0, [] {
        ternary_plane = enumerate_ncca(EnumerationRequest{2, kTernary});
        const int ext = count_if(ternary_plane, [](const RuleLabel& l) { return l.is_axis_extension(); });
        return Outcome{ternary_plane.size() == 1327 && ext == 287,
                       std::to_string(ternary_plane.size()) + " rules, " + std::to_string(ext) + " axis extensions"};
    });

    criterion(3, 60.0, [] {
        binary_space = enumerate_ncca(EnumerationRequest{3, kBinary});
        return Outcome{binary_space.size() == 13 && partitioned(binary_space, 6, 6), label_summary(binary_space)};
    });

    criterion(4, 0, [] {
        const auto catalog = enumerate_ncca(EnumerationRequest{1, kBinary});
        std::set<std::vector<std::uint16_t>> swept, found;
        std::vector<int> numbers;
        for (int number = 0; number < 256; ++number) {
            const auto f = oracle::elementary(number);
            if (exhaustive_oracle(f, LatticeShape({7})).conserving()) {
                swept.insert(f.digits());
                numbers.push_back(number);
            }
        }
        for (const auto& e : catalog) found.insert(e.rule.digits());
        std::string list;
        for (int n : numbers) list += (list.empty() ? "" : " ") + std::to_string(n);
        return Outcome{catalog.size() == 5 && found == swept,
                       std::to_string(catalog.size()) + " enumerated, sweep of 256 on a 7-ring keeps {" + list + "}"};
    });

    criterion(5, 0, [] {
        std::vector<DenseRule> rules;
        for (const auto* c : {&binary_plane, &ternary_plane, &binary_space})
            for (const auto& e : *c) rules.push_back(e.rule);
        std::mt19937_64 rng(20240501);
        for (int t = 0; t < 200; ++t) rules.push_back(oracle::random_dense(2, kBinary, rng));

        int disagreements = 0, exhaustive_runs = 0, infeasible = 0, conserving = 0;
        for (const auto& f : rules) {
            const bool decided = is_number_conserving(f).conserving();
            const bool support = finite_support_oracle(f).conserving();
            if (decided != support) ++disagreements;
            conserving += decided;
            try {
                const LatticeShape shape(std::vector<int>(f.dimension(), 5));
                const bool full = exhaustive_oracle(f, shape).conserving();
                ++exhaustive_runs;
                if (full != decided) ++disagreements;
            } catch (const BudgetError&) {
                ++infeasible;
            }
        }
        std::ostringstream s;
        s << rules.size() << " rules (" << conserving << " conserving), " << disagreements
          << " disagreements; exhaustive torus check ran on " << exhaustive_runs << ", beyond the 2^26 budget for "
          << infeasible << " (ternary and d=3 rules; finite-support oracle only)";
        return Outcome{disagreements == 0 && exhaustive_runs == 209, s.str()};
    });

    criterion(6, 0, [] {
        std::mt19937_64 rng(6);
        struct Case {
            DenseRule rule;
            bool conserving;
        };
        std::vector<Case> cases;
        for (const auto* c : {&binary_plane, &ternary_plane, &binary_space})
            for (const auto& e : *c) cases.push_back({e.rule, true});
        for (int t = 0; t < 50; ++t) {
            const auto f = oracle::random_dense(2, t % 2 ? kBinary : kTernary, rng);
            cases.push_back({f, is_number_conserving(f).conserving()});
        }

        // per dimension: canonical, the 2D proof selection or the 3D ones, and others
        std::map<int, std::vector<LambdaSelection>> selections;
        for (int d : {2, 3}) {
            auto all = all_lambda_selections(d);
            auto& chosen = selections[d];
            chosen.push_back(canonical_lambda(d));
            if (d == 2) {
                chosen.push_back(oracle::leading_q1_formulation().lambda);
                chosen.push_back(oracle::leading_q3_formulation().lambda);
            } else {
                chosen.push_back(oracle::three_dim_formulation().lambda);
                chosen.push_back(oracle::three_dim_listed_formulation().lambda);
            }
            for (std::size_t i = 1; chosen.size() < 7; i += 5) {
                const auto& candidate = all[i % all.size()];
                if (std::find(chosen.begin(), chosen.end(), candidate) == chosen.end()) chosen.push_back(candidate);
            }
        }
        std::map<std::tuple<int, std::size_t, int, std::size_t>, ReconstructionPlan> plans;
        auto plan_for = [&](const DenseRule& f, Direction eta, std::size_t s) -> const ReconstructionPlan& {
            const int d = f.dimension();
            const auto key = std::make_tuple(d, f.states().size(), eta.index(), s);
            auto it = plans.find(key);
            if (it == plans.end())
                it = plans.emplace(key, ReconstructionPlan(d, f.states(), eta, selections[d][s])).first;
            return it->second;
        };

        int mismatches = 0, formulations = 0;
        for (const auto& c : cases) {
            const int d = c.rule.dimension();
            for (Direction eta : direction_set(d)) {
                for (std::size_t s = 0; s < selections[d].size(); ++s) {
                    ++formulations;
                    if (is_number_conserving(c.rule, plan_for(c.rule, eta, s)).conserving() != c.conserving)
                        ++mismatches;
                }
            }
        }
        // printed 2D conditions, leading q1 and leading q3
        int printed_mismatches = 0;
        std::uint64_t printed_checks = 0;
        for (const auto* c : {&binary_plane, &ternary_plane}) {
            for (const auto& e : *c) {
                const oracle::Lookup look = [&](const NeighborhoodConfig& n) { return e.rule(n); };
                for (std::uint64_t i = 0; i < e.rule.table_size(); ++i) {
                    const auto n = index_config(i, 2, e.rule.states());
                    const State q1 = n[Direction::plus(2)], q2 = n[Direction::minus(1)],
                                q3 = n[Direction::zero()], q4 = n[Direction::plus(1)], q5 = n[Direction::minus(2)];
                    const State a = oracle::printed_leading_q1(look, q1, q2, q3, q4, q5);
                    const State b = oracle::printed_leading_q3(look, q1, q2, q3, q4, q5);
                    ++printed_checks;
                    if (a != b || a != e.rule(n)) ++printed_mismatches;
                }
            }
        }
        std::ostringstream s;
        s << cases.size() << " rules x (eta, selection) = " << formulations << " verdicts, " << mismatches
          << " mismatches; printed leading-q1 vs leading-q3 conditions on " << printed_checks << " configurations, "
          << printed_mismatches << " mismatches";
        return Outcome{mismatches == 0 && printed_mismatches == 0, s.str()};
    });

    criterion(7, 0, [] {
        const auto listed = oracle::three_dim_listed_formulation();
        const auto expansion = oracle::three_dim_formulation();
        const auto catalog = enumerate_ncca(EnumerationRequest{3, kTernary});
        std::mt19937_64 rng(77);
        std::uniform_int_distribution<State> draw(0, 2);
        int mismatches = 0, identity_mismatches = 0, support_failures = 0;
        for (int t = 0; t < 1000; ++t) {
            const auto& f = catalog[rng() % catalog.size()].rule;
            if (t < 50 && !finite_support_oracle(f).conserving()) ++support_failures;
            State q[7];
            for (auto& v : q) v = draw(rng);
            const auto n = oracle::slots(q[0], q[1], q[2], q[3], q[4], q[5], q[6]);
            const oracle::Lookup look = [&](const NeighborhoodConfig& m) { return f(m); };
            const State printed = oracle::printed_three_dim(look, q[0], q[1], q[2], q[3], q[4], q[5], q[6]);
            if (reconstruct(f, n, listed.eta, listed.lambda) != printed || printed != f(n)) ++mismatches;

            // term-by-term: the expansion is the general identity at its own formulation
            const oracle::ValueFamily values(3, kTernary, rng);
            const oracle::Lookup generic = [&](const NeighborhoodConfig& m) { return values(m); };
            if (oracle::printed_three_dim(generic, q[0], q[1], q[2], q[3], q[4], q[5], q[6]) !=
                reconstruct(values, n, expansion.eta, expansion.lambda))
                ++identity_mismatches;
        }
        std::ostringstream s;
        s << "1000 draws over " << catalog.size() << " d=3 ternary conserving rules: " << mismatches
          << " mismatches; as a linear identity the expansion matches its own (eta=+2) formulation with "
          << identity_mismatches << " mismatches";
        return Outcome{mismatches == 0 && identity_mismatches == 0 && support_failures == 0, s.str()};
    });

    criterion(8, 600.0, [] {
        std::ostringstream s;
        bool ok = true;
        for (const auto& q : {kBinary, kTernary, StateSet({0, 1, 2, 3})}) {
            const auto catalog = enumerate_rnca(q);
            const bool only_identity = catalog.size() == 1 && catalog[0].rule == oracle::identity_rule(2, q);
            ok = ok && only_identity;
            s << "|Q|=" << q.size() << ": " << catalog.size() << (only_identity ? " (identity)" : " (review)") << "; ";
            if (!only_identity)
                for (const auto& e : catalog)
                    if (!e.label.identity) s << "non-identity rule flagged; ";
        }
        return Outcome{ok, s.str()};
    });

    criterion(9, 0, [] {
        int prescreen_failures = 0;
        for (const auto* c : {&binary_plane, &ternary_plane, &binary_space})
            for (const auto& e : *c) prescreen_failures += !prescreen(e.rule).passed();

        std::mt19937_64 rng(99);
        const auto lambda = canonical_lambda(2);
        int missed = 0, by_prescreen = 0;
        for (int t = 0; t < 100; ++t) {
            const auto& f = ternary_plane[rng() % ternary_plane.size()].rule;
            const auto& pair = lambda.pairs()[rng() % lambda.size()];
            const State a = 1 + static_cast<State>(rng() % 2), b = 1 + static_cast<State>(rng() % 2);
            const auto n = dimer(pair, a, b, 2);
            const State old = f(n);
            State changed = old + (rng() % 2 ? 1 : -1);
            if (!kTernary.contains(changed)) changed = old + (old + 1 <= 2 ? 1 : -1);
            const auto index = config_index(n, kTernary);
            auto digits = f.digits();
            digits[index] = static_cast<std::uint16_t>(kTernary.position_or_throw(changed));
            const auto g = DenseRule::from_digits(2, kTernary, digits);
            const auto v = is_number_conserving(g);
            if (v.conserving()) ++missed;
            by_prescreen += !prescreen(g).passed();
        }
        std::ostringstream s;
        s << prescreen_failures << " catalog rules fail a prescreen; 100 dimer mutations, " << missed << " missed, "
          << by_prescreen << " caught by prescreen";
        return Outcome{prescreen_failures == 0 && missed == 0, s.str()};
    });

    return failures == 0 ? 0 : 1;
}
