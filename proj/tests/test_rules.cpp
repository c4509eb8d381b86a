#include <doctest.h>

#include <cmath>
#include <random>

#include "ncca/rules.hpp"
#include "oracles.hpp"

using namespace ncca;

TEST_CASE("state sets") {
    const StateSet q({2, 0, 1});
    CHECK(q.values() == std::vector<State>{0, 1, 2});
    CHECK(q.positive() == std::vector<State>{1, 2});
    CHECK(q.zero_position() == 0);
    CHECK(StateSet({-1, 0, 3}).zero_position() == 1);
    CHECK(StateSet({-1, 0, 3}).positive() == std::vector<State>{-1, 3});
    CHECK_THROWS_AS(StateSet({1, 2}), InputError);
    CHECK_THROWS_AS(StateSet({0, 1, 1}), InputError);
    CHECK_THROWS_AS(StateSet({0}), InputError);
}

TEST_CASE("configuration index round trip") {
    for (int d = 1; d <= 3; ++d) {
        const StateSet q({0, 1, 2});
        const auto count = config_count(d, q);
        CHECK(count == static_cast<std::uint64_t>(std::pow(3, 2 * d + 1)));
        for (std::uint64_t i = 0; i < count; ++i) CHECK(config_index(index_config(i, d, q), q) == i);
    }
    // least significant digit is the centre
    CHECK(config_index(monomer(Direction::zero(), 1, 2), StateSet({0, 1})) == 1);
    CHECK(config_index(monomer(Direction::plus(1), 1, 2), StateSet({0, 1})) == 2);
    CHECK_THROWS_AS(config_count(8, StateSet({0, 1, 2, 3, 4, 5, 6})), BudgetError);
    CHECK_THROWS_AS(config_index(NeighborhoodConfig(2, {0, 0, 5, 0, 0}), StateSet({0, 1})), InputError);
}

TEST_CASE("monomers and dimers") {
    const auto m = monomer(Direction::minus(2), 3, 2);
    CHECK(m.states() == std::vector<State>{0, 0, 0, 0, 3});
    CHECK(m.nonzero_count() == 1);
    CHECK(monomer(Direction::plus(1), 0, 2).is_trivial());
    const auto dm = dimer(make_omega_pair(Direction::plus(1), Direction::minus(2)), 1, 2, 2);
    CHECK(dm[Direction::plus(1)] == 1);
    CHECK(dm[Direction::minus(2)] == 2);
    CHECK(homogeneous(2, 2).states() == std::vector<State>(5, 2));
}

TEST_CASE("dense rule construction") {
    const StateSet q({0, 1});
    std::vector<State> table(32, 0);
    CHECK_NOTHROW(DenseRule(2, q, table));
    table.pop_back();
    CHECK_THROWS_AS(DenseRule(2, q, table), InputError);
    table.push_back(5);
    CHECK_THROWS_AS(DenseRule(2, q, table), InputError);

    const auto id = oracle::identity_rule(2, q);
    for (std::uint64_t i = 0; i < id.table_size(); ++i) {
        const auto n = index_config(i, 2, q);
        CHECK(id(n) == n[Direction::zero()]);
        CHECK(evaluate(id, n) == n[Direction::zero()]);
    }
    CHECK(id.monomer_value(Direction::zero(), 1) == 1);
    CHECK(id.monomer_value(Direction::plus(1), 1) == 0);
}

TEST_CASE("monomer expansion sums single-direction restrictions") {
    std::mt19937_64 rng(11);
    const StateSet q({0, 1, 2});
    for (int t = 0; t < 20; ++t) {
        const auto f = oracle::random_dense(2, q, rng);
        const auto n = index_config(rng() % f.table_size(), 2, q);
        State expected = 0;
        for (Direction v : direction_set(2)) expected += f(monomer(v, n[v], 2));
        CHECK(monomer_expansion(f, n) == expected);
    }
    // the identity's expansion of H_q is q
    const auto id = oracle::identity_rule(2, q);
    for (State s : q.values()) CHECK(monomer_expansion(id, homogeneous(s, 2)) == s);
}

TEST_CASE("rotation by a quarter turn") {
    CHECK(rotate90(Direction::plus(1)) == Direction::plus(2));
    CHECK(rotate90(Direction::plus(2)) == Direction::minus(1));
    CHECK(rotate90(Direction::minus(1)) == Direction::minus(2));
    CHECK(rotate90(Direction::minus(2)) == Direction::plus(1));
    CHECK(rotate90(Direction::zero()) == Direction::zero());
    const StateSet q({0, 1, 2});
    for (std::uint64_t i = 0; i < config_count(2, q); ++i) {
        const auto n = index_config(i, 2, q);
        CHECK(rotate90(rotate90(rotate90(rotate90(n)))) == n);
    }
    CHECK(is_rotation_symmetric(oracle::identity_rule(2, q)));
    CHECK_FALSE(is_rotation_symmetric(oracle::shift_rule(2, q, Direction::plus(1))));
    // sum of the four sides, clipped, is rotation symmetric
    const auto sides = DenseRule::from_function(2, q, [](const NeighborhoodConfig& n) {
        return std::min<State>(2, n[Direction::plus(1)] + n[Direction::minus(1)] + n[Direction::plus(2)] +
                                      n[Direction::minus(2)]);
    });
    CHECK(is_rotation_symmetric(sides));
}

TEST_CASE("parametric rules store only nonzero monomers and selection dimers") {
    const StateSet q({0, 1, 2});
    ParametricRule p(2, q, Direction::zero(), canonical_lambda(2));
    p.set_monomer(Direction::plus(1), 2, 1);
    CHECK(p.monomer_value(Direction::plus(1), 2) == 1);
    CHECK(p.monomer_value(Direction::plus(1), 0) == 0);
    const auto pair = canonical_lambda(2).pairs()[2];
    p.set_dimer(pair, 1, 2, 2);
    CHECK(p.dimer_value(pair, 1, 2) == 2);
    // a zero entry collapses the dimer to a monomer
    CHECK(p.dimer_value(pair, 0, 2) == p.monomer_value(pair.second, 2));
    CHECK_THROWS_AS(p.set_monomer(Direction::plus(1), 0, 1), InputError);
    CHECK_THROWS_AS(p.set_monomer(Direction::plus(1), 1, 7), InputError);
    CHECK_THROWS_AS(p.set_dimer(matching_pair(pair), 1, 1, 0), InputError);
}
