#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <set>

#include "ncca/enumeration.hpp"
#include "oracles.hpp"

using namespace ncca;

namespace {

const StateSet kBinary({0, 1});
const StateSet kTernary({0, 1, 2});

std::vector<std::vector<std::uint16_t>> tables(const std::vector<CatalogEntry>& catalog) {
    std::vector<std::vector<std::uint16_t>> out;
    for (const auto& e : catalog) out.push_back(e.rule.digits());
    return out;
}

int count_with(const std::vector<CatalogEntry>& catalog, bool (*pred)(const RuleLabel&)) {
    return static_cast<int>(std::count_if(catalog.begin(), catalog.end(), [&](const auto& e) { return pred(e.label); }));
}

}  // namespace

TEST_CASE("free parameter count") {
    CHECK(free_parameter_count(2, kBinary) == 9);
    CHECK(free_parameter_count(2, kTernary) == 26);
    CHECK(free_parameter_count(3, kBinary) == 16);
    CHECK(free_parameter_count(1, kBinary) == 4);
}

TEST_CASE("binary plane catalog") {
    const auto catalog = enumerate_ncca(EnumerationRequest{2, kBinary});
    REQUIRE(catalog.size() == 9);
    CHECK(count_with(catalog, [](const RuleLabel& l) { return l.identity; }) == 1);
    CHECK(count_with(catalog, [](const RuleLabel& l) { return !l.shifts.empty(); }) == 4);
    CHECK(count_with(catalog, [](const RuleLabel& l) { return !l.traffic.empty(); }) == 4);
    // every binary conserving rule acts along one axis
    CHECK(count_with(catalog, [](const RuleLabel& l) { return l.is_axis_extension(); }) == 9);
    for (const auto& e : catalog) CHECK(is_number_conserving(e.rule).conserving());
    CHECK(std::is_sorted(catalog.begin(), catalog.end(),
                         [](const auto& a, const auto& b) { return a.rule.digits() < b.rule.digits(); }));
}

TEST_CASE("unpruned parametric sweep finds the same binary rules") {
    const auto brute = oracle::brute_force_parametric(2, kBinary);
    CHECK(brute.candidates == 512);
    const auto catalog = enumerate_ncca(EnumerationRequest{2, kBinary});
    std::vector<std::vector<std::uint16_t>> found;
    for (const auto& f : brute.rules) found.push_back(f.digits());
    CHECK(found == tables(catalog));

    const auto line = oracle::brute_force_parametric(1, kTernary);
    CHECK(line.rules.size() == enumerate_ncca(EnumerationRequest{1, kTernary}).size());
}

TEST_CASE("binary space catalog") {
    const auto catalog = enumerate_ncca(EnumerationRequest{3, kBinary});
    REQUIRE(catalog.size() == 13);
    CHECK(count_with(catalog, [](const RuleLabel& l) { return l.identity; }) == 1);
    CHECK(count_with(catalog, [](const RuleLabel& l) { return !l.shifts.empty(); }) == 6);
    CHECK(count_with(catalog, [](const RuleLabel& l) { return !l.traffic.empty(); }) == 6);
}

TEST_CASE("binary line catalog matches a sweep of the elementary rules") {
    const auto catalog = enumerate_ncca(EnumerationRequest{1, kBinary});
    std::set<std::vector<std::uint16_t>> conserving;
    for (int number = 0; number < 256; ++number) {
        const auto f = oracle::elementary(number);
        if (exhaustive_oracle(f, LatticeShape({7})).conserving()) conserving.insert(f.digits());
    }
    CHECK(conserving.size() == 5);
    const auto found = tables(catalog);
    CHECK(std::set(found.begin(), found.end()) == conserving);
    for (int number : {204, 170, 240, 184, 226}) CHECK(conserving.count(oracle::elementary(number).digits()) == 1);
}

TEST_CASE("ternary plane catalog") {
    const auto catalog = enumerate_ncca(EnumerationRequest{2, kTernary});
    REQUIRE(catalog.size() == 1327);
    CHECK(count_with(catalog, [](const RuleLabel& l) { return l.is_axis_extension(); }) == 287);
    CHECK(enumerate_ncca(EnumerationRequest{1, kTernary}).size() == 144);

    auto request = EnumerationRequest{2, kTernary};
    request.axis_extension_only = true;
    CHECK(enumerate_ncca(request).size() == 287);

    request = EnumerationRequest{2, kTernary};
    request.passive = true;
    const auto passive = enumerate_ncca(request);
    CHECK(static_cast<int>(passive.size()) == count_with(catalog, [](const RuleLabel& l) { return l.passive; }));
    for (const auto& e : passive) CHECK(e.label.passive);
}

TEST_CASE("output is independent of scheduling") {
    const auto request = EnumerationRequest{2, kTernary};
    const auto serial = tables(enumerate_ncca_serial(request));
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        CHECK(tables(enumerate_ncca(request)) == serial);
    }
    omp_set_num_threads(saved);
}

TEST_CASE("rotation-symmetric catalogs") {
    for (const auto& q : {kBinary, kTernary, StateSet({0, 1, 2, 3})}) {
        const auto catalog = enumerate_rnca(q);
        REQUIRE(catalog.size() == 1);
        CHECK(catalog[0].label.identity);
        CHECK(catalog[0].rule == oracle::identity_rule(2, q));
    }
    // the constrained search agrees with filtering the full catalog
    std::set<std::vector<std::uint16_t>> filtered;
    for (const auto& e : enumerate_ncca(EnumerationRequest{2, kTernary}))
        if (is_rotation_symmetric(e.rule)) filtered.insert(e.rule.digits());
    CHECK(filtered.size() == enumerate_rnca(kTernary).size());
}

TEST_CASE("classification") {
    const auto label = classify(oracle::extend_along_axis(oracle::elementary(184), 2, 1));
    CHECK(label.tags() == std::vector<std::string>{"traffic:-1", "axis_extension:1"});
    CHECK(classify(oracle::shift_rule(2, kBinary, Direction::plus(2))).tags() ==
          std::vector<std::string>{"shift:+2", "axis_extension:2"});
    CHECK(classify(oracle::identity_rule(2, kBinary)).tags() ==
          std::vector<std::string>{"identity", "axis_extension:1", "axis_extension:2", "rotation_symmetric", "passive"});
    CHECK_THROWS_AS(classify(oracle::xor_rule()), NotConservingError);
}

TEST_CASE("estimates and limits") {
    const auto e = estimate_search(EnumerationRequest{2, kTernary});
    CHECK(e.table_size == 243);
    CHECK(e.free_parameters == 26);
    auto big = EnumerationRequest{8, StateSet({0, 1, 2, 3, 4, 5, 6})};
    CHECK_THROWS_AS(enumerate_ncca(big), BudgetError);
    auto rot = EnumerationRequest{3, kBinary};
    rot.rotation_symmetric = true;
    CHECK_THROWS_AS(enumerate_ncca(rot), InputError);
}
