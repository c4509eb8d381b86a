#include "ncca/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ncca {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw InputError("bad-json", what + " must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw InputError("unknown-key", "unknown key '" + key + "' in " + what);
    for (const auto& key : allowed)
        if (!j.contains(key)) throw InputError("missing-key", "missing key '" + key + "' in " + what);
}

State parse_state(std::string_view text) {
    State value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || begin == end)
        throw InputError("bad-number", "malformed integer '" + std::string(text) + "'");
    return value;
}

template <class T>
T as_integer(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw InputError("bad-json", what + " must be an integer");
    return j.get<T>();
}

StateSet states_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("bad-json", "\"states\" must be an array");
    std::vector<State> states;
    for (const auto& s : j) states.push_back(as_integer<State>(s, "a state"));
    return StateSet(std::move(states));
}

// "<dir>:<q>"
std::pair<Direction, State> parse_slot(std::string_view text, int dimension) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw InputError("bad-key", "expected '<dir>:<state>', got '" + std::string(text) + "'");
    return {parse_direction(text.substr(0, colon), dimension), parse_state(text.substr(colon + 1))};
}

std::string slot_key(Direction v, State q) { return to_string(v) + ":" + std::to_string(q); }

}  // namespace

AnyRule rule_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw InputError("bad-json", "rule file needs a string \"kind\"");
    const std::string kind = j["kind"];
    if (kind == "dense") {
        require_keys(j, {"dimension", "states", "kind", "table"}, "dense rule");
        const int d = as_integer<int>(j["dimension"], "\"dimension\"");
        auto states = states_from_json(j["states"]);
        if (!j["table"].is_array()) throw InputError("bad-json", "\"table\" must be an array");
        std::vector<State> table;
        table.reserve(j["table"].size());
        for (const auto& v : j["table"]) table.push_back(as_integer<State>(v, "a table entry"));
        return DenseRule(d, std::move(states), table);
    }
    if (kind != "parametric") throw InputError("bad-kind", "unknown rule kind '" + kind + "'");

    require_keys(j, {"dimension", "states", "kind", "eta", "lambda", "monomers", "dimers"}, "parametric rule");
    const int d = as_integer<int>(j["dimension"], "\"dimension\"");
    auto states = states_from_json(j["states"]);
    if (!j["eta"].is_string()) throw InputError("bad-json", "\"eta\" must be a direction string");
    const Direction eta = parse_direction(j["eta"].get<std::string>(), d);

    if (!j["lambda"].is_array()) throw InputError("bad-json", "\"lambda\" must be an array of pairs");
    std::vector<OmegaPair> pairs;
    for (const auto& p : j["lambda"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
            throw InputError("bad-json", "each lambda entry is a pair of direction strings");
        pairs.push_back(make_omega_pair(parse_direction(p[0].get<std::string>(), d),
                                        parse_direction(p[1].get<std::string>(), d)));
    }
    ParametricRule rule(d, states, eta, LambdaSelection(d, std::move(pairs)));

    if (!j["monomers"].is_object()) throw InputError("bad-json", "\"monomers\" must be an object");
    std::set<std::pair<int, State>> seen_monomers;
    for (const auto& [key, value] : j["monomers"].items()) {
        const auto [v, q] = parse_slot(key, d);
        if (!seen_monomers.insert({v.index(), q}).second) throw InputError("duplicate-key", "duplicate monomer " + key);
        rule.set_monomer(v, q, as_integer<State>(value, "monomer " + key));
    }
    const auto positive = states.positive();
    if (seen_monomers.size() != (2 * d + 1) * positive.size())
        throw InputError("missing-key", "every monomer (direction, nonzero state) needs a value");

    if (!j["dimers"].is_object()) throw InputError("bad-json", "\"dimers\" must be an object");
    std::set<std::tuple<OmegaPair, State, State>> seen_dimers;
    for (const auto& [key, value] : j["dimers"].items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos) throw InputError("bad-key", "expected '<dir>:<p>,<dir>:<q>', got '" + key + "'");
        auto [u, p] = parse_slot(std::string_view(key).substr(0, comma), d);
        auto [w, q] = parse_slot(std::string_view(key).substr(comma + 1), d);
        const OmegaPair pair = make_omega_pair(u, w);
        if (pair.first != u) std::swap(p, q);
        if (!seen_dimers.insert({pair, p, q}).second) throw InputError("duplicate-key", "duplicate dimer " + key);
        rule.set_dimer(pair, p, q, as_integer<State>(value, "dimer " + key));
    }
    if (seen_dimers.size() != static_cast<std::size_t>(d) * d * positive.size() * positive.size())
        throw InputError("missing-key", "every selection dimer with nonzero states needs a value");
    return rule;
}

Json to_json(const DenseRule& f) {
    return Json{{"dimension", f.dimension()}, {"states", f.states().values()}, {"kind", "dense"}, {"table", f.table()}};
}

Json to_json(const ParametricRule& p) {
    Json lambda = Json::array();
    for (const auto& pair : p.lambda().pairs()) lambda.push_back({to_string(pair.first), to_string(pair.second)});
    Json monomers = Json::object();
    const auto positive = p.states().positive();
    for (Direction v : direction_set(p.dimension()))
        for (State q : positive) monomers[slot_key(v, q)] = p.monomer_value(v, q);
    Json dimers = Json::object();
    for (const auto& pair : p.lambda().pairs())
        for (State a : positive)
            for (State b : positive)
                dimers[slot_key(pair.first, a) + "," + slot_key(pair.second, b)] = p.dimer_value(pair, a, b);
    return Json{{"dimension", p.dimension()}, {"states", p.states().values()}, {"kind", "parametric"},
                {"eta", to_string(p.eta())},  {"lambda", lambda},
                {"monomers", monomers},       {"dimers", dimers}};
}

TorusConfiguration configuration_from_json(const Json& j) {
    require_keys(j, {"shape", "cells"}, "configuration");
    if (!j["shape"].is_array() || !j["cells"].is_array())
        throw InputError("bad-json", "\"shape\" and \"cells\" must be arrays");
    std::vector<int> dims;
    for (const auto& n : j["shape"]) dims.push_back(as_integer<int>(n, "a shape entry"));
    std::vector<State> cells;
    for (const auto& c : j["cells"]) cells.push_back(as_integer<State>(c, "a cell state"));
    return TorusConfiguration(LatticeShape(std::move(dims)), std::move(cells));
}

Json to_json(const TorusConfiguration& x) { return Json{{"shape", x.shape().dims()}, {"cells", x.cells()}}; }

Json to_json(const Verdict& v) {
    return Json{{"status", v.conserving() ? "conserving" : "violated"},
                {"witness", v.witness ? Json(v.witness->states()) : Json(nullptr)},
                {"equation", v.conserving() ? Json(nullptr) : Json(equation_tag(v.equation))}};
}

Json to_json(const OracleVerdict& v) {
    return Json{{"status", v.conserving() ? "conserving" : "violated"},
                {"witness", v.witness ? to_json(*v.witness) : Json(nullptr)},
                {"configurations_checked", v.configurations_checked}};
}

Json catalog_line(const CatalogEntry& entry) {
    Json j = to_json(entry.rule);
    j["labels"] = entry.label.tags();
    return j;
}

LambdaSelection parse_lambda(const std::string& text, int dimension) {
    std::vector<OmegaPair> pairs;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        const auto comma = item.find(',');
        if (comma == std::string::npos) throw InputError("bad-lambda", "expected 'u,w' in '" + item + "'");
        pairs.push_back(make_omega_pair(parse_direction(item.substr(0, comma), dimension),
                                        parse_direction(item.substr(comma + 1), dimension)));
    }
    return LambdaSelection(dimension, std::move(pairs));
}

std::vector<State> parse_state_list(const std::string& text) {
    std::vector<State> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_state(item));
    if (out.empty()) throw InputError("bad-list", "empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (State v : parse_state_list(text)) {
        if (v < 0 || v > (State{1} << 30)) throw InputError("bad-list", "value out of range in '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("io", "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError("bad-json", path.string() + ": " + e.what());
    }
}

std::string digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ncca
