#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "ncca/enumeration.hpp"
#include "ncca/simulate.hpp"

namespace ncca {

using Json = nlohmann::json;
using AnyRule = std::variant<DenseRule, ParametricRule>;

// Rule files:
//   {"dimension", "states", "kind": "dense", "table": [...]}  (config_index order)
//   {"dimension", "states", "kind": "parametric", "eta", "lambda": [[u, w], ...],
//    "monomers": {"<dir>:<q>": value}, "dimers": {"<dir>:<p>,<dir>:<q>": value}}
// Unknown keys are rejected.
AnyRule rule_from_json(const Json& j);
Json to_json(const DenseRule& f);
Json to_json(const ParametricRule& p);

// {"shape": [...], "cells": [...]} row-major.
TorusConfiguration configuration_from_json(const Json& j);
Json to_json(const TorusConfiguration& x);

// {"status", "witness": [states by direction index] | null, "equation"}
Json to_json(const Verdict& v);
Json to_json(const OracleVerdict& v);

// Dense rule object plus "labels".
Json catalog_line(const CatalogEntry& entry);

// "0,+1;0,+2;+1,+2;+1,-2"
LambdaSelection parse_lambda(const std::string& text, int dimension);
std::vector<State> parse_state_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);
// 64-bit FNV-1a, hex encoded; used as an input digest in reports.
std::string digest(const std::string& bytes);

}  // namespace ncca
