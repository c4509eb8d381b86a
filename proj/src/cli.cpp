#include "ncca/cli.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <omp.h>

#include "ncca/io.hpp"

namespace ncca {

namespace {

struct Outcome {
    int exit_code = kExitOk;
    Json result;
};

// Shared per-invocation state: the digests of every file read.
struct Session {
    Json inputs = Json::object();

    Json read(const std::string& path) {
        const std::string text = read_text_file(path);
        inputs[path] = digest(text);
        try {
            return Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw InputError("bad-json", path + ": " + e.what());
        }
    }

    AnyRule rule(const std::string& path) { return rule_from_json(read(path)); }

    // Parametric rules are materialized; a rule that does not close is an input error here.
    DenseRule dense_rule(const std::string& path) {
        auto any = rule(path);
        if (auto* f = std::get_if<DenseRule>(&any)) return std::move(*f);
        auto m = materialize(std::get<ParametricRule>(any));
        if (!m.ok()) throw InputError("not-closed", path + ": parameters do not describe a number-conserving rule");
        return std::move(*m.rule);
    }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("io", "cannot write " + path);
    out << text;
}

Direction eta_or_default(const std::string& text, int d) { return text.empty() ? Direction::zero() : parse_direction(text, d); }

LambdaSelection lambda_or_default(const std::string& text, int d) {
    return text.empty() ? canonical_lambda(d) : parse_lambda(text, d);
}

std::string label_kind(const std::string& tag) { return tag.substr(0, tag.find(':')); }

Json label_counts(const std::vector<CatalogEntry>& catalog) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& entry : catalog) {
        std::set<std::string> kinds;
        for (const auto& tag : entry.label.tags()) kinds.insert(label_kind(tag));
        for (const auto& k : kinds) ++counts[k];
    }
    Json j = Json::object();
    for (const auto& [k, n] : counts) j[k] = n;
    return j;
}

Json prescreen_json(const PrescreenReport& r) {
    auto check = [](const PrescreenReport::Check& c) {
        return Json{{"ok", c.ok}, {"counterexample", c.counterexample ? Json(c.counterexample->states()) : Json(nullptr)}};
    };
    return Json{{"quiescence", check(r.quiescence)},
                {"monomer_sum", check(r.monomer_sum)},
                {"matching_dimer", check(r.matching_dimer)}};
}

struct CheckArgs {
    std::string rule, eta, lambda;
};

Outcome run_check(Session& s, const CheckArgs& a) {
    auto any = s.rule(a.rule);
    std::optional<DenseRule> f;
    if (auto* dense = std::get_if<DenseRule>(&any)) {
        f = std::move(*dense);
    } else {
        auto m = materialize(std::get<ParametricRule>(any));
        if (!m.ok()) {
            Verdict v{Status::violated, m.witness, Equation::reconstruction};
            Json result = to_json(v);
            result["reason"] = m.failure == Materialized::Failure::value_outside_states ? "value-outside-states"
                                                                                      : "inconsistent-parameters";
            result["value"] = m.witness_value;
            return {kExitViolated, result};
        }
        f = std::move(*m.rule);
    }
    const int d = f->dimension();
    const auto verdict = is_number_conserving(*f, eta_or_default(a.eta, d), lambda_or_default(a.lambda, d));
    Json result = to_json(verdict);
    result["prescreen"] = prescreen_json(prescreen(*f));
    return {verdict.conserving() ? kExitOk : kExitViolated, result};
}

struct EnumerateArgs {
    int dim = 2;
    std::string states = "0,1";
    bool rotation = false, passive = false, axis_only = false, count_only = false;
    std::string out;
};

Outcome run_enumerate(const EnumerateArgs& a, std::ostream& stream) {
    EnumerationRequest request;
    request.dimension = a.dim;
    request.states = StateSet(parse_state_list(a.states));
    request.rotation_symmetric = a.rotation;
    request.passive = a.passive;
    request.axis_extension_only = a.axis_only;
    const auto estimate = estimate_search(request);
    const auto catalog = enumerate_ncca(request);

    Json summary{{"count", catalog.size()},
                 {"labels", label_counts(catalog)},
                 {"free_parameters", estimate.free_parameters},
                 {"monomer_assignments", estimate.monomer_assignments}};
    if (!a.count_only) {
        std::string text;
        for (const auto& entry : catalog) text += catalog_line(entry).dump() + "\n";
        text += Json{{"summary", summary}}.dump() + "\n";
        if (a.out.empty()) {
            stream << text;
            return {kExitOk, nullptr};
        }
        write_file(a.out, text);
        summary["out"] = a.out;
    }
    return {kExitOk, summary};
}

Outcome run_classify(Session& s, const std::string& path) {
    const auto f = s.dense_rule(path);
    const auto verdict = is_number_conserving(f);
    if (!verdict.conserving()) return {kExitViolated, to_json(verdict)};
    const auto label = classify_conserving(f);
    return {kExitOk, Json{{"status", "conserving"}, {"labels", label.tags()}}};
}

struct SimulateArgs {
    std::string rule, config, out;
    int steps = 1;
};

Outcome run_simulate(Session& s, const SimulateArgs& a) {
    const auto f = s.dense_rule(a.rule);
    auto x = configuration_from_json(s.read(a.config));
    if (x.shape().dimension() != f.dimension()) throw InputError("mismatch", "rule and configuration dimension differ");
    for (State q : x.cells())
        if (!f.states().contains(q)) throw InputError("bad-config", "cell state " + std::to_string(q) + " not in Q");
    Json sums = Json::array({sigma(x)});
    for (int t = 0; t < a.steps; ++t) {
        x = global_step(f, x);
        sums.push_back(sigma(x));
    }
    Json result{{"steps", a.steps}, {"sigma", sums}};
    if (a.out.empty()) {
        result["final"] = to_json(x);
    } else {
        write_file(a.out, to_json(x).dump() + "\n");
        result["out"] = a.out;
    }
    return {kExitOk, result};
}

struct OracleArgs {
    std::string rule, mode, shape;
    std::uint64_t samples = 1000, seed = 0, budget = kDefaultExhaustiveBudget;
};

Outcome run_oracle(Session& s, const OracleArgs& a) {
    const auto f = s.dense_rule(a.rule);
    const int d = f.dimension();
    const LatticeShape shape(a.shape.empty() ? std::vector<int>(d, 5) : parse_int_list(a.shape));
    OracleVerdict v;
    Json result;
    if (a.mode == "exhaustive") {
        v = exhaustive_oracle(f, shape, a.budget);
        result = to_json(v);
        result["shape"] = shape.dims();
    } else if (a.mode == "finite-support") {
        v = finite_support_oracle(f);
        result = to_json(v);
    } else {
        v = sampled_oracle(f, shape, a.samples, a.seed);
        result = to_json(v);
        result["shape"] = shape.dims();
        result["samples"] = a.samples;
        result["seed"] = a.seed;
    }
    result["mode"] = a.mode;
    return {v.conserving() ? kExitOk : kExitViolated, result};
}

struct ConvertArgs {
    std::string rule, to, eta, lambda, out;
};

Outcome run_convert(Session& s, const ConvertArgs& a) {
    auto any = s.rule(a.rule);
    Json converted;
    if (a.to == "dense") {
        if (auto* f = std::get_if<DenseRule>(&any)) {
            converted = to_json(*f);
        } else {
            auto m = materialize(std::get<ParametricRule>(any));
            if (!m.ok()) {
                Json result = to_json(Verdict{Status::violated, m.witness, Equation::reconstruction});
                result["value"] = m.witness_value;
                return {kExitViolated, result};
            }
            converted = to_json(*m.rule);
        }
    } else {
        DenseRule f = std::holds_alternative<DenseRule>(any) ? std::get<DenseRule>(any) : [&] {
            auto m = materialize(std::get<ParametricRule>(any));
            if (!m.ok()) throw InputError("not-closed", a.rule + ": parameters do not describe a number-conserving rule");
            return std::move(*m.rule);
        }();
        const int d = f.dimension();
        const Direction eta = eta_or_default(a.eta, d);
        const auto lambda = lambda_or_default(a.lambda, d);
        const auto verdict = is_number_conserving(f, eta, lambda);
        if (!verdict.conserving()) return {kExitViolated, to_json(verdict)};
        converted = to_json(extract_params(f, eta, lambda));
    }
    if (a.out.empty()) return {kExitOk, Json{{"rule", converted}}};
    write_file(a.out, converted.dump(2) + "\n");
    return {kExitOk, Json{{"kind", a.to}, {"out", a.out}}};
}

Json error_json(const std::string& code, const std::string& message) {
    return Json{{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Number-conserving cellular automata toolkit", "ncca"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);
    int threads = 0;
    app.add_option("--threads", threads, "Worker cap for enumeration and oracles")->check(CLI::PositiveNumber);

    CheckArgs check;
    auto* check_cmd = app.add_subcommand("check", "Decide number conservation of a rule");
    check_cmd->add_option("--rule", check.rule, "Rule file")->required();
    check_cmd->add_option("--eta", check.eta, "Leading direction, e.g. +1");
    check_cmd->add_option("--lambda", check.lambda, "Selection, e.g. 0,+1;0,+2;+1,+2;+1,-2");

    EnumerateArgs enumerate;
    auto* enumerate_cmd = app.add_subcommand("enumerate", "List every number-conserving rule");
    enumerate_cmd->add_option("--dim", enumerate.dim, "Dimension")->required();
    enumerate_cmd->add_option("--states", enumerate.states, "State set, e.g. 0,1,2")->required();
    enumerate_cmd->add_flag("--rotation-symmetric", enumerate.rotation);
    enumerate_cmd->add_flag("--passive", enumerate.passive);
    enumerate_cmd->add_flag("--axis-extension-only", enumerate.axis_only);
    enumerate_cmd->add_flag("--count-only", enumerate.count_only);
    enumerate_cmd->add_option("--out", enumerate.out, "Catalog file (JSON Lines)");

    std::string classify_rule;
    auto* classify_cmd = app.add_subcommand("classify", "Label a number-conserving rule");
    classify_cmd->add_option("--rule", classify_rule, "Rule file")->required();

    SimulateArgs simulate;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run the global rule on a torus");
    simulate_cmd->add_option("--rule", simulate.rule, "Rule file")->required();
    simulate_cmd->add_option("--config", simulate.config, "Configuration file")->required();
    simulate_cmd->add_option("--steps", simulate.steps, "Number of steps")->required()->check(CLI::NonNegativeNumber);
    simulate_cmd->add_option("--out", simulate.out, "Final configuration file");

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force conservation check on a torus");
    oracle_cmd->add_option("--rule", oracle.rule, "Rule file")->required();
    oracle_cmd->add_option("--mode", oracle.mode)
        ->required()
        ->check(CLI::IsMember({"exhaustive", "finite-support", "sampled"}));
    oracle_cmd->add_option("--shape", oracle.shape, "Torus shape, e.g. 5,5 (default 5 per axis)");
    oracle_cmd->add_option("--samples", oracle.samples)->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--seed", oracle.seed);
    oracle_cmd->add_option("--budget", oracle.budget, "Exhaustive configuration limit")->check(CLI::PositiveNumber);

    ConvertArgs convert;
    auto* convert_cmd = app.add_subcommand("convert", "Convert between dense and parametric rule files");
    convert_cmd->add_option("--rule", convert.rule, "Rule file")->required();
    convert_cmd->add_option("--to", convert.to)->required()->check(CLI::IsMember({"dense", "parametric"}));
    convert_cmd->add_option("--eta", convert.eta);
    convert_cmd->add_option("--lambda", convert.lambda);
    convert_cmd->add_option("--out", convert.out);

    std::vector<std::string> argv_storage{"ncca"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << error_json("usage", e.what()).dump() << "\n";
        return kExitUsage;
    }
    if (threads > 0) omp_set_num_threads(threads);

    const auto started = std::chrono::steady_clock::now();
    Session session;
    Outcome outcome;
    std::string command;
    try {
        if (check_cmd->parsed()) {
            command = "check";
            outcome = run_check(session, check);
        } else if (enumerate_cmd->parsed()) {
            command = "enumerate";
            outcome = run_enumerate(enumerate, out);
        } else if (classify_cmd->parsed()) {
            command = "classify";
            outcome = run_classify(session, classify_rule);
        } else if (simulate_cmd->parsed()) {
            command = "simulate";
            outcome = run_simulate(session, simulate);
        } else if (oracle_cmd->parsed()) {
            command = "oracle";
            outcome = run_oracle(session, oracle);
        } else {
            command = "convert";
            outcome = run_convert(session, convert);
        }
    } catch (const InputError& e) {
        err << error_json(e.code(), e.what()).dump() << "\n";
        return kExitUsage;
    } catch (const BudgetError& e) {
        err << error_json("budget", e.what()).dump() << "\n";
        return kExitBudget;
    }
    // enumerate without --out already streamed the catalog
    if (outcome.result.is_null()) return outcome.exit_code;

    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);
    Json report{{"command", command},
                {"arguments", args},
                {"version", kVersion},
                {"inputs", session.inputs},
                {"result", outcome.result},
                {"elapsed_ms", elapsed.count()}};
    out << report.dump() << "\n";
    return outcome.exit_code;
}

}  // namespace ncca
