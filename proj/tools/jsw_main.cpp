#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jsw/frontend.hpp"
#include "jsw/ir.hpp"
#include "jsw/witness.hpp"

namespace {

using namespace jsw;

struct Options {
    std::vector<std::string> extra_files;
    std::string root_uri;
    size_t budget = 1024;
    bool trace = false;
    std::string format = "text";
    unsigned seed = 0; // accepted and ignored: runs are deterministic
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PipelineOptions pipeline_options(const Options& o) {
    PipelineOptions p;
    p.max_tuples = o.budget;
    return p;
}

Environment load_env(const std::string& schema_path, const Options& o,
                     std::vector<std::string>* warnings = nullptr) {
    std::vector<RawSchemaDoc> docs;
    docs.push_back({parse_json(read_file(schema_path)), schema_path});
    for (const auto& extra : o.extra_files)
        docs.push_back({parse_json(read_file(extra)), extra});
    RawSchemaDoc normalized = normalize_refs(docs, o.root_uri);
    TranslateResult t = translate(normalized);
    if (warnings) *warnings = t.warnings;
    for (const auto& w : t.warnings) std::cerr << "warning: " << w << "\n";
    return std::move(t.env);
}

void emit(const Options& o, const std::string& answer, const JsonValue* witness,
          const std::vector<std::string>& diagnostics) {
    if (o.format == "json") {
        JsonValue::Object out{{"answer", JsonValue::string(answer)}};
        if (witness) out.emplace_back("witness", *witness);
        JsonValue::Array diag;
        for (const auto& d : diagnostics) diag.push_back(JsonValue::string(d));
        out.emplace_back("diagnostics", JsonValue::array(std::move(diag)));
        std::cout << serialize_json(JsonValue::object(std::move(out))) << "\n";
    } else {
        std::cout << answer;
        if (witness) std::cout << " " << serialize_json(*witness);
        std::cout << "\n";
        for (const auto& d : diagnostics) std::cout << d << "\n";
    }
}

int cmd_validate(const std::string& schema_path, const std::string& instance_path,
                 const Options& o) {
    Environment env = load_env(schema_path, o);
    JsonValue instance = parse_json(read_file(instance_path));
    bool ok = validate(instance, env);
    emit(o, ok ? "valid" : "invalid", nullptr, {});
    return ok ? 0 : 1;
}

int cmd_witness(const std::string& schema_path, const Options& o) {
    Environment env = load_env(schema_path, o);
    WitnessResult r = generate_witness(env, pipeline_options(o));
    if (r.satisfiable) {
        if (o.format == "json") {
            emit(o, "witness", &r.witness, {});
        } else {
            std::cout << serialize_json(r.witness) << "\n";
        }
        return 0;
    }
    emit(o, "UNSATISFIABLE", nullptr, {});
    return 1;
}

int cmd_sat(const std::string& schema_path, const Options& o) {
    Environment env = load_env(schema_path, o);
    bool sat = check_satisfiable(env, pipeline_options(o));
    emit(o, sat ? "satisfiable" : "unsatisfiable", nullptr, {});
    return sat ? 0 : 1;
}

int cmd_include(const std::string& a_path, const std::string& b_path, const Options& o) {
    Options oa = o, ob = o;
    Environment a = load_env(a_path, oa);
    Environment b = load_env(b_path, ob);
    InclusionResult r = check_inclusion(a, b, pipeline_options(o));
    if (r.included) {
        emit(o, "included", nullptr, {});
        return 0;
    }
    emit(o, "not-included", &r.counterexample, {"counterexample validates the first schema only"});
    return 1;
}

int cmd_equiv(const std::string& a_path, const std::string& b_path, const Options& o) {
    Environment a = load_env(a_path, o);
    Environment b = load_env(b_path, o);
    EquivalenceResult r = check_equivalence(a, b, pipeline_options(o));
    if (r.equivalent) {
        emit(o, "equivalent", nullptr, {});
        return 0;
    }
    emit(o, "not-equivalent", &r.counterexample,
         {r.direction == 1 ? "counterexample satisfies the first schema only"
                           : "counterexample satisfies the second schema only"});
    return 1;
}

int cmd_negate(const std::string& schema_path, bool export_schema, const Options& o) {
    Environment env = load_env(schema_path, o);
    Environment eliminated = eliminate_not(env);
    JsonValue out = export_schema ? export_extended_schema(eliminated) : env_to_ir(eliminated);
    std::cout << serialize_json(out) << "\n";
    return 0;
}

int cmd_normalize(const std::string& schema_path, const Options& o) {
    Environment env = load_env(schema_path, o);
    PipelineTrace trace;
    Environment normalized =
        normalize_for_generation(env, pipeline_options(o), o.trace ? &trace : nullptr);
    if (o.trace) {
        JsonValue::Array snaps;
        for (const auto& [phase, snapshot] : trace.snapshots) {
            snaps.push_back(JsonValue::object(
                {{"phase", JsonValue::string(phase)}, {"env", env_to_ir(snapshot)}}));
        }
        std::cout << serialize_json(JsonValue::object(
                         {{"result", env_to_ir(normalized)},
                          {"trace", JsonValue::array(std::move(snaps))}}))
                  << "\n";
    } else {
        std::cout << serialize_json(env_to_ir(normalized)) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"JSON Schema satisfiability, inclusion and witness generation"};
    app.require_subcommand(1);

    Options o;
    app.add_option("--extra", o.extra_files, "additional schema documents for $ref resolution")
        ->check(CLI::ExistingFile);
    app.add_option("--root", o.root_uri, "root document URI when several documents are supplied");
    app.add_option("--budget", o.budget, "enumeration budget per group per pass");
    app.add_flag("--trace", o.trace, "dump per-phase IR snapshots (normalize)");
    app.add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", o.seed, "accepted for compatibility; output is deterministic");

    std::string schema, instance, second;
    auto* validate_cmd = app.add_subcommand("validate", "validate an instance against a schema");
    validate_cmd->add_option("schema", schema)->required();
    validate_cmd->add_option("instance", instance)->required();
    auto* witness_cmd = app.add_subcommand("witness", "generate a witness or prove unsatisfiable");
    witness_cmd->add_option("schema", schema)->required();
    auto* sat_cmd = app.add_subcommand("sat", "decide satisfiability");
    sat_cmd->add_option("schema", schema)->required();
    auto* include_cmd = app.add_subcommand("include", "decide schema inclusion A ⊆ B");
    include_cmd->add_option("a", schema)->required();
    include_cmd->add_option("b", second)->required();
    auto* equiv_cmd = app.add_subcommand("equiv", "decide schema equivalence");
    equiv_cmd->add_option("a", schema)->required();
    equiv_cmd->add_option("b", second)->required();
    bool export_schema = false;
    auto* negate_cmd = app.add_subcommand("negate", "emit the not-eliminated form");
    negate_cmd->add_option("schema", schema)->required();
    negate_cmd->add_flag("--export-schema", export_schema,
                         "emit a JSON Schema with the extension vocabulary instead of IR");
    auto* normalize_cmd = app.add_subcommand("normalize", "emit the normalized (post-DNF) IR");
    normalize_cmd->add_option("schema", schema)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(schema, instance, o);
        if (witness_cmd->parsed()) return cmd_witness(schema, o);
        if (sat_cmd->parsed()) return cmd_sat(schema, o);
        if (include_cmd->parsed()) return cmd_include(schema, second, o);
        if (equiv_cmd->parsed()) return cmd_equiv(schema, second, o);
        if (negate_cmd->parsed()) return cmd_negate(schema, export_schema, o);
        if (normalize_cmd->parsed()) return cmd_normalize(schema, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
