#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jsw/frontend.hpp"
#include "jsw/ir.hpp"
#include "jsw/witness.hpp"

namespace py = pybind11;

namespace {

jsw::Environment env_of(const std::string& schema_json) {
    return std::move(jsw::load_schema(jsw::parse_json(schema_json)).env);
}

bool py_validate(const std::string& schema_json, const std::string& instance_json) {
    return jsw::validate(jsw::parse_json(instance_json), env_of(schema_json));
}

py::object py_witness(const std::string& schema_json) {
    jsw::WitnessResult r = jsw::generate_witness(env_of(schema_json));
    if (!r.satisfiable) return py::none();
    return py::str(jsw::serialize_json(r.witness));
}

bool py_is_satisfiable(const std::string& schema_json) {
    return jsw::check_satisfiable(env_of(schema_json));
}

py::object py_inclusion(const std::string& a_json, const std::string& b_json) {
    jsw::InclusionResult r = jsw::check_inclusion(env_of(a_json), env_of(b_json));
    if (r.included) return py::none();
    return py::str(jsw::serialize_json(r.counterexample));
}

py::object py_equivalence(const std::string& a_json, const std::string& b_json) {
    jsw::EquivalenceResult r = jsw::check_equivalence(env_of(a_json), env_of(b_json));
    if (r.equivalent) return py::none();
    return py::make_tuple(r.direction, jsw::serialize_json(r.counterexample));
}

std::string py_negate_ir(const std::string& schema_json) {
    return jsw::serialize_json(jsw::env_to_ir(jsw::eliminate_not(env_of(schema_json))));
}

std::string py_normalize_ir(const std::string& schema_json) {
    return jsw::serialize_json(
        jsw::env_to_ir(jsw::normalize_for_generation(env_of(schema_json), {})));
}

} // namespace

PYBIND11_MODULE(jsw, m) {
    m.doc() = "JSON Schema satisfiability, inclusion and witness generation";
    m.def("validate", &py_validate, py::arg("schema"), py::arg("instance"),
          "Validate a JSON instance (text) against a JSON Schema (text).");
    m.def("witness", &py_witness, py::arg("schema"),
          "A JSON witness of the schema as text, or None when unsatisfiable.");
    m.def("is_satisfiable", &py_is_satisfiable, py::arg("schema"));
    m.def("inclusion", &py_inclusion, py::arg("a"), py::arg("b"),
          "None when A ⊆ B, otherwise a counterexample (JSON text).");
    m.def("equivalence", &py_equivalence, py::arg("a"), py::arg("b"),
          "None when equivalent, otherwise (direction, counterexample).");
    m.def("negate_ir", &py_negate_ir, py::arg("schema"),
          "The not-eliminated algebra environment as an IR dump (JSON text).");
    m.def("normalize_ir", &py_normalize_ir, py::arg("schema"),
          "The normalized (post-DNF, prepared) environment IR (JSON text).");
}
