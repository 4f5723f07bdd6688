// Python bindings for the maat core: parsing, compilation, classification,
// mediation scenarios, and audit scoring.

#include <filesystem>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maat/ast_json.hpp"
#include "maat/audit.hpp"
#include "maat/content_ref.hpp"
#include "maat/ontology.hpp"
#include "maat/parser.hpp"
#include "maat/plan.hpp"
#include "maat/simnet/scenario.hpp"

namespace py = pybind11;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

py::object py_parse(const std::string& source) {
    maat::ParseResult result = maat::parse(source);
    if (!result.ok()) {
        const auto& d = result.diagnostics().front();
        throw py::value_error("line " + std::to_string(d.line) + ", column " +
                              std::to_string(d.column) + ": " + d.message);
    }
    return json_to_py(maat::ast_to_json(result.intent()));
}

std::string py_render(const std::string& source) {
    maat::ParseResult result = maat::parse(source);
    if (!result.ok()) throw py::value_error(result.diagnostics().front().message);
    return maat::render(result.intent());
}

std::vector<std::string> py_validate(const std::string& source) {
    maat::ParseResult result = maat::parse(source);
    if (!result.ok()) throw py::value_error(result.diagnostics().front().message);
    std::vector<std::string> messages;
    for (const auto& e : maat::validate_intent(result.intent(), maat::builtin_ontology())) {
        messages.push_back(e.message);
    }
    return messages;
}

py::object py_compile(const std::string& source) {
    maat::ParseResult result = maat::parse(source);
    if (!result.ok()) throw py::value_error(result.diagnostics().front().message);
    auto reg = maat::builtin_ontology();
    auto errors = maat::validate_intent(result.intent(), reg);
    if (!errors.empty()) throw py::value_error(errors.front().message);
    return json_to_py(maat::plan_to_json(maat::compile(result.intent(), reg)));
}

py::dict py_classify(const std::string& raw) {
    maat::ContentRef ref = maat::classify(raw);
    py::dict out;
    out["kind"] = ref.variant_name();
    out["normalized"] = maat::normalize(ref);
    return out;
}

py::object py_run_scenario(const std::string& path) {
    nlohmann::json doc = maat::simnet::load_json_file(path);
    std::string base = std::filesystem::path(path).parent_path().string();
    if (base.empty()) base = ".";
    return json_to_py(maat::simnet::run_scenario(doc, base).to_json());
}

py::dict py_score_log(const std::string& path) {
    auto records = maat::audit::read_log(path);
    py::dict out;
    for (const auto& [agent, score] : maat::audit::score_by_agent(records)) {
        py::dict s;
        s["mean"] = score.mean;
        s["count"] = score.count;
        s["failure_fraction"] = score.failure_fraction;
        out[py::str(agent)] = s;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_maat, m) {
    m.doc() = "Intent DSL parsing, compilation, and mediation toolkit";
    m.def("parse", &py_parse, py::arg("source"),
          "Parse an intent and return its canonical AST as nested dicts.");
    m.def("render", &py_render, py::arg("source"),
          "Parse an intent and return its canonical rendering.");
    m.def("validate", &py_validate, py::arg("source"),
          "Validation error messages under the built-in ontology (empty when ok).");
    m.def("compile", &py_compile, py::arg("source"),
          "Compile an intent into a reification plan dict.");
    m.def("classify", &py_classify, py::arg("raw"),
          "Classify a content reference string (url/ccn/info_hash/opaque).");
    m.def("run_scenario", &py_run_scenario, py::arg("path"),
          "Run a scenario file and return its report dict.");
    m.def("score_log", &py_score_log, py::arg("path"),
          "Per-agent mediation score aggregates of a JSONL audit log.");
}
