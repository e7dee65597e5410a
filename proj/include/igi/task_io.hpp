#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "igi/fitness.hpp"

namespace igi {

class TaskFormatError : public std::runtime_error {
 public:
  enum class Kind { Io, Malformed, UnknownDsl, TypeInconsistent };

  TaskFormatError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace detail {

using json = nlohmann::json;

inline json value_to_json(const Value& v) {
  if (v.is_null()) return nullptr;
  switch (*v.type()) {
    case SemType::Integer:
      return v.as_int();
    case SemType::IntArray:
      return v.as_array();
    case SemType::Boolean:
      return v.as_bool();
    case SemType::String:
      return v.as_string();
  }
  return nullptr;
}

inline Value value_from_json(const json& j, SemType t, const std::string& where) {
  auto bad = [&] {
    return TaskFormatError(TaskFormatError::Kind::TypeInconsistent,
                           where + ": expected " + std::string(type_name(t)) + ", got " + j.dump());
  };
  switch (t) {
    case SemType::Integer:
      if (!j.is_number_integer()) throw bad();
      return Value(j.get<std::int64_t>());
    case SemType::IntArray: {
      if (!j.is_array()) throw bad();
      IntArray a;
      for (const auto& e : j) {
        if (!e.is_number_integer()) throw bad();
        a.push_back(e.get<std::int64_t>());
      }
      return Value(std::move(a));
    }
    case SemType::Boolean:
      if (!j.is_boolean()) throw bad();
      return Value(j.get<bool>());
    case SemType::String:
      if (!j.is_string()) throw bad();
      return Value(j.get<std::string>());
  }
  throw bad();
}

inline std::optional<SemType> json_kind(const json& j) {
  if (j.is_number_integer()) return SemType::Integer;
  if (j.is_array()) return SemType::IntArray;
  if (j.is_boolean()) return SemType::Boolean;
  if (j.is_string()) return SemType::String;
  return std::nullopt;
}

}  // namespace detail

inline nlohmann::json task_to_json(const Task& task) {
  using detail::json;
  json j;
  j["name"] = task.name;
  j["dsl"] = task.dsl;
  j["allowed_functions"] = task.allowed_functions ? json(*task.allowed_functions) : json(nullptr);
  j["constants"] = json::array();
  for (const auto& c : task.constants)
    j["constants"].push_back({{"type", std::string(type_name(*c.type()))}, {"value", detail::value_to_json(c)}});
  j["input_signature"] = json::array();
  for (SemType t : task.input_signature) j["input_signature"].push_back(std::string(type_name(t)));
  j["examples"] = json::array();
  for (const auto& ex : task.examples) {
    json in = json::array();
    for (const auto& v : ex.inputs) in.push_back(detail::value_to_json(v));
    j["examples"].push_back({{"inputs", in}, {"output", detail::value_to_json(ex.output)}});
  }
  j["oracle"] = task.oracle ? json(format_program(*task.oracle, *task.ps)) : json(nullptr);
  return j;
}

inline Task task_from_json(const nlohmann::json& j) {
  using Kind = TaskFormatError::Kind;
  auto malformed = [](const std::string& m) { return TaskFormatError(Kind::Malformed, m); };
  if (!j.is_object()) throw malformed("task document must be a JSON object");
  for (const char* key : {"name", "dsl", "input_signature", "examples"})
    if (!j.contains(key)) throw malformed(std::string("missing field '") + key + "'");

  Task t;
  if (!j["name"].is_string()) throw malformed("'name' must be a string");
  t.name = j["name"].get<std::string>();
  if (!j["dsl"].is_string()) throw malformed("'dsl' must be a string");
  t.dsl = j["dsl"].get<std::string>();
  if (!is_known_dsl(t.dsl)) throw TaskFormatError(Kind::UnknownDsl, "unknown DSL '" + t.dsl + "'");

  if (j.contains("allowed_functions") && !j["allowed_functions"].is_null()) {
    if (!j["allowed_functions"].is_array()) throw malformed("'allowed_functions' must be an array or null");
    std::vector<std::string> allowed;
    for (const auto& s : j["allowed_functions"]) {
      if (!s.is_string()) throw malformed("'allowed_functions' entries must be strings");
      allowed.push_back(s.get<std::string>());
    }
    t.allowed_functions = std::move(allowed);
  }

  if (j.contains("constants")) {
    if (!j["constants"].is_array()) throw malformed("'constants' must be an array");
    for (const auto& c : j["constants"]) {
      if (!c.is_object() || !c.contains("type") || !c.contains("value") || !c["type"].is_string())
        throw malformed("constants must be {type, value} objects");
      auto ty = parse_type_name(c["type"].get<std::string>());
      if (!ty) throw malformed("unknown type name '" + c["type"].get<std::string>() + "'");
      t.constants.push_back(detail::value_from_json(c["value"], *ty, "constant"));
    }
  }

  if (!j["input_signature"].is_array()) throw malformed("'input_signature' must be an array");
  for (const auto& s : j["input_signature"]) {
    if (!s.is_string()) throw malformed("input_signature entries must be type names");
    auto ty = parse_type_name(s.get<std::string>());
    if (!ty) throw malformed("unknown type name '" + s.get<std::string>() + "'");
    t.input_signature.push_back(*ty);
  }

  if (!j["examples"].is_array() || j["examples"].empty()) throw malformed("'examples' must be a nonempty array");
  std::optional<SemType> out_type;
  for (std::size_t i = 0; i < j["examples"].size(); ++i) {
    const auto& e = j["examples"][i];
    std::string where = "example " + std::to_string(i);
    if (!e.is_object() || !e.contains("inputs") || !e.contains("output") || !e["inputs"].is_array())
      throw malformed(where + ": expected {inputs: [...], output: ...}");
    if (e["inputs"].size() != t.input_signature.size())
      throw TaskFormatError(Kind::TypeInconsistent, where + ": " + std::to_string(e["inputs"].size()) +
                                                        " inputs for a signature of length " +
                                                        std::to_string(t.input_signature.size()));
    Example ex;
    for (std::size_t k = 0; k < t.input_signature.size(); ++k)
      ex.inputs.push_back(detail::value_from_json(e["inputs"][k], t.input_signature[k], where + " input " + std::to_string(k)));
    auto kind = detail::json_kind(e["output"]);
    if (!kind) throw TaskFormatError(Kind::TypeInconsistent, where + ": output has no DSL type");
    if (out_type && *out_type != *kind)
      throw TaskFormatError(Kind::TypeInconsistent, where + ": output type differs from earlier examples");
    out_type = kind;
    ex.output = detail::value_from_json(e["output"], *kind, where + " output");
    t.examples.push_back(std::move(ex));
  }

  try {
    t.ps = make_task_primitives(t.dsl, t.constants, t.allowed_functions, t.input_signature);
  } catch (const PrimitiveError& err) {
    throw malformed(err.what());
  }

  if (j.contains("oracle") && !j["oracle"].is_null()) {
    if (!j["oracle"].is_string()) throw malformed("'oracle' must be a string or null");
    try {
      t.oracle = parse_program(j["oracle"].get<std::string>(), *t.ps);
    } catch (const TreeError& err) {
      throw malformed(std::string("oracle: ") + err.what());
    }
    auto report = type_check(*t.oracle, *t.ps);
    if (!report.ok()) throw TaskFormatError(Kind::TypeInconsistent, "oracle: " + report.violations.front());
    if (t.oracle->root_type() != *out_type)
      throw TaskFormatError(Kind::TypeInconsistent, "oracle return type differs from the example outputs");
  }
  return t;
}

inline Task load_task(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TaskFormatError(TaskFormatError::Kind::Io, "cannot read task file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw TaskFormatError(TaskFormatError::Kind::Malformed, path.string() + ": " + e.what());
  }
  return task_from_json(j);
}

// Writes via a temporary file and rename so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void save_task(const Task& task, const std::filesystem::path& path) {
  write_file_atomic(path, task_to_json(task).dump(2) + "\n");
}

// Structural equality over every persisted field.
inline bool same_task(const Task& a, const Task& b) {
  if (a.name != b.name || a.dsl != b.dsl || a.allowed_functions != b.allowed_functions ||
      a.constants != b.constants || a.input_signature != b.input_signature || a.examples != b.examples)
    return false;
  if (a.oracle.has_value() != b.oracle.has_value()) return false;
  return !a.oracle || format_program(*a.oracle, *a.ps) == format_program(*b.oracle, *b.ps);
}

}  // namespace igi
