#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "markovcopula/generator.hpp"
#include "markovcopula/state_space.hpp"

namespace markovcopula {

// A complete model document: the factored space, the initial law, and the
// generator. This is the unit the file format stores and the commands consume.
struct ModelFile {
  StateSpace space;
  Distribution initial_distribution;
  GeneratorFunction generator;
};

// Parse failure with the location that caused it: either "line L, column C"
// for malformed JSON or a field path like "generator.matrix[1]" for schema
// violations. what() always contains the context.
class ModelParseError : public std::runtime_error {
 public:
  ModelParseError(std::string context, const std::string& message)
      : std::runtime_error(context + ": " + message), context_(std::move(context)) {}

  const std::string& context() const { return context_; }

 private:
  std::string context_;
};

namespace model_detail {

using json = nlohmann::ordered_json;

inline std::string json_type_name(const json& v) {
  if (v.is_object()) return "object";
  if (v.is_array()) return "array";
  if (v.is_string()) return "string";
  if (v.is_boolean()) return "boolean";
  if (v.is_null()) return "null";
  return "number";
}

inline const json& require_field(const json& obj, const std::string& key,
                                 const std::string& ctx) {
  if (!obj.is_object())
    throw ModelParseError(ctx, "expected an object, got " + json_type_name(obj));
  auto it = obj.find(key);
  if (it == obj.end()) throw ModelParseError(ctx, "missing required field '" + key + "'");
  return *it;
}

inline void reject_unknown_fields(const json& obj, const std::vector<std::string>& known,
                                  const std::string& ctx) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const std::string& k : known) ok = ok || k == key;
    if (!ok) throw ModelParseError(ctx, "unknown field '" + key + "'");
  }
}

inline double as_number(const json& v, const std::string& ctx) {
  if (!v.is_number()) throw ModelParseError(ctx, "expected a number, got " + json_type_name(v));
  return v.get<double>();
}

inline std::string as_string(const json& v, const std::string& ctx) {
  if (!v.is_string()) throw ModelParseError(ctx, "expected a string, got " + json_type_name(v));
  return v.get<std::string>();
}

inline const json& as_array(const json& v, const std::string& ctx) {
  if (!v.is_array()) throw ModelParseError(ctx, "expected an array, got " + json_type_name(v));
  return v;
}

inline Matrix parse_matrix(const json& v, std::size_t dim, const std::string& ctx) {
  const json& rows = as_array(v, ctx);
  if (rows.size() != dim)
    throw ModelParseError(ctx, "expected " + std::to_string(dim) + " rows, got " +
                                   std::to_string(rows.size()));
  Matrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string row_ctx = ctx + "[" + std::to_string(r) + "]";
    const json& row = as_array(rows[r], row_ctx);
    if (row.size() != dim)
      throw ModelParseError(row_ctx, "expected " + std::to_string(dim) + " entries, got " +
                                         std::to_string(row.size()));
    for (std::size_t c = 0; c < dim; ++c)
      m(r, c) = as_number(row[c], row_ctx + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline StateSpace parse_factors(const json& v) {
  const json& arr = as_array(v, "factors");
  if (arr.empty()) throw ModelParseError("factors", "at least one factor is required");
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ctx = "factors[" + std::to_string(i) + "]";
    const json& fj = arr[i];
    if (!fj.is_object()) throw ModelParseError(ctx, "expected an object");
    reject_unknown_fields(fj, {"name", "states"}, ctx);
    Factor f;
    f.name = as_string(require_field(fj, "name", ctx), ctx + ".name");
    const json& states = as_array(require_field(fj, "states", ctx), ctx + ".states");
    for (std::size_t s = 0; s < states.size(); ++s)
      f.states.push_back(
          as_string(states[s], ctx + ".states[" + std::to_string(s) + "]"));
    for (const Factor& earlier : factors)
      if (earlier.name == f.name)
        throw ModelParseError("factors", "duplicate factor name '" + f.name + "'");
    factors.push_back(std::move(f));
  }
  try {
    return StateSpace(std::move(factors));
  } catch (const std::exception& e) {
    throw ModelParseError("factors", e.what());
  }
}

inline GeneratorFunction parse_generator(const json& v, const StateSpace& space) {
  const std::string ctx = "generator";
  if (!v.is_object()) throw ModelParseError(ctx, "expected an object");
  const std::string kind = as_string(require_field(v, "kind", ctx), ctx + ".kind");
  const std::size_t dim = space.flat_size();
  try {
    if (kind == "constant") {
      reject_unknown_fields(v, {"kind", "matrix"}, ctx);
      return GeneratorFunction::constant(
          space, parse_matrix(require_field(v, "matrix", ctx), dim, ctx + ".matrix"));
    }
    if (kind == "piecewise") {
      reject_unknown_fields(v, {"kind", "breakpoints", "matrices"}, ctx);
      const json& bj =
          as_array(require_field(v, "breakpoints", ctx), ctx + ".breakpoints");
      std::vector<double> breakpoints;
      for (std::size_t k = 0; k < bj.size(); ++k)
        breakpoints.push_back(
            as_number(bj[k], ctx + ".breakpoints[" + std::to_string(k) + "]"));
      const json& mj = as_array(require_field(v, "matrices", ctx), ctx + ".matrices");
      std::vector<Matrix> matrices;
      for (std::size_t k = 0; k < mj.size(); ++k)
        matrices.push_back(
            parse_matrix(mj[k], dim, ctx + ".matrices[" + std::to_string(k) + "]"));
      return GeneratorFunction::piecewise(space, std::move(breakpoints), std::move(matrices));
    }
    if (kind == "family") {
      reject_unknown_fields(v, {"kind", "name", "params"}, ctx);
      const std::string name = as_string(require_field(v, "name", ctx), ctx + ".name");
      const json& pj = require_field(v, "params", ctx);
      if (!pj.is_object()) throw ModelParseError(ctx + ".params", "expected an object");
      FamilyParams params;
      for (const auto& [key, value] : pj.items())
        params[key] = as_number(value, ctx + ".params." + key);
      return GeneratorFunction::family(space, name, std::move(params));
    }
  } catch (const ModelParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelParseError(ctx, e.what());
  }
  throw ModelParseError(ctx + ".kind",
                        "unknown generator kind '" + kind +
                            "' (expected constant, piecewise, or family)");
}

inline Distribution parse_initial(const json* v, const StateSpace& space) {
  if (v == nullptr) return Distribution::point_mass(space, 0);
  const std::string ctx = "initial_distribution";
  const json& arr = as_array(*v, ctx);
  if (arr.size() != space.flat_size())
    throw ModelParseError(ctx, "expected " + std::to_string(space.flat_size()) +
                                   " weights, got " + std::to_string(arr.size()));
  std::vector<double> w;
  for (std::size_t k = 0; k < arr.size(); ++k)
    w.push_back(as_number(arr[k], ctx + "[" + std::to_string(k) + "]"));
  try {
    return Distribution(space, std::move(w));
  } catch (const std::exception& e) {
    throw ModelParseError(ctx, e.what());
  }
}

inline std::pair<std::size_t, std::size_t> line_column_of(const std::string& text,
                                                          std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < text.size() && i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace model_detail

inline ModelFile model_from_json(const model_detail::json& doc) {
  using namespace model_detail;
  if (!doc.is_object()) throw ModelParseError("document", "top level must be an object");
  reject_unknown_fields(doc, {"factors", "initial_distribution", "generator"}, "document");
  StateSpace space = parse_factors(require_field(doc, "factors", "document"));
  auto init_it = doc.find("initial_distribution");
  Distribution initial =
      parse_initial(init_it == doc.end() ? nullptr : &*init_it, space);
  GeneratorFunction generator =
      parse_generator(require_field(doc, "generator", "document"), space);
  return ModelFile{std::move(space), std::move(initial), std::move(generator)};
}

inline ModelFile parse_model(const std::string& text) {
  model_detail::json doc;
  try {
    doc = model_detail::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = model_detail::line_column_of(text, e.byte);
    std::ostringstream ctx;
    ctx << "line " << line << ", column " << column;
    throw ModelParseError(ctx.str(), "malformed JSON");
  }
  return model_from_json(doc);
}

inline ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_model(buffer.str());
  } catch (const ModelParseError& e) {
    throw ModelParseError(path + ", " + e.context(),
                          std::string(e.what()).substr(e.context().size() + 2));
  }
}

inline model_detail::json model_to_json(const ModelFile& model) {
  using namespace model_detail;
  json doc = json::object();
  json factors = json::array();
  for (std::size_t i = 0; i < model.space.num_factors(); ++i) {
    const Factor& f = model.space.factor(i);
    json fj = json::object();
    fj["name"] = f.name;
    fj["states"] = f.states;
    factors.push_back(std::move(fj));
  }
  doc["factors"] = std::move(factors);
  doc["initial_distribution"] = model.initial_distribution.weights();

  json gen = json::object();
  switch (model.generator.kind()) {
    case GeneratorFunction::Kind::constant:
      gen["kind"] = "constant";
      gen["matrix"] = matrix_to_json(model.generator.as_constant().matrix.entries);
      break;
    case GeneratorFunction::Kind::piecewise: {
      const PiecewiseKind& pw = model.generator.as_piecewise();
      gen["kind"] = "piecewise";
      gen["breakpoints"] = pw.breakpoints;
      json mats = json::array();
      for (const RateMatrix& m : pw.matrices) mats.push_back(matrix_to_json(m.entries));
      gen["matrices"] = std::move(mats);
      break;
    }
    case GeneratorFunction::Kind::family: {
      const FamilyKind& fam = model.generator.as_family();
      gen["kind"] = "family";
      gen["name"] = fam.name;
      json params = json::object();
      for (const auto& [key, value] : fam.params) params[key] = value;
      gen["params"] = std::move(params);
      break;
    }
    case GeneratorFunction::Kind::tensor_sum:
      throw std::invalid_argument(
          "model files store constant, piecewise, or family generators; "
          "materialize a tensor-sum generator first");
  }
  doc["generator"] = std::move(gen);
  return doc;
}

inline std::string write_model(const ModelFile& model) {
  return model_to_json(model).dump(2) + "\n";
}

inline void save_model(const ModelFile& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  out << write_model(model);
  if (!out) throw std::runtime_error("failed writing model file '" + path + "'");
}

}  // namespace markovcopula
