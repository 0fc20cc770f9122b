#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "markovcopula/consistency.hpp"
#include "markovcopula/copula.hpp"
#include "markovcopula/generator.hpp"
#include "markovcopula/montecarlo.hpp"
#include "markovcopula/state_space.hpp"
#include "markovcopula/version.hpp"

namespace markovcopula {

// Machine reports are nlohmann ordered documents: insertion order is
// preserved on output, so identical inputs serialize to identical bytes.
using ReportJson = nlohmann::ordered_json;

namespace report_detail {

// FNV-1a, 64-bit: stable content fingerprint for input echoing.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x00000100000001B3ull;
  }
  return h;
}

inline std::string digest(const std::string& bytes) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

inline nlohmann::ordered_json matrix_rows(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

// "(0,1)" style label for a flat state of a factored space.
inline std::string config_label(const StateSpace& space, std::size_t flat) {
  std::string out = "(";
  const std::vector<std::size_t> tuple = space.to_tuple(flat);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i > 0) out += ",";
    out += space.factor(i).states[tuple[i]];
  }
  return out + ")";
}

}  // namespace report_detail

// Common envelope: tool identity, the command as invoked, and a digest of
// every input file. Wall-clock timing is deliberately excluded so reports
// are byte-stable across runs; timing goes to the human-readable stream.
inline ReportJson report_envelope(const std::string& command_echo,
                                  const std::vector<std::pair<std::string, std::string>>&
                                      input_paths_and_bytes) {
  ReportJson doc = ReportJson::object();
  doc["tool"] = "markovcopula";
  doc["version"] = kVersion;
  doc["command"] = command_echo;
  ReportJson inputs = ReportJson::array();
  for (const auto& [path, bytes] : input_paths_and_bytes) {
    ReportJson entry = ReportJson::object();
    entry["path"] = path;
    entry["digest"] = report_detail::digest(bytes);
    inputs.push_back(std::move(entry));
  }
  doc["inputs"] = std::move(inputs);
  return doc;
}

inline ReportJson certificate_to_json(const StateSpace& space, const Certificate& cert) {
  ReportJson j = ReportJson::object();
  j["kind"] = cert.kind;
  j["time"] = cert.time;
  j["factor"] = cert.factor + 1;  // 1-based in reports, matching the CLI surface
  j["from_state"] = space.factor(cert.factor).states[cert.from_state];
  j["to_state"] = space.factor(cert.factor).states[cert.to_state];
  j["witness_low"] = cert.witness_low;
  j["witness_high"] = cert.witness_high;
  j["low_value"] = cert.low_value;
  j["high_value"] = cert.high_value;
  j["gap"] = cert.gap;
  return j;
}

// Extracted marginal generator as grid + per-time matrices; rows that are
// undefined (conditioning event has zero probability) carry a false flag and
// zeroed values.
inline ReportJson marginal_to_json(const MarginalGenerator& marginal) {
  ReportJson j = ReportJson::object();
  j["factor"] = marginal.factor + 1;
  ReportJson states = ReportJson::array();
  for (const std::string& s : marginal.space.factor(0).states) states.push_back(s);
  j["states"] = std::move(states);
  j["grid"] = marginal.grid;
  ReportJson values = ReportJson::array();
  ReportJson defined = ReportJson::array();
  for (std::size_t k = 0; k < marginal.grid.size(); ++k) {
    values.push_back(report_detail::matrix_rows(marginal.values[k]));
    ReportJson rows = ReportJson::array();
    for (bool d : marginal.row_defined[k]) rows.push_back(d);
    defined.push_back(std::move(rows));
  }
  j["values"] = std::move(values);
  j["row_defined"] = std::move(defined);
  return j;
}

}  // namespace markovcopula
