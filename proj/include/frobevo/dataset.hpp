// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "frobevo/errors.hpp"
#include "frobevo/expr.hpp"
#include "frobevo/oracle.hpp"
#include "frobevo/util.hpp"

namespace frobevo {

/// Parametric definition of generator tuples, e.g. (x, x+3, 2x+1, 2x+7).
/// Generators are single-variable expressions evaluated with floor division;
/// each must yield a positive integer at every parameter used.
struct TupleFamily {
  std::vector<Expr> generators;
  std::string param_name = "x";
  int64_t param_start = 1;
  int64_t count = 0;
  bool coprimality_filter = true;

  /// Parses a comma-separated generator list such as "x,x+3,2*x+1,2*x+7".
  /// All generators must use the same parameter name.
  static TupleFamily parse(std::string_view text) {
    TupleFamily f;
    std::string var;
    size_t i = 0;
    while (i <= text.size()) {
      size_t comma = text.find(',', i);
      std::string_view piece = text.substr(i, (comma == std::string_view::npos ? text.size() : comma) - i);
      f.generators.push_back(Expr::parse(piece, &var));
      if (comma == std::string_view::npos) break;
      i = comma + 1;
    }
    if (f.generators.size() < 2) throw FamilyError("tuple family needs at least 2 generators");
    f.param_name = var.empty() ? "x" : var;
    return f;
  }

  std::string to_string() const {
    std::string s;
    for (size_t i = 0; i < generators.size(); ++i) {
      if (i > 0) s += ", ";
      s += generators[i].to_string(param_name);
    }
    return s;
  }

  /// Generator values at parameter p. Throws FamilyError if any generator is
  /// non-integral or non-positive there.
  std::vector<int64_t> values_at(int64_t p) const {
    std::vector<int64_t> vals;
    vals.reserve(generators.size());
    for (const Expr& e : generators) {
      Rational v = e.evaluate(p, EvalMode::FloorDiv);
      if (!v.is_integer() || v.num() < 1)
        throw FamilyError("generator " + e.to_string(param_name) + " is not a positive integer at " +
                          param_name + " = " + std::to_string(p) + " (value " + v.to_string() + ")");
      vals.push_back(v.num());
    }
    return vals;
  }

  GenTuple tuple_at(int64_t p) const { return GenTuple(values_at(p)); }
};

struct DatasetRow {
  int64_t param = 0;
  std::vector<int64_t> tuple;  // generator values, ascending
  int64_t target = 0;          // Frobenius number

  friend bool operator==(const DatasetRow&, const DatasetRow&) = default;
};

/// Regression input: rows of (parameter, generator tuple, Frobenius number).
struct Dataset {
  size_t arity = 1;  // tuple width, fixed per dataset
  std::vector<DatasetRow> rows;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Parameters are scanned upward from param_start until `count` rows exist;
// with the coprimality filter on, non-coprime parameters are skipped and do
// not count. The scan is capped so a family that can never produce a coprime
// tuple fails instead of looping forever.
inline Dataset materialize(const TupleFamily& f, int jobs = 0) {
  constexpr int64_t kScanCap = 1'000'000;
  if (f.generators.empty()) throw FamilyError("tuple family has no generators");
  if (f.count < 0) throw FamilyError("row count must be non-negative");

  Dataset d;
  d.arity = f.generators.size();

  std::vector<std::pair<int64_t, GenTuple>> pending;
  int64_t scanned = 0;
  for (int64_t p = f.param_start; static_cast<int64_t>(pending.size()) < f.count; ++p, ++scanned) {
    if (scanned >= kScanCap) {
      if (pending.empty())
        throw EmptyFamily("no coprime tuple found for (" + f.to_string() + ") in " +
                          std::to_string(kScanCap) + " parameters from " + std::to_string(f.param_start));
      throw FamilyError("parameter scan cap reached before collecting " + std::to_string(f.count) + " rows");
    }
    GenTuple t = f.tuple_at(p);
    if (f.coprimality_filter && !t.coprime()) continue;
    pending.emplace_back(p, std::move(t));
  }

  d.rows.resize(pending.size());
  std::vector<std::exception_ptr> errors(pending.size());
  parallel_for(pending.size(), jobs, [&](size_t i) {
    try {
      d.rows[i] = DatasetRow{pending[i].first, pending[i].second.elements(), frobenius(pending[i].second)};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& ep : errors)
    if (ep) std::rethrow_exception(ep);
  return d;
}

// -- CSV ----------------------------------------------------------------------
// Header "param,a1,...,an,g", one row of integers per tuple, '\n' line ends.

namespace detail {

inline int64_t parse_int_cell(std::string_view cell) {
  if (cell.empty()) throw SchemaError("empty cell");
  size_t i = cell[0] == '-' ? 1 : 0;
  if (i == cell.size()) throw SchemaError("bad integer cell '" + std::string(cell) + "'");
  int64_t v = 0;
  for (; i < cell.size(); ++i) {
    if (cell[i] < '0' || cell[i] > '9')
      throw SchemaError("non-integer cell '" + std::string(cell) + "'");
    v = checked_add(checked_mul(v, 10), cell[i] - '0');
  }
  return cell[0] == '-' ? -v : v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  size_t i = 0;
  while (true) {
    size_t comma = line.find(',', i);
    cells.push_back(line.substr(i, (comma == std::string_view::npos ? line.size() : comma) - i));
    if (comma == std::string_view::npos) break;
    i = comma + 1;
  }
  return cells;
}

}  // namespace detail

inline std::string to_csv(const Dataset& d) {
  std::string out = "param";
  for (size_t i = 1; i <= d.arity; ++i) out += ",a" + std::to_string(i);
  out += ",g\n";
  for (const auto& row : d.rows) {
    out += std::to_string(row.param);
    for (int64_t v : row.tuple) out += "," + std::to_string(v);
    out += "," + std::to_string(row.target) + "\n";
  }
  return out;
}

inline Dataset from_csv_text(std::string_view text) {
  Dataset d;
  size_t pos = 0;
  bool saw_header = false;
  size_t line_no = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line.empty()) continue;

    auto cells = detail::split_csv_line(line);
    if (!saw_header) {
      if (cells.size() < 3 || cells.front() != "param" || cells.back() != "g")
        throw SchemaError("bad CSV header '" + std::string(line) + "' (want param,a1,...,an,g)");
      for (size_t i = 1; i + 1 < cells.size(); ++i)
        if (cells[i] != "a" + std::to_string(i))
          throw SchemaError("bad CSV header column '" + std::string(cells[i]) + "'");
      d.arity = cells.size() - 2;
      saw_header = true;
      continue;
    }
    if (cells.size() != d.arity + 2)
      throw SchemaError("line " + std::to_string(line_no) + ": expected " + std::to_string(d.arity + 2) +
                        " columns, got " + std::to_string(cells.size()));
    DatasetRow row;
    row.param = detail::parse_int_cell(cells.front());
    for (size_t i = 1; i + 1 < cells.size(); ++i) row.tuple.push_back(detail::parse_int_cell(cells[i]));
    row.target = detail::parse_int_cell(cells.back());
    d.rows.push_back(std::move(row));
  }
  if (!saw_header) throw SchemaError("CSV has no header line");
  return d;
}

inline void save_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_csv(d);
  if (!out) throw IoError("failed writing " + path.string());
}

inline Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_csv_text(buf.str());
}

/// Content id used to tie run results to the exact dataset they saw.
inline uint64_t dataset_hash(const Dataset& d) { return fnv1a64(to_csv(d)); }

}  // namespace frobevo
