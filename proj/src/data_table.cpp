#include "terramap/data_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "terramap/error.hpp"

namespace terramap {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::size_t column_size(const Column& c) {
  return std::visit([](const auto& v) { return v.size(); }, c);
}

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// Splits a whole CSV document into records. Quoted fields may span lines.
std::vector<CsvRecord> split_records(std::string_view text) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A lone empty field is a blank line, not a record.
    if (!(current.fields.size() == 1 && current.fields[0].empty())) {
      records.push_back(std::move(current));
    }
    current = CsvRecord{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started || trim(field).empty()) {
          field.clear();
          in_quotes = true;
          field_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        ++line;
        end_record();
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", current.line);
  if (field_started || !field.empty() || !current.fields.empty()) end_record();
  return records;
}

bool needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos || s != trim(s);
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

DataTable DataTable::from_columns(std::vector<std::pair<std::string, Column>> columns) {
  DataTable t;
  std::set<std::string> seen;
  for (auto& [name, col] : columns) {
    if (!seen.insert(name).second) throw DataError("duplicate column name '" + name + "'");
    std::size_t n = column_size(col);
    if (t.names_.empty()) {
      t.nrows_ = n;
    } else if (n != t.nrows_) {
      throw DataError("column '" + name + "' has " + std::to_string(n) + " rows, expected " +
                      std::to_string(t.nrows_));
    }
    t.names_.push_back(name);
    t.columns_.push_back(std::make_shared<const Column>(std::move(col)));
  }
  return t;
}

std::size_t DataTable::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw DataError("unknown column '" + std::string(name) + "'");
}

bool DataTable::has_column(std::string_view name) const noexcept {
  for (const auto& n : names_) {
    if (n == name) return true;
  }
  return false;
}

bool DataTable::is_numeric(std::string_view name) const {
  return std::holds_alternative<NumericColumn>(*columns_[index_of(name)]);
}

const Column& DataTable::column(std::string_view name) const { return *columns_[index_of(name)]; }

std::span<const double> DataTable::numeric(std::string_view name) const {
  const auto* col = std::get_if<NumericColumn>(columns_[index_of(name)].get());
  if (!col) throw DataError("column '" + std::string(name) + "' is not numeric");
  return *col;
}

const StringColumn& DataTable::strings(std::string_view name) const {
  const auto* col = std::get_if<StringColumn>(columns_[index_of(name)].get());
  if (!col) throw DataError("column '" + std::string(name) + "' is not a string column");
  return *col;
}

std::string DataTable::cell_text(std::string_view name, std::size_t row) const {
  const Column& col = *columns_[index_of(name)];
  if (row >= nrows_) throw DataError("row index out of range");
  if (const auto* num = std::get_if<NumericColumn>(&col)) return format_number((*num)[row]);
  return std::get<StringColumn>(col)[row];
}

DataTable DataTable::take(std::span<const std::size_t> rows) const {
  DataTable out;
  out.names_ = names_;
  out.nrows_ = rows.size();
  out.columns_.reserve(columns_.size());
  for (const auto& col : columns_) {
    Column picked = std::visit(
        [&](const auto& v) -> Column {
          std::decay_t<decltype(v)> r;
          r.reserve(rows.size());
          for (std::size_t i : rows) r.push_back(v[i]);
          return r;
        },
        *col);
    out.columns_.push_back(std::make_shared<const Column>(std::move(picked)));
  }
  return out;
}

DataTable DataTable::filter(const std::vector<bool>& mask) const {
  if (mask.size() != nrows_) {
    throw DataError("mask length " + std::to_string(mask.size()) + " does not match " +
                    std::to_string(nrows_) + " rows");
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < nrows_; ++i) {
    if (mask[i]) rows.push_back(i);
  }
  return take(rows);
}

std::map<std::string, DataTable> DataTable::group_by(std::string_view name) const {
  std::size_t idx = index_of(name);
  std::map<std::string, std::vector<std::size_t>> buckets;
  for (std::size_t r = 0; r < nrows_; ++r) buckets[cell_text(names_[idx], r)].push_back(r);
  std::map<std::string, DataTable> groups;
  for (const auto& [key, rows] : buckets) groups.emplace(key, take(rows));
  return groups;
}

DataTable DataTable::rename(std::string_view old_name, std::string_view new_name) const {
  std::size_t idx = index_of(old_name);
  if (old_name != new_name && has_column(new_name)) {
    throw DataError("column '" + std::string(new_name) + "' already exists");
  }
  DataTable out = *this;
  out.names_[idx] = std::string(new_name);
  return out;
}

DataTable DataTable::drop_column(std::string_view name) const {
  std::size_t idx = index_of(name);
  DataTable out = *this;
  out.names_.erase(out.names_.begin() + static_cast<std::ptrdiff_t>(idx));
  out.columns_.erase(out.columns_.begin() + static_cast<std::ptrdiff_t>(idx));
  if (out.names_.empty()) out.nrows_ = 0;
  return out;
}

void DataTable::require_geographic(std::string_view lat, std::string_view lon) const {
  for (auto [name, limit] : {std::pair{lat, 90.0}, std::pair{lon, 180.0}}) {
    if (!has_column(name)) throw DataError("missing required column '" + std::string(name) + "'");
    if (!is_numeric(name)) throw DataError("column '" + std::string(name) + "' must be numeric");
    auto values = numeric(name);
    for (std::size_t i = 0; i < values.size(); ++i) {
      double v = values[i];
      if (std::isfinite(v) && std::abs(v) > limit) {
        throw DataError("column '" + std::string(name) + "' row " + std::to_string(i) +
                        " out of range: " + format_number(v));
      }
    }
  }
}

RowView DataTable::row(std::size_t index) const {
  if (index >= nrows_) throw DataError("row index out of range");
  return RowView(*this, index);
}

DataTable parse_csv(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
  auto records = split_records(text);
  if (records.empty()) throw ParseError("missing header row", 1);

  const auto& header = records.front().fields;
  std::set<std::string> seen;
  std::vector<std::string> names;
  for (const auto& raw : header) {
    std::string name(trim(raw));
    if (!seen.insert(name).second) throw ParseError("duplicate header name '" + name + "'", 1);
    names.push_back(std::move(name));
  }

  std::size_t ncols = names.size();
  std::size_t nrows = records.size() - 1;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != ncols) {
      throw ParseError("row has " + std::to_string(records[r].fields.size()) + " fields, header has " +
                           std::to_string(ncols),
                       records[r].line);
    }
  }

  std::vector<std::pair<std::string, Column>> columns;
  columns.reserve(ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    NumericColumn nums(nrows, std::numeric_limits<double>::quiet_NaN());
    bool numeric = true;
    for (std::size_t r = 0; r < nrows && numeric; ++r) {
      const std::string& cell = records[r + 1].fields[c];
      if (trim(cell).empty()) continue;
      numeric = parse_double(cell, nums[r]);
    }
    if (numeric) {
      columns.emplace_back(names[c], std::move(nums));
    } else {
      StringColumn strs;
      strs.reserve(nrows);
      for (std::size_t r = 0; r < nrows; ++r) strs.push_back(std::move(records[r + 1].fields[c]));
      columns.emplace_back(names[c], std::move(strs));
    }
  }
  DataTable t = DataTable::from_columns(std::move(columns));
  return t;
}

DataTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file '" + path.string() + "'");
  return parse_csv(in);
}

void write_csv(const DataTable& table, std::ostream& out) {
  const auto& names = table.column_names();
  auto write_field = [&](const std::string& s) {
    if (needs_quotes(s)) {
      out << '"';
      for (char ch : s) {
        if (ch == '"') out << '"';
        out << ch;
      }
      out << '"';
    } else {
      out << s;
    }
  };
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out << ',';
    write_field(names[c]);
  }
  out << '\n';
  for (std::size_t r = 0; r < table.nrows(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (c) out << ',';
      write_field(table.cell_text(names[c], r));
    }
    out << '\n';
  }
}

void write_csv(const DataTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write CSV file '" + path.string() + "'");
  write_csv(table, out);
}

}  // namespace terramap
