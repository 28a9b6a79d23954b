#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace terramap {

using NumericColumn = std::vector<double>;
using StringColumn = std::vector<std::string>;
using Column = std::variant<NumericColumn, StringColumn>;

class RowView;

// Immutable columnar table. Columns are shared between tables produced by
// rename/drop_column, so those operations never copy data.
class DataTable {
 public:
  DataTable() = default;

  // Columns keep the given order. Throws DataError on length mismatch or
  // duplicate names.
  static DataTable from_columns(std::vector<std::pair<std::string, Column>> columns);

  std::size_t nrows() const noexcept { return nrows_; }
  std::size_t ncols() const noexcept { return names_.size(); }
  bool empty() const noexcept { return nrows_ == 0; }

  const std::vector<std::string>& column_names() const noexcept { return names_; }
  bool has_column(std::string_view name) const noexcept;
  bool is_numeric(std::string_view name) const;

  const Column& column(std::string_view name) const;
  std::span<const double> numeric(std::string_view name) const;
  const StringColumn& strings(std::string_view name) const;

  // Cell rendered as text; numbers use the shortest round-trip form, NaN is "".
  std::string cell_text(std::string_view name, std::size_t row) const;

  DataTable filter(const std::vector<bool>& mask) const;
  std::map<std::string, DataTable> group_by(std::string_view name) const;
  DataTable rename(std::string_view old_name, std::string_view new_name) const;
  DataTable drop_column(std::string_view name) const;
  DataTable take(std::span<const std::size_t> rows) const;

  // Checks the geographic invariant: both columns exist, are numeric, and
  // every finite value is within [-90, 90] / [-180, 180].
  void require_geographic(std::string_view lat = "lat", std::string_view lon = "lon") const;

  RowView row(std::size_t index) const;

 private:
  std::size_t index_of(std::string_view name) const;

  std::vector<std::string> names_;
  std::vector<std::shared_ptr<const Column>> columns_;
  std::size_t nrows_ = 0;
};

class RowView {
 public:
  RowView(const DataTable& table, std::size_t row) : table_(&table), row_(row) {}

  std::size_t index() const noexcept { return row_; }
  std::string operator[](std::string_view column) const { return table_->cell_text(column, row_); }
  double number(std::string_view column) const { return table_->numeric(column)[row_]; }
  const DataTable& table() const noexcept { return *table_; }

 private:
  const DataTable* table_;
  std::size_t row_;
};

using RowTooltip = std::function<std::string(const RowView&)>;

DataTable read_csv(const std::filesystem::path& path);
DataTable parse_csv(std::istream& in);
void write_csv(const DataTable& table, const std::filesystem::path& path);
void write_csv(const DataTable& table, std::ostream& out);

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

}  // namespace terramap
