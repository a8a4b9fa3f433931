#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace staqst {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

/// RFC-4180 style table: comma separated, CRLF-free ("\n") line endings,
/// fields quoted only when they contain a comma, quote or newline.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> fields);
  void add_row(const std::vector<double>& values);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// One pass/fail comparison against a published threshold.
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  ///< ">=", "<=", "<", ">", "within"
  double threshold = 0.0;
  bool passed = false;
};

Check check_at_least(std::string name, double value, double threshold);
Check check_at_most(std::string name, double value, double threshold);
Check check_below(std::string name, double value, double threshold);
Check check_within(std::string name, double value, double target, double tolerance);

using SummaryValue = std::variant<double, long, bool, std::string>;

/// Flat key/value run summary plus threshold checks.
struct Summary {
  std::string experiment;
  std::vector<std::pair<std::string, SummaryValue>> values;
  std::vector<Check> checks;

  void set(std::string key, SummaryValue value);
  bool all_passed() const;

  /// Flat JSON object: "experiment", the values in insertion order, then
  /// "check.<name>.{value,relation,threshold,pass}" and "pass".
  std::string to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace staqst
