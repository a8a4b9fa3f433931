#include "staqst/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "staqst/error.hpp"

namespace staqst {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote_field(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size()) {
    throw DomainError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(header_.size()));
  }
  rows_.push_back(std::move(fields));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (double v : values) fields.push_back(format_number(v));
  add_row(std::move(fields));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << quote_field(fields[i]);
    }
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

Check check_at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, ">=", threshold, value >= threshold};
}

Check check_at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, "<=", threshold, value <= threshold};
}

Check check_below(std::string name, double value, double threshold) {
  return {std::move(name), value, "<", threshold, value < threshold};
}

Check check_within(std::string name, double value, double target, double tolerance) {
  return {std::move(name), value, "within " + format_number(tolerance) + " of", target,
          std::abs(value - target) <= tolerance};
}

void Summary::set(std::string key, SummaryValue value) {
  for (auto& kv : values) {
    if (kv.first == key) {
      kv.second = std::move(value);
      return;
    }
  }
  values.emplace_back(std::move(key), std::move(value));
}

bool Summary::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string Summary::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  for (const auto& [key, value] : values) {
    std::visit([&j, &k = key](const auto& v) { j[k] = v; }, value);
  }
  for (const auto& c : checks) {
    j["check." + c.name + ".value"] = c.value;
    j["check." + c.name + ".relation"] = c.relation;
    j["check." + c.name + ".threshold"] = c.threshold;
    j["check." + c.name + ".pass"] = c.passed;
  }
  j["pass"] = all_passed();
  return j.dump(2) + "\n";
}

void Summary::write(const std::filesystem::path& path) const { write_text(path, to_json()); }

}  // namespace staqst
