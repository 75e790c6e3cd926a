#include "verhulst/csv_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

namespace verhulst {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    fields.push_back(trim(line.substr(begin, comma - begin)));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return fields;
}

std::optional<double> parse_double(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::InvalidData, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

TimeSeries read_time_series(std::istream& in, bool sort) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> t_col;
  std::optional<std::size_t> p_col;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split_fields(view);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i] == "t" && !t_col) t_col = i;
      if (fields[i] == "P" && !p_col) p_col = i;
    }
    if (!t_col || !p_col) fail(line_no, "header must name columns t and P");
    break;
  }
  if (!t_col) throw Error(ErrorKind::InvalidData, "input is empty");

  std::vector<Observation> points;
  std::vector<std::size_t> source_line;
  const std::size_t needed = std::max(*t_col, *p_col) + 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() < needed) fail(line_no, "expected at least " + std::to_string(needed) + " fields");
    const auto t = parse_double(fields[*t_col]);
    const auto p = parse_double(fields[*p_col]);
    if (!t) fail(line_no, "t value '" + std::string(fields[*t_col]) + "' is not a number");
    if (!p) fail(line_no, "P value '" + std::string(fields[*p_col]) + "' is not a number");
    if (!std::isfinite(*t) || !std::isfinite(*p)) fail(line_no, "values must be finite");
    if (!sort && !points.empty() && !(*t > points.back().t)) {
      fail(line_no, "t = " + std::string(fields[*t_col]) +
                        " does not increase (rows must be sorted by t; pass --sort to sort them)");
    }
    points.push_back({*t, *p});
    source_line.push_back(line_no);
  }
  if (points.empty()) throw Error(ErrorKind::InvalidData, "input has no data rows");

  if (sort) {
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a].t < points[b].t; });
    std::vector<Observation> sorted;
    sorted.reserve(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && points[order[i]].t == points[order[i - 1]].t) {
        fail(source_line[order[i]], "t = " + format_number(points[order[i]].t) + " is repeated");
      }
      sorted.push_back(points[order[i]]);
    }
    points = std::move(sorted);
  }
  return TimeSeries(std::move(points));
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

}  // namespace verhulst
