#include "conformal/cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace conformal::cli {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // Trim ASCII whitespace on both ends.
    const auto a = cell.find_first_not_of(" \t\r");
    const auto b = cell.find_last_not_of(" \t\r");
    cells.push_back(a == std::string::npos ? std::string() : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, const std::filesystem::path& path,
                  std::size_t line_no, std::size_t col) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || cell.empty()) {
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": column " +
                    std::to_string(col + 1) + " is not a number: '" + cell + "'");
  }
  if (!std::isfinite(v)) {
    throw DataError(path.string() + ":" + std::to_string(line_no) +
                    ": non-finite value in column " + std::to_string(col + 1));
  }
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // numeric cells; string cells handled by caller
  std::vector<std::vector<std::string>> raw_rows;
};

CsvTable read_table(const std::filesystem::path& path, bool numeric) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto cells = split_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      if (table.header.empty()) throw DataError(path.string() + ": empty header");
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(table.header.size()) +
                      " columns, found " + std::to_string(cells.size()));
    }
    if (numeric) {
      std::vector<double> row(cells.size());
      for (std::size_t c = 0; c < cells.size(); ++c) {
        row[c] = parse_cell(cells[c], path, line_no, c);
      }
      table.rows.push_back(std::move(row));
    } else {
      table.raw_rows.push_back(std::move(cells));
    }
  }
  if (table.header.empty()) throw DataError(path.string() + ": file is empty");
  return table;
}

void expect_header(const CsvTable& table, std::initializer_list<const char*> names,
                   const std::filesystem::path& path) {
  if (table.header.size() != names.size()) {
    throw DataError(path.string() + ": unexpected header width");
  }
  std::size_t i = 0;
  for (const char* name : names) {
    if (table.header[i] != name) {
      throw DataError(path.string() + ": expected header column '" + name + "', found '" +
                      table.header[i] + "'");
    }
    ++i;
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

core::Dataset read_series_csv(const std::filesystem::path& path) {
  const auto table = read_table(path, /*numeric=*/true);
  const auto& header = table.header;
  if (header.empty() || header[0] != "t") {
    throw DataError(path.string() + ": first column must be 't'");
  }
  std::size_t d = 0;
  std::size_t i = 1;
  while (i < header.size() && !header[i].empty() && header[i][0] == 'x') {
    ++d;
    ++i;
  }
  std::size_t m = 0;
  while (i < header.size() && !header[i].empty() && header[i][0] == 'y') {
    ++m;
    ++i;
  }
  if (i != header.size() || m == 0) {
    throw DataError(path.string() + ": header must be t,x1..xd,y1..ym");
  }
  if (table.rows.empty()) throw DataError(path.string() + ": no data rows");
  core::Dataset data(d, m);
  data.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    data.add_row({row.data() + 1, d}, {row.data() + 1 + d, m});
  }
  return data;
}

MultiSeries read_multi_series_csv(const std::filesystem::path& path) {
  const auto table = read_table(path, /*numeric=*/false);
  expect_header(table, {"series_id", "t", "y"}, path);
  if (table.raw_rows.empty()) throw DataError(path.string() + ": no data rows");
  MultiSeries out;
  std::size_t line_no = 1;
  for (const auto& row : table.raw_rows) {
    ++line_no;
    const std::string& id = row[0];
    if (id.empty()) throw DataError(path.string() + ": empty series_id");
    const double y = parse_cell(row[2], path, line_no, 2);
    if (out.ids.empty() || out.ids.back() != id) {
      for (const auto& seen : out.ids) {
        if (seen == id) {
          throw DataError(path.string() + ": series '" + id + "' is not contiguous");
        }
      }
      out.ids.push_back(id);
      out.series.emplace_back();
    }
    out.series.back().push_back(y);
  }
  return out;
}

core::Dataset windows_from_series(const MultiSeries& data, std::size_t t_in,
                                  std::size_t horizon) {
  if (t_in == 0 || horizon == 0) {
    throw std::invalid_argument("t_in and horizon must be >= 1");
  }
  core::Dataset out(t_in, horizon);
  out.reserve(data.series.size());
  for (std::size_t s = 0; s < data.series.size(); ++s) {
    const auto& y = data.series[s];
    if (y.size() < t_in + horizon) {
      throw DataError("series '" + data.ids[s] + "' has " + std::to_string(y.size()) +
                      " steps, needs " + std::to_string(t_in + horizon));
    }
    out.add_row({y.data(), t_in}, {y.data() + t_in, horizon});
  }
  return out;
}

std::vector<safety::SafetyRecord> read_safety_csv(const std::filesystem::path& path) {
  const auto table = read_table(path, /*numeric=*/true);
  expect_header(table, {"phi", "phi_hat"}, path);
  if (table.rows.empty()) throw DataError(path.string() + ": no data rows");
  std::vector<safety::SafetyRecord> records(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    records[i].phi = table.rows[i][0];
    records[i].phi_hat = table.rows[i][1];
  }
  return records;
}

}  // namespace conformal::cli
