#include "fiscal/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fiscal/errors.hpp"

namespace fiscal {

namespace {

Quarter quarter_from_date(const std::string& date, const std::string& path, int row) {
  int y = 0, mo = 0, d = 0;
  if (std::sscanf(date.c_str(), "%d-%d-%d", &y, &mo, &d) != 3)
    throw DataError(path + ": malformed date '" + date + "' at row " + std::to_string(row));
  if (d != 1 || (mo != 1 && mo != 4 && mo != 7 && mo != 10))
    throw DataError(path + ": date '" + date + "' at row " + std::to_string(row) +
                    " is not a quarter start");
  return Quarter{y, (mo - 1) / 3 + 1};
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

QuarterlySeries load_fred_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  line = trim(line);
  const auto comma = line.find(',');
  if (comma == std::string::npos || trim(line.substr(0, comma)) != "DATE")
    throw DataError(path + ": expected header 'DATE,<NAME>'");
  const std::string name = trim(line.substr(comma + 1));
  if (name.empty()) throw DataError(path + ": header is missing a series name");

  std::vector<double> values;
  Quarter start{};
  int row = 1;
  int prev_idx = 0;
  while (std::getline(in, line)) {
    ++row;
    line = trim(line);
    if (line.empty()) continue;
    const auto c = line.find(',');
    if (c == std::string::npos)
      throw DataError(path + ": malformed row " + std::to_string(row));
    const Quarter q = quarter_from_date(trim(line.substr(0, c)), path, row);
    const std::string raw = trim(line.substr(c + 1));
    if (raw == "." || raw.empty())
      throw DataError(path + ": missing value at row " + std::to_string(row));
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
    } catch (const std::exception&) {
      throw DataError(path + ": non-numeric value '" + raw + "' at row " + std::to_string(row));
    }
    if (values.empty()) {
      start = q;
    } else if (q.index() != prev_idx + 1) {
      throw DataError(path + ": non-quarterly date spacing at row " + std::to_string(row));
    }
    prev_idx = q.index();
    values.push_back(v);
  }
  if (values.empty()) throw DataError(path + ": no data rows");
  return QuarterlySeries(start, std::move(values), name);
}

void write_fred_csv(const QuarterlySeries& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write data file: " + path);
  out << "DATE," << s.name() << "\n";
  char buf[64];
  for (std::size_t t = 0; t < s.size(); ++t) {
    const Quarter q = s.date_at(t);
    std::snprintf(buf, sizeof(buf), "%04d-%02d-01,%.12g\n", q.year, (q.q - 1) * 3 + 1, s[t]);
    out << buf;
  }
}

}  // namespace fiscal
