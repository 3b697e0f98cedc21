#include "sysid/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sysid {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, bool* ok) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  const bool good = res.ec == std::errc() && res.ptr == end && !field.empty();
  if (ok) {
    *ok = good;
    return good ? value : 0.0;
  }
  if (!good) throw std::invalid_argument("parse_double: bad number '" + field + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

void write_samples_csv(std::ostream& out, const std::vector<RegressionSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("write_samples_csv: empty stream");
  const int r = static_cast<int>(samples.front().phi.size());
  for (int i = 1; i <= r; ++i) out << "phi_" << i << ",";
  out << "y\n";
  for (const auto& s : samples) {
    for (int i = 0; i < r; ++i) out << format_double(s.phi(i)) << ",";
    out << format_double(s.y) << "\n";
  }
}

std::vector<RegressionSample> read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("line 1: missing header");
  const auto header = split_csv_line(line);
  const int r = static_cast<int>(header.size()) - 1;
  if (r < 1 || header.back() != "y")
    throw std::invalid_argument("line 1: expected header phi_1,...,phi_r,y");
  for (int i = 0; i < r; ++i)
    if (header[static_cast<std::size_t>(i)] != "phi_" + std::to_string(i + 1))
      throw std::invalid_argument("line 1: expected header phi_1,...,phi_r,y");

  std::vector<RegressionSample> samples;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != r + 1)
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(r + 1) + " fields");
    RegressionSample s;
    s.phi.resize(r);
    bool ok = false;
    for (int i = 0; i <= r; ++i) {
      const double v = parse_double(fields[static_cast<std::size_t>(i)], &ok);
      if (!ok)
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": bad number '" + fields[static_cast<std::size_t>(i)] + "'");
      if (i < r)
        s.phi(i) = v;
      else
        s.y = v;
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty())
    throw std::invalid_argument("line 1: no data rows");
  return samples;
}

void write_io_csv(std::ostream& out, const IoRecord& io) {
  out << "k,u,y\n";
  for (std::size_t k = 0; k < io.u.size(); ++k)
    out << (k + 1) << "," << format_double(io.u[k]) << ","
        << format_double(io.y[k]) << "\n";
}

IoRecord read_io_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"k", "u", "y"})
    throw std::invalid_argument("line 1: expected header k,u,y");
  IoRecord io;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 3 fields");
    io.u.push_back(parse_double(fields[1]));
    io.y.push_back(parse_double(fields[2]));
  }
  return io;
}

std::string join_support(const std::set<int>& support) {
  std::ostringstream out;
  bool first = true;
  for (int idx : support) {
    if (!first) out << ";";
    out << idx;
    first = false;
  }
  return out.str();
}

}  // namespace sysid
