#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "sysid/hammerstein.hpp"
#include "sysid/rls.hpp"

namespace sysid {

// Shortest round-trip decimal rendering; exact zero prints as "0".
std::string format_double(double value);

// Strict double parse of an entire field.
double parse_double(const std::string& field, bool* ok = nullptr);

std::vector<std::string> split_csv_line(const std::string& line);

// Sample stream format: header "phi_1,...,phi_r,y", one sample per row.
void write_samples_csv(std::ostream& out, const std::vector<RegressionSample>& samples);
// Throws std::invalid_argument with the 1-based line number on a bad row.
std::vector<RegressionSample> read_samples_csv(std::istream& in);

// io record format: "k,u,y".
void write_io_csv(std::ostream& out, const IoRecord& io);
IoRecord read_io_csv(std::istream& in);

std::string join_support(const std::set<int>& support);  // "5;6;7"

}  // namespace sysid
