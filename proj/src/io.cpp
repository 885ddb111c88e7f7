#include "romslab/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "romslab/error.hpp"

namespace romslab {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_real(const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::InvalidArgument, "bad number in CSV: " + s);
  return x;
}

std::size_t parse_count(const std::string& s) {
  std::size_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::InvalidArgument, "bad count in CSV: " + s);
  return x;
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw Error(ErrorCode::InvalidArgument, "expected CSV header '" + header + "'");
  }
}

}  // namespace

std::string format_real(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

void write_error_table(std::ostream& out, const ErrorTable& table, bool timings) {
  out << "n,estimate,se,samples,flagged,wall_time_s\n";
  for (const auto& row : table.rows) {
    out << row.n << ',' << format_real(row.estimate) << ',' << format_real(row.se) << ',' << row.samples << ','
        << (row.flagged ? 1 : 0) << ',' << format_real(timings ? row.wall_time : 0.0) << '\n';
  }
}

ErrorTable read_error_table(std::istream& in) {
  expect_header(in, "n,estimate,se,samples,flagged,wall_time_s");
  ErrorTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) throw Error(ErrorCode::InvalidArgument, "error table rows need 6 fields");
    ErrorRow row;
    row.n = parse_count(f[0]);
    row.estimate = parse_real(f[1]);
    row.se = parse_real(f[2]);
    row.samples = parse_count(f[3]);
    row.flagged = parse_count(f[4]) != 0;
    row.wall_time = parse_real(f[5]);
    table.rows.push_back(row);
  }
  return table;
}

void write_regularization_table(std::ostream& out, const RegularizationTable& table) {
  out << "delta,error,consistency,bound,holds\n";
  for (const auto& row : table.rows) {
    out << format_real(row.delta) << ',' << format_real(row.error) << ',' << format_real(row.consistency) << ','
        << format_real(row.bound) << ',' << (row.holds ? 1 : 0) << '\n';
  }
}

void write_flux(std::ostream& out, const ScalarFlux& phi, const SpatialGrid& grid) {
  if (phi.size() != grid.cells()) throw Error(ErrorCode::GridMismatch, "flux length does not match the grid");
  out << "cell,x_left,x_right,phi\n";
  for (std::size_t i = 0; i < phi.size(); ++i) {
    out << i << ',' << format_real(grid.edges()[i]) << ',' << format_real(grid.edges()[i + 1]) << ','
        << format_real(phi[i]) << '\n';
  }
}

ScalarFlux read_flux(std::istream& in) {
  expect_header(in, "cell,x_left,x_right,phi");
  ScalarFlux phi;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4) throw Error(ErrorCode::InvalidArgument, "flux rows need 4 fields");
    phi.values.push_back(parse_real(f[3]));
  }
  return phi;
}

}  // namespace romslab
