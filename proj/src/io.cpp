#include "gskor/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace gskor::io {
namespace {

std::ofstream open_out(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  return out;
}

double parse_double(const std::string& token, const std::filesystem::path& file,
                    std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || !std::isfinite(v))
    throw std::runtime_error(file.string() + ":" + std::to_string(line) +
                             ": bad numeric field '" + token + "'");
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

SampledPath read_path_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open path CSV: " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(file.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,value")
    throw std::runtime_error(file.string() + ": expected header 't,value', got '" + line + "'");

  std::vector<double> times, values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": missing comma");
    times.push_back(parse_double(line.substr(0, comma), file, lineno));
    values.push_back(parse_double(line.substr(comma + 1), file, lineno));
  }
  if (times.size() < 2)
    throw std::runtime_error(file.string() + ": need at least two rows (t=0 and t=T)");

  const double horizon = times.back();
  const std::size_t steps = times.size() - 1;
  const TimeGrid grid(horizon, steps);
  const double tol = 1e-9 * std::max(1.0, std::abs(horizon));
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - grid.node(i)) > tol)
      throw std::runtime_error(file.string() + ": time column is not the uniform grid at row " +
                               std::to_string(i + 2));
  }
  return SampledPath(grid, std::move(values));
}

void write_path_csv(const std::filesystem::path& file, const SampledPath& path) {
  std::ofstream out = open_out(file);
  out << "t,value\n";
  for (std::size_t i = 0; i < path.size(); ++i)
    out << format_double(path.grid().node(i)) << ',' << format_double(path[i]) << '\n';
}

void write_skorokhod_csv(const std::filesystem::path& file, const SampledPath& s,
                         const SkorokhodSolution& solution) {
  std::ofstream out = open_out(file);
  out << "t,s,x,k,k_r,k_l\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_double(s.grid().node(i)) << ',' << format_double(s[i]) << ','
        << format_double(solution.x[i]) << ',' << format_double(solution.k[i]) << ','
        << format_double(solution.k_r[i]) << ',' << format_double(solution.k_l[i]) << '\n';
  }
}

void write_sde_path_csv(const std::filesystem::path& file, const GBMPath& driver,
                        const ReflectedSdeSolution& solution) {
  std::ofstream out = open_out(file);
  out << "t,B,QV,X,A,A_r,A_l\n";
  for (std::size_t i = 0; i < driver.b.size(); ++i) {
    out << format_double(driver.b.grid().node(i)) << ',' << format_double(driver.b[i]) << ','
        << format_double(driver.qv[i]) << ',' << format_double(solution.x[i]) << ','
        << format_double(solution.a[i]) << ',' << format_double(solution.a_r[i]) << ','
        << format_double(solution.a_l[i]) << '\n';
  }
}

}  // namespace gskor::io
