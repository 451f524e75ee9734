#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sdflow/errors.hpp"
#include "sdflow/grid.hpp"

namespace sdflow {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_snapshot(std::ostream& out, const Field& f) {
  const Grid& g = f.grid();
  out << "SDFLOW1 " << g.n_x() << ' ' << g.n_theta() << ' ' << g17(g.r()) << ' '
      << g17(g.L_x()) << '\n';
  for (double v : f.values()) out << g17(v) << '\n';
}

void write_snapshot(const std::string& path, const Field& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open snapshot for writing: " + path);
  write_snapshot(out, f);
  if (!out) throw Error("failed writing snapshot: " + path);
}

Field read_snapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error("snapshot: missing header");
  std::istringstream hs(header);
  std::string magic;
  int n_x = 0, n_theta = 0;
  std::string r_text, L_text;
  hs >> magic >> n_x >> n_theta >> r_text >> L_text;
  if (magic != "SDFLOW1" || !hs) throw Error("snapshot: bad header '" + header + "'");
  Grid grid(n_x, n_theta, std::strtod(r_text.c_str(), nullptr), std::strtod(L_text.c_str(), nullptr));
  std::vector<double> values;
  values.reserve(grid.size());
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    // strtod rather than stod: subnormal values must round-trip without throwing.
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) throw Error("snapshot: bad value at line " + std::to_string(line_no));
    if (*end != '\0') throw Error("snapshot: trailing text at line " + std::to_string(line_no));
    values.push_back(v);
  }
  if (values.size() != grid.size()) {
    throw Error("snapshot: expected " + std::to_string(grid.size()) + " values, read " +
                std::to_string(values.size()));
  }
  return Field(grid, std::move(values));
}

Field read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open snapshot: " + path);
  return read_snapshot(in);
}

}  // namespace sdflow
