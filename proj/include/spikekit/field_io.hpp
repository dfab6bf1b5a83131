#ifndef SPIKEKIT_FIELD_IO_HPP
#define SPIKEKIT_FIELD_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "spikekit/errors.hpp"
#include "spikekit/grid.hpp"

namespace spikekit {

// Field snapshot format: one header line
//   # nx=<int> ny=<int> Lx=<float> Ly=<float> t=<float> name=<u|v|w>
// then one value per line, row-major, 17 significant digits.
// ny=1 and Ly=0 encode a one-dimensional field.

inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_field_csv(const Field& f, const std::string& path, double t,
                            const std::string& name) {
  std::ofstream out(path);
  if (!out) throw error("write_field_csv: cannot open " + path);
  const Grid& g = f.grid;
  out << "# nx=" << g.nx << " ny=" << g.ny << " Lx=" << format_g17(g.dom.Lx)
      << " Ly=" << format_g17(g.dom.Ly) << " t=" << format_g17(t)
      << " name=" << name << "\n";
  for (double x : f.v) out << format_g17(x) << "\n";
  if (!out) throw error("write_field_csv: write failed for " + path);
}

struct FieldSnapshot {
  Field field;
  double t = 0.0;
  std::string name;
};

inline FieldSnapshot read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("read_field_csv: cannot open " + path);
  std::string header;
  std::getline(in, header);
  int nx = 0, ny = 0;
  double Lx = 0, Ly = 0, t = 0;
  char name[16] = {0};
  int got = std::sscanf(header.c_str(),
                        "# nx=%d ny=%d Lx=%lf Ly=%lf t=%lf name=%15s", &nx,
                        &ny, &Lx, &Ly, &t, name);
  if (got != 6)
    throw validation_error("read_field_csv: malformed header in " + path);
  Grid g = ny <= 1 ? Grid::make(Domain::interval(Lx), nx)
                   : Grid::make(Domain::rectangle(Lx, Ly), nx, ny);
  FieldSnapshot snap;
  snap.field = Field(g);
  snap.t = t;
  snap.name = name;
  for (std::size_t k = 0; k < snap.field.v.size(); ++k) {
    if (!(in >> snap.field.v[k]))
      throw validation_error("read_field_csv: truncated data in " + path);
  }
  return snap;
}

} // namespace spikekit

#endif
