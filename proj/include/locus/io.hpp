#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "locus/errors.hpp"
#include "locus/grid.hpp"

namespace locus {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::kInterval: return "interval";
    case DomainKind::kRectangle: return "rectangle";
    case DomainKind::kRadial: return "radial";
  }
  return "?";
}

inline const char* to_string(BoundaryKind b) {
  switch (b) {
    case BoundaryKind::kDirichlet: return "dirichlet";
    case BoundaryKind::kNeumann: return "neumann";
    case BoundaryKind::kNone: return "none";
  }
  return "?";
}

/// Field snapshot: text header followed by one row per node,
/// "i [j] x [y] re im" with 17 significant digits (bit-exact round trip).
inline void write_field(std::ostream& os, const Field& f) {
  const Domain& d = f.domain();
  os << "locus-field v1\n";
  os << "kind " << to_string(d.kind) << "\n";
  os << "bounds " << format_g17(d.lo0) << " " << format_g17(d.hi0);
  if (d.axes() == 2) os << " " << format_g17(d.lo1) << " " << format_g17(d.hi1);
  os << "\n";
  os << "N " << d.ambient_N << "\n";
  os << "h " << format_g17(f.h()) << "\n";
  os << "bc " << to_string(f.bc()) << "\n";
  os << "n " << f.nx();
  if (d.axes() == 2) os << " " << f.ny();
  os << "\n";
  for (int j = 0; j < f.ny(); ++j) {
    for (int i = 0; i < f.nx(); ++i) {
      os << i;
      if (d.axes() == 2) os << " " << j;
      os << " " << format_g17(f.x(i));
      if (d.axes() == 2) os << " " << format_g17(f.y(j));
      os << " " << format_g17(f.at(i, j).real()) << " "
         << format_g17(f.at(i, j).imag()) << "\n";
    }
  }
}

inline void write_field_file(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw ConfigInvalid("cannot open for writing: " + path);
  write_field(os, f);
}

inline Field read_field(std::istream& is) {
  std::string line, word;
  if (!std::getline(is, line) || line != "locus-field v1")
    throw ConfigInvalid("bad field snapshot header");

  std::string kind, bc;
  double lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0, h = 0;
  int N = 1, nx = 0, ny = 1;
  bool planar = false;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    ls >> word;
    if (word == "kind") {
      ls >> kind;
      planar = (kind == "rectangle");
    } else if (word == "bounds") {
      ls >> lo0 >> hi0;
      if (planar) ls >> lo1 >> hi1;
    } else if (word == "N") {
      ls >> N;
    } else if (word == "h") {
      ls >> h;
    } else if (word == "bc") {
      ls >> bc;
    } else if (word == "n") {
      ls >> nx;
      if (planar) ls >> ny;
      break;
    } else {
      throw ConfigInvalid("unknown field snapshot header line: " + line);
    }
  }

  Domain dom = kind == "interval"    ? Domain::interval(lo0, hi0)
               : kind == "rectangle" ? Domain::rectangle(lo0, hi0, lo1, hi1)
               : kind == "radial"    ? Domain::radial(hi0, N)
                                     : throw ConfigInvalid("unknown domain kind: " + kind);
  BoundaryKind bck = bc == "dirichlet" ? BoundaryKind::kDirichlet
                     : bc == "neumann" ? BoundaryKind::kNeumann
                                       : BoundaryKind::kNone;
  Field f(dom, h, bck);
  if (f.nx() != nx || f.ny() != ny)
    throw ConfigInvalid("field snapshot grid counts do not match bounds/h");
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!std::getline(is, line)) throw ConfigInvalid("field snapshot truncated");
      std::istringstream ls(line);
      int ri, rj = 0;
      double px, py, re, im;
      ls >> ri;
      if (planar) ls >> rj;
      ls >> px;
      if (planar) ls >> py;
      ls >> re >> im;
      if (!ls || ri != i || rj != j)
        throw ConfigInvalid("field snapshot row out of order");
      f.at(i, j) = Complex{re, im};
    }
  }
  return f;
}

inline Field read_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigInvalid("cannot open field snapshot: " + path);
  return read_field(is);
}

}  // namespace locus
