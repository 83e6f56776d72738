#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "homlift/common.hpp"
#include "homlift/diagram.hpp"
#include "homlift/lift.hpp"
#include "homlift/persistence.hpp"
#include "homlift/point_cloud.hpp"

namespace homlift {

// Numeric fields are written with 17 significant digits so doubles
// round-trip exactly and reruns are byte-identical.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

inline double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw validation_error("parse error at " + context + ": '" + s +
                           "' is not a number");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Point cloud CSV: header x0,...,x{n-1}, one point per row.
// ---------------------------------------------------------------------------

inline void write_point_csv(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot open for writing: " + path);
  for (int i = 0; i < cloud.ambient_dim; ++i)
    out << (i ? "," : "") << "x" << i;
  out << "\n";
  for (const Vector& p : cloud.points) {
    for (int i = 0; i < cloud.ambient_dim; ++i)
      out << (i ? "," : "") << format_double(p[i]);
    out << "\n";
  }
}

inline PointCloud read_point_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw validation_error("empty point CSV: " + path);
  int n = static_cast<int>(detail::split_csv_line(line).size());
  PointCloud cloud(n);
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (static_cast<int>(fields.size()) != n)
      throw validation_error("point CSV " + path + " line " +
                             std::to_string(row) + ": expected " +
                             std::to_string(n) + " fields");
    Vector p(n);
    for (int i = 0; i < n; ++i)
      p[i] = detail::parse_double(fields[i], path + ":" + std::to_string(row) +
                                                 ":" + std::to_string(i + 1));
    cloud.add(p);
  }
  return cloud;
}

// ---------------------------------------------------------------------------
// Lifted cloud CSV: header x0..x{n-1},m00,m01,...,m{n-1}{n-1} (row-major).
// ---------------------------------------------------------------------------

inline void write_lifted_csv(const LiftedCloud& lifted, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot open for writing: " + path);
  const int n = lifted.ambient_dim;
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << "x" << i;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out << ",m" << r << c;
  out << "\n";
  for (std::size_t k = 0; k < lifted.size(); ++k) {
    for (int i = 0; i < n; ++i)
      out << (i ? "," : "") << format_double(lifted.base_points[k][i]);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out << "," << format_double(lifted.matrices[k](r, c));
    out << "\n";
  }
}

inline LiftedCloud read_lifted_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw validation_error("empty lifted CSV: " + path);
  int cols = static_cast<int>(detail::split_csv_line(line).size());
  // cols = n + n^2
  int n = 0;
  while (n + n * n < cols) ++n;
  if (n + n * n != cols)
    throw validation_error("lifted CSV " + path +
                           ": column count is not n + n^2");
  LiftedCloud lifted;
  lifted.ambient_dim = n;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (static_cast<int>(fields.size()) != cols)
      throw validation_error("lifted CSV " + path + " line " +
                             std::to_string(row) + ": wrong field count");
    Vector x(n);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      x[i] = detail::parse_double(fields[i], path + ":" + std::to_string(row));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) = detail::parse_double(fields[n + r * n + c],
                                       path + ":" + std::to_string(row));
    lifted.add(x, m);
  }
  return lifted;
}

// ---------------------------------------------------------------------------
// Diagram JSON: {"dims":[{"dim":k,"pairs":[[b,d],...]}]}, "inf" for infinite
// deaths. Shared between the persistence outputs and the compare verb.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json diagram_to_json(const PersistenceDiagram& diagram) {
  nlohmann::ordered_json dims = nlohmann::ordered_json::array();
  int top = diagram.max_dim();
  for (int d = 0; d <= top; ++d) {
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const Bar& b : diagram.in_dim(d)) {
      nlohmann::ordered_json pair = nlohmann::ordered_json::array();
      pair.push_back(b.birth);
      if (b.infinite())
        pair.push_back("inf");
      else
        pair.push_back(b.death);
      pairs.push_back(pair);
    }
    dims.push_back({{"dim", d}, {"pairs", pairs}});
  }
  return nlohmann::ordered_json{{"dims", dims}};
}

inline void write_diagram_json(const PersistenceDiagram& diagram,
                               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot open for writing: " + path);
  out << diagram_to_json(diagram).dump(2) << "\n";
}

inline PersistenceDiagram diagram_from_json(const nlohmann::json& j) {
  PersistenceDiagram diagram;
  if (!j.contains("dims") || !j["dims"].is_array())
    throw validation_error("diagram JSON: missing 'dims' array");
  for (const auto& entry : j["dims"]) {
    int dim = entry.at("dim").get<int>();
    for (const auto& pair : entry.at("pairs")) {
      if (!pair.is_array() || pair.size() != 2)
        throw validation_error("diagram JSON: pair is not [birth, death]");
      double birth = pair[0].get<double>();
      double death;
      if (pair[1].is_string()) {
        if (pair[1].get<std::string>() != "inf")
          throw validation_error("diagram JSON: bad death string");
        death = kInfinity;
      } else {
        death = pair[1].get<double>();
      }
      diagram.bars.push_back({dim, birth, death});
    }
  }
  return diagram;
}

inline PersistenceDiagram read_diagram_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error("diagram JSON " + path + ": " + e.what());
  }
  return diagram_from_json(j);
}

// ---------------------------------------------------------------------------
// Filtration dump, one simplex per line: value then the vertex list.
// ---------------------------------------------------------------------------

inline void write_filtration_dump(const Filtration& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot open for writing: " + path);
  for (int d = 0; d <= f.max_dim; ++d)
    for (std::int64_t i = 0; i < f.count(d); ++i) {
      out << format_double(f.values[d][i]);
      for (std::int32_t v : f.simplex(d, i)) out << " " << v;
      out << "\n";
    }
}

}  // namespace homlift
