#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gfc/error.hpp"

namespace gfc {

/// A real function sampled on a strictly increasing mesh. Evaluation between
/// nodes is piecewise linear (interp_order 1) or local cubic Lagrange
/// (interp_order 3); outside the mesh the end piece is extended.
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(std::vector<double> mesh, std::vector<double> values, int interp_order = 1)
      : mesh_(std::move(mesh)), values_(std::move(values)), order_(interp_order) {
    if (mesh_.size() != values_.size()) throw DomainError("GridFunction: mesh and values differ in length");
    if (mesh_.size() < 2) throw DomainError("GridFunction: need at least two nodes");
    for (std::size_t i = 1; i < mesh_.size(); ++i) {
      if (!(mesh_[i] > mesh_[i - 1])) throw DomainError("GridFunction: mesh must be strictly increasing");
    }
    if (order_ != 1 && order_ != 3) throw DomainError("GridFunction: interp_order must be 1 or 3");
    if (order_ == 3 && mesh_.size() < 4) order_ = 1;
  }

  template <class F>
  static GridFunction sample(F&& f, const std::vector<double>& mesh, int interp_order = 1) {
    std::vector<double> v;
    v.reserve(mesh.size());
    for (double x : mesh) v.push_back(f(x));
    return GridFunction(mesh, std::move(v), interp_order);
  }

  static std::vector<double> uniform_mesh(double a, double b, int n) {
    if (n < 2) throw DomainError("uniform_mesh: need at least two points");
    std::vector<double> m(n);
    for (int i = 0; i < n; ++i) m[i] = a + (b - a) * i / (n - 1);
    m.back() = b;
    return m;
  }

  const std::vector<double>& mesh() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }
  int interp_order() const { return order_; }
  std::size_t size() const { return mesh_.size(); }
  double front() const { return mesh_.front(); }
  double back() const { return mesh_.back(); }

  double operator()(double x) const {
    const std::size_t n = mesh_.size();
    std::size_t i = static_cast<std::size_t>(std::upper_bound(mesh_.begin(), mesh_.end(), x) - mesh_.begin());
    i = std::clamp<std::size_t>(i, 1, n - 1);  // x in [mesh[i-1], mesh[i]]
    if (order_ == 1) {
      const double t = (x - mesh_[i - 1]) / (mesh_[i] - mesh_[i - 1]);
      return values_[i - 1] + t * (values_[i] - values_[i - 1]);
    }
    std::size_t s = i >= 2 ? i - 2 : 0;
    s = std::min(s, n - 4);
    double sum = 0.0;
    for (std::size_t j = s; j < s + 4; ++j) {
      double l = 1.0;
      for (std::size_t m = s; m < s + 4; ++m) {
        if (m != j) l *= (x - mesh_[m]) / (mesh_[j] - mesh_[m]);
      }
      sum += l * values_[j];
    }
    return sum;
  }

  double sup_distance(const GridFunction& other) const {
    if (other.mesh_ != mesh_) throw DomainError("sup_distance: meshes differ");
    double d = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) d = std::max(d, std::abs(values_[i] - other.values_[i]));
    return d;
  }

  std::string to_csv(const std::string& value_header = "value", const std::string& x_header = "x") const {
    std::ostringstream os;
    os << x_header << ',' << value_header << "\r\n";
    for (std::size_t i = 0; i < mesh_.size(); ++i) os << fmt(mesh_[i]) << ',' << fmt(values_[i]) << "\r\n";
    return os.str();
  }

  std::string to_json() const {
    std::ostringstream os;
    os << "{\"interp_order\":" << order_ << ",\"mesh\":[";
    for (std::size_t i = 0; i < mesh_.size(); ++i) os << (i ? "," : "") << fmt(mesh_[i]);
    os << "],\"values\":[";
    for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? "," : "") << fmt(values_[i]);
    os << "]}";
    return os.str();
  }

  /// Reads `x,value` rows; a non-numeric first line is taken as a header.
  static GridFunction from_csv(const std::string& path, int interp_order = 1) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file " + path);
    std::vector<double> xs, vs;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ConfigError("CSV row without comma: " + line);
      try {
        std::size_t used = 0;
        const double x = std::stod(line.substr(0, comma), &used);
        const double v = std::stod(line.substr(comma + 1));
        xs.push_back(x);
        vs.push_back(v);
      } catch (const std::logic_error&) {
        if (!first) throw ConfigError("malformed CSV row: " + line);
      }
      first = false;
    }
    return GridFunction(std::move(xs), std::move(vs), interp_order);
  }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  std::vector<double> mesh_;
  std::vector<double> values_;
  int order_ = 1;
};

}  // namespace gfc
