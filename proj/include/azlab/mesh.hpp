#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "azlab/errors.hpp"

namespace azlab {

/// P1 mesh on (0, L) with homogeneous Dirichlet ends. Nodes are
/// 0 = x_0 < x_1 < ... < x_{n+1} = L; the n interior nodes carry the
/// unknowns, element e spans [x_e, x_{e+1}] for e = 0..n.
class Mesh1D {
 public:
  explicit Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 3) throw BadConfig("mesh needs at least one interior node");
    if (nodes_.front() != 0.0) throw BadConfig("mesh must start at 0");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      if (!(nodes_[i + 1] > nodes_[i])) throw BadConfig("mesh nodes must be strictly increasing");
    }
  }

  static Mesh1D uniform(double length, int interior_nodes) {
    if (!(length > 0.0)) throw BadConfig("mesh length must be positive");
    if (interior_nodes < 1) throw BadConfig("mesh needs at least one interior node");
    const int n = interior_nodes;
    std::vector<double> nodes(static_cast<std::size_t>(n) + 2);
    const double h = length / (n + 1);
    for (int i = 0; i <= n + 1; ++i) nodes[static_cast<std::size_t>(i)] = i * h;
    nodes.back() = length;
    return Mesh1D(std::move(nodes));
  }

  int interior_count() const { return static_cast<int>(nodes_.size()) - 2; }
  int element_count() const { return static_cast<int>(nodes_.size()) - 1; }
  double length() const { return nodes_.back(); }
  double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  double h(int e) const { return nodes_[static_cast<std::size_t>(e) + 1] - nodes_[static_cast<std::size_t>(e)]; }
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  std::vector<double> nodes_;
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

inline MeshPtr build_mesh(double length, int interior_nodes) {
  return std::make_shared<const Mesh1D>(Mesh1D::uniform(length, interior_nodes));
}

inline MeshPtr wrap_mesh(std::vector<double> nodes) {
  return std::make_shared<const Mesh1D>(Mesh1D(std::move(nodes)));
}

/// Nodal values of a P1 function vanishing at both endpoints. Only the
/// interior values are stored.
struct DiscreteField {
  MeshPtr mesh;
  std::vector<double> values;

  DiscreteField() = default;
  DiscreteField(MeshPtr m, std::vector<double> v) : mesh(std::move(m)), values(std::move(v)) {
    if (!mesh || static_cast<int>(values.size()) != mesh->interior_count())
      throw BadConfig("field size does not match mesh");
  }

  static DiscreteField zero(const MeshPtr& m) {
    return DiscreteField(m, std::vector<double>(static_cast<std::size_t>(m->interior_count()), 0.0));
  }

  int size() const { return static_cast<int>(values.size()); }

  // Nodal value, boundary included (value(0) = value(n+1) = 0).
  double value_at_node(int i) const {
    const int n = size();
    if (i <= 0 || i >= n + 1) return 0.0;
    return values[static_cast<std::size_t>(i) - 1];
  }

  // Constant slope on element e.
  double slope(int e) const {
    return (value_at_node(e + 1) - value_at_node(e)) / mesh->h(e);
  }

  double sup_norm() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::fabs(v));
    return s;
  }
};

inline void check_same_mesh(const DiscreteField& a, const DiscreteField& b) {
  if (a.mesh != b.mesh && a.mesh->nodes() != b.mesh->nodes())
    throw BadConfig("fields live on different meshes");
}

inline DiscreteField axpy(double alpha, const DiscreteField& x, const DiscreteField& y) {
  check_same_mesh(x, y);
  DiscreteField r = y;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += alpha * x.values[i];
  return r;
}

inline DiscreteField scaled(const DiscreteField& x, double alpha) {
  DiscreteField r = x;
  for (double& v : r.values) v *= alpha;
  return r;
}

// Interpolate a callable at the interior nodes.
template <typename F>
DiscreteField interpolate(const MeshPtr& mesh, F&& f) {
  DiscreteField u = DiscreteField::zero(mesh);
  for (int i = 1; i <= mesh->interior_count(); ++i)
    u.values[static_cast<std::size_t>(i) - 1] = f(mesh->node(i));
  return u;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Plain-text field table: header "x,u", one node per line, endpoints
/// included.
inline void write_field(std::ostream& out, const DiscreteField& u) {
  out << "x,u\n";
  const int n = u.size();
  for (int i = 0; i <= n + 1; ++i)
    out << format_double(u.mesh->node(i)) << ',' << format_double(u.value_at_node(i)) << '\n';
}

inline DiscreteField read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw BadConfig("empty field table");
  // tolerate an optional UTF-8 BOM and surrounding spaces in the header
  if (line.find("x,u") == std::string::npos) throw BadConfig("field table missing 'x,u' header");
  std::vector<double> xs, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw BadConfig("malformed field table line: " + line);
    xs.push_back(std::stod(line.substr(0, comma)));
    us.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 3) throw BadConfig("field table needs at least three nodes");
  if (std::fabs(us.front()) > 1e-12 || std::fabs(us.back()) > 1e-12)
    throw BadConfig("field table endpoints must vanish");
  MeshPtr mesh = wrap_mesh(xs);
  return DiscreteField(mesh, std::vector<double>(us.begin() + 1, us.end() - 1));
}

}  // namespace azlab
