#include "rst/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rst/csv.hpp"

namespace rst {

namespace {
// Fractional offsets within this distance of a node snap onto it, so that
// points produced by coordinate() interpolate to exactly that node's value.
constexpr double kSnap = 1e-10;
}  // namespace

const char* to_string(InterpMode mode) {
  return mode == InterpMode::nearest ? "nearest" : "multilinear";
}

InterpMode parse_interp_mode(std::string_view text) {
  if (text == "multilinear") return InterpMode::multilinear;
  if (text == "nearest") return InterpMode::nearest;
  throw std::invalid_argument("unknown interpolation mode '" + std::string(text) +
                              "' (expected multilinear or nearest)");
}

StateGrid::StateGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > kMaxStateDim) {
    throw std::invalid_argument("grid dimension must be in [1, " + std::to_string(kMaxStateDim) +
                                "]");
  }
  size_ = 1;
  for (const auto& a : axes_) {
    if (!(a.lower < a.upper)) throw std::invalid_argument("grid axis needs lower < upper");
    if (a.nodes < 2) throw std::invalid_argument("grid axis needs at least 2 nodes");
    strides_.push_back(size_);
    size_ *= a.nodes;
  }
}

double StateGrid::spacing(std::size_t d) const {
  const auto& a = axes_.at(d);
  return (a.upper - a.lower) / static_cast<double>(a.nodes - 1);
}

double StateGrid::max_spacing() const {
  double h = 0;
  for (std::size_t d = 0; d < dim(); ++d) h = std::max(h, spacing(d));
  return h;
}

void StateGrid::coordinate_into(std::size_t node, std::span<double> out) const {
  for (std::size_t d = 0; d < dim(); ++d) {
    const auto& a = axes_[d];
    const std::size_t i = (node / strides_[d]) % a.nodes;
    out[d] = i + 1 == a.nodes
                 ? a.upper
                 : a.lower + (a.upper - a.lower) * static_cast<double>(i) /
                                 static_cast<double>(a.nodes - 1);
  }
}

State StateGrid::coordinate(std::size_t node) const {
  if (node >= size_) throw std::out_of_range("grid node out of range");
  State x(dim());
  coordinate_into(node, x);
  return x;
}

bool StateGrid::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t d = 0; d < dim(); ++d) {
    if (!(x[d] >= axes_[d].lower && x[d] <= axes_[d].upper)) return false;
  }
  return true;
}

Stencil StateGrid::stencil(std::span<const double> x, InterpMode mode) const {
  Stencil st;
  stencil_into(x, mode, st);
  return st;
}

void StateGrid::stencil_into(std::span<const double> x, InterpMode mode, Stencil& st) const {
  std::array<std::size_t, kMaxStateDim> base{};
  std::array<double, kMaxStateDim> frac{};
  const std::size_t n = dim();
  for (std::size_t d = 0; d < n; ++d) {
    const auto& a = axes_[d];
    const double xc = std::clamp(x[d], a.lower, a.upper);
    const double s = (xc - a.lower) / (a.upper - a.lower) * static_cast<double>(a.nodes - 1);
    if (mode == InterpMode::nearest) {
      const double r = std::floor(s + 0.5);
      base[d] = std::min(static_cast<std::size_t>(std::max(r, 0.0)), a.nodes - 1);
      frac[d] = 0.0;
      continue;
    }
    std::size_t i0 = static_cast<std::size_t>(std::max(std::floor(s), 0.0));
    if (i0 > a.nodes - 2) i0 = a.nodes - 2;
    double t = s - static_cast<double>(i0);
    if (t < kSnap) {
      t = 0.0;
    } else if (t > 1.0 - kSnap) {
      ++i0;
      t = 0.0;
    }
    base[d] = i0;
    frac[d] = t;
  }

  st.clear();
  const std::size_t corners = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < corners; ++mask) {
    double w = 1.0;
    std::size_t node = 0;
    bool skip = false;
    for (std::size_t d = 0; d < n; ++d) {
      const bool up = (mask >> d) & 1U;
      if (up && frac[d] == 0.0) {
        skip = true;
        break;
      }
      w *= up ? frac[d] : 1.0 - frac[d];
      node += (base[d] + (up ? 1 : 0)) * strides_[d];
    }
    if (!skip) st.push(node, w);
  }
}

ControlMesh::ControlMesh(std::vector<Control> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("control mesh must be nonempty");
  const std::size_t p = values_.front().size();
  if (p == 0) throw std::invalid_argument("control values must be nonempty vectors");
  for (const auto& u : values_) {
    if (u.size() != p) throw std::invalid_argument("control values must share one dimension");
  }
}

ControlMesh ControlMesh::uniform(double lower, double upper, std::size_t points) {
  if (points == 0) throw std::invalid_argument("control mesh needs at least one point");
  if (points > 1 && !(lower < upper)) throw std::invalid_argument("control mesh needs lower < upper");
  std::vector<Control> v;
  v.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = points == 1 ? lower
                     : i + 1 == points
                         ? upper
                         : lower + (upper - lower) * static_cast<double>(i) /
                                       static_cast<double>(points - 1);
    v.push_back({u});
  }
  return ControlMesh(std::move(v));
}

void ControlMesh::check_inside(const SystemSpec& sys) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!sys.control_set().contains(values_[i])) {
      throw std::invalid_argument("control mesh value #" + std::to_string(i) +
                                  " lies outside the control set");
    }
  }
}

ThresholdRayMesh::ThresholdRayMesh(double spacing, std::size_t count, std::vector<double> anchors)
    : spacing_(spacing), count_(count), anchors_(std::move(anchors)) {
  if (!(spacing_ > 0) || !std::isfinite(spacing_)) {
    throw std::invalid_argument("ray mesh spacing d must be positive");
  }
  if (anchors_.empty()) throw std::invalid_argument("ray mesh needs one anchor per axis");
  for (double a : anchors_) {
    if (!(a > 0) || !std::isfinite(a)) throw std::invalid_argument("anchors must be positive");
  }
  for (std::size_t axis = 0; axis < anchors_.size(); ++axis) {
    for (std::size_t j = 0; j <= count_; ++j) {
      std::vector<double> c = anchors_;
      c[axis] = static_cast<double>(j) * spacing_;
      ThresholdVector tv(std::move(c));
      if (std::find(points_.begin(), points_.end(), tv) != points_.end()) continue;
      points_.push_back(std::move(tv));
      axes_.push_back(axis);
    }
  }
}

std::vector<ThresholdVector> threshold_ray_mesh(double spacing, std::size_t count,
                                                std::vector<double> anchors) {
  return ThresholdRayMesh(spacing, count, std::move(anchors)).points();
}

double apply_stencil(const Stencil& st, std::span<const double> values,
                     std::optional<double> sentinel) {
  double acc = 0.0;
  for (const auto& e : st.entries()) {
    const double v = values[e.node];
    if (sentinel && v <= *sentinel) return *sentinel;
    acc += e.weight * v;
  }
  return acc;
}

double interpolate(const ValueTable& table, const StateGrid& grid, std::span<const double> x,
                   InterpMode mode, std::optional<double> sentinel) {
  if (x.size() != grid.dim()) throw std::invalid_argument("query dimension mismatch");
  const Stencil st = grid.stencil(x, mode);
  for (const auto& e : st.entries()) {
    if (!table.has(e.node)) {
      throw UnpopulatedNodeError("value table (stage " + std::to_string(table.stage) +
                                 ") read at unpopulated node " + std::to_string(e.node));
    }
  }
  return apply_stencil(st, table.values, sentinel);
}

ReachableSets::ReachableSets(std::vector<std::vector<std::size_t>> nodes, std::size_t grid_size,
                             bool full_grid)
    : nodes_(std::move(nodes)), full_grid_(full_grid) {
  masks_.reserve(nodes_.size());
  for (auto& set : nodes_) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    std::vector<unsigned char> mask(grid_size, 0);
    for (std::size_t node : set) mask.at(node) = 1;
    masks_.push_back(std::move(mask));
  }
}

ReachableSets build_reachable_sets(std::span<const double> xi, const StateGrid& grid,
                                   const SystemSpec& sys, const ControlMesh& controls,
                                   InterpMode mode) {
  if (!grid.contains(xi)) throw std::invalid_argument("initial state lies outside the grid box");
  const std::size_t stages = sys.horizon() + 2;
  std::vector<std::vector<std::size_t>> sets(stages);
  std::vector<unsigned char> seen(grid.size(), 0);

  for (const auto& e : grid.stencil(xi, mode).entries()) sets[0].push_back(e.node);

  State x(grid.dim());
  State next(grid.dim());
  for (std::size_t n = 0; n + 1 < stages; ++n) {
    std::fill(seen.begin(), seen.end(), 0);
    auto& out = sets[n + 1];
    for (std::size_t node : sets[n]) {
      grid.coordinate_into(node, x);
      for (const auto& u : controls.values()) {
        for (ScenarioId w : sys.scenarios(n)) {
          sys.step_into(n, x, u, w, next);
          for (const auto& e : grid.stencil(next, mode).entries()) {
            if (!seen[e.node]) {
              seen[e.node] = 1;
              out.push_back(e.node);
            }
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
  }
  return ReachableSets(std::move(sets), grid.size(), false);
}

ReachableSets full_grid_sets(const StateGrid& grid, std::size_t horizon) {
  std::vector<std::size_t> all(grid.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return ReachableSets(std::vector<std::vector<std::size_t>>(horizon + 2, all), grid.size(), true);
}

void write_reachable_csv(std::ostream& os, const ReachableSets& reach, const StateGrid& grid) {
  CsvWriter csv(os);
  std::vector<std::string> cols{"stage", "node"};
  for (std::size_t d = 0; d < grid.dim(); ++d) cols.push_back("x_" + std::to_string(d + 1));
  csv.header(cols);
  for (std::size_t n = 0; n < reach.stages(); ++n) {
    for (std::size_t node : reach.nodes(n)) {
      std::vector<std::string> cells{std::to_string(n), std::to_string(node)};
      for (double v : grid.coordinate(node)) cells.push_back(format_double(v));
      csv.row(cells);
    }
  }
}

}  // namespace rst
