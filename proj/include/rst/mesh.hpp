#pragma once

// Discretization layer: state grid, control mesh, threshold ray mesh,
// forward reachable node sets and interpolation of grid functions.

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "rst/model.hpp"

namespace rst {

enum class InterpMode { multilinear, nearest };

const char* to_string(InterpMode mode);
InterpMode parse_interp_mode(std::string_view text);

/// Raised when a value table is read at a node that was never computed.
/// This is an internal consistency failure, never a numeric outcome.
class UnpopulatedNodeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr std::size_t kMaxStateDim = 4;

struct StencilEntry {
  std::size_t node;
  double weight;
};

/// Grid nodes (with nonzero weight) that an interpolation query reads.
/// Entries are ordered by corner bitmask, which fixes the summation order.
class Stencil {
 public:
  void clear() noexcept { count_ = 0; }
  void push(std::size_t node, double weight) { entries_[count_++] = {node, weight}; }
  std::span<const StencilEntry> entries() const noexcept { return {entries_.data(), count_}; }
  std::size_t size() const noexcept { return count_; }

 private:
  std::array<StencilEntry, (std::size_t{1} << kMaxStateDim)> entries_{};
  std::size_t count_ = 0;
};

/// Uniform rectilinear grid over a box. Node index is row-major with
/// dimension 0 varying fastest.
class StateGrid {
 public:
  struct Axis {
    double lower;
    double upper;
    std::size_t nodes;
  };

  explicit StateGrid(std::vector<Axis> axes);

  std::size_t dim() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return size_; }
  const Axis& axis(std::size_t d) const { return axes_.at(d); }
  double spacing(std::size_t d) const;
  double max_spacing() const;

  State coordinate(std::size_t node) const;
  void coordinate_into(std::size_t node, std::span<double> out) const;
  bool contains(std::span<const double> x) const;

  /// Multilinear (or nearest-node) stencil of x after clamping into the box.
  Stencil stencil(std::span<const double> x, InterpMode mode) const;
  void stencil_into(std::span<const double> x, InterpMode mode, Stencil& out) const;

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Finite stand-in for the control set U.
class ControlMesh {
 public:
  explicit ControlMesh(std::vector<Control> values);
  /// `points` equally spaced values on [lower, upper] (1-D control).
  static ControlMesh uniform(double lower, double upper, std::size_t points);

  std::size_t size() const noexcept { return values_.size(); }
  std::size_t dim() const noexcept { return values_.front().size(); }
  const Control& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Control>& values() const noexcept { return values_; }

  /// Throws std::invalid_argument if some value lies outside the system's U.
  void check_inside(const SystemSpec& sys) const;

 private:
  std::vector<Control> values_;
};

/// Axis-sweep mesh of threshold vectors lying outside S(xi): for each axis j,
/// coordinate j runs over {0, d, ..., count*d} with the others pinned at the
/// anchors. Exact duplicates are dropped, first occurrence wins.
class ThresholdRayMesh {
 public:
  ThresholdRayMesh(double spacing, std::size_t count, std::vector<double> anchors);

  double spacing() const noexcept { return spacing_; }
  std::size_t count() const noexcept { return count_; }
  const std::vector<double>& anchors() const noexcept { return anchors_; }

  const std::vector<ThresholdVector>& points() const noexcept { return points_; }
  /// Which axis was swept to produce points()[i].
  std::size_t axis_of(std::size_t i) const { return axes_.at(i); }

 private:
  double spacing_;
  std::size_t count_;
  std::vector<double> anchors_;
  std::vector<ThresholdVector> points_;
  std::vector<std::size_t> axes_;
};

std::vector<ThresholdVector> threshold_ray_mesh(double spacing, std::size_t count,
                                                std::vector<double> anchors);

/// Grid function for one stage and one threshold. Unpopulated nodes hold NaN.
struct ValueTable {
  std::size_t stage = 0;
  ThresholdVector threshold;
  std::vector<double> values;
  std::vector<unsigned char> populated;

  bool has(std::size_t node) const { return populated[node] != 0; }
};

/// Weighted sum over the stencil nodes. With `sentinel` set, any touched node
/// at or below the sentinel makes the result the sentinel (no sums with it).
double apply_stencil(const Stencil& st, std::span<const double> values,
                     std::optional<double> sentinel = std::nullopt);

/// Multilinear or nearest-node interpolation of the table at x (x clamped
/// into the box first). Throws UnpopulatedNodeError on an unpopulated read.
double interpolate(const ValueTable& table, const StateGrid& grid, std::span<const double> x,
                   InterpMode mode, std::optional<double> sentinel = std::nullopt);

/// Per-stage node sets X_h^0 .. X_h^{N+1}.
class ReachableSets {
 public:
  ReachableSets(std::vector<std::vector<std::size_t>> nodes, std::size_t grid_size,
                bool full_grid);

  std::size_t stages() const noexcept { return nodes_.size(); }
  const std::vector<std::size_t>& nodes(std::size_t n) const { return nodes_.at(n); }
  bool contains(std::size_t n, std::size_t node) const { return masks_[n][node] != 0; }
  const std::vector<unsigned char>& mask(std::size_t n) const { return masks_.at(n); }
  bool full_grid() const noexcept { return full_grid_; }
  /// True when a set may hold nodes no interpolation query reads.
  bool over_approximate() const noexcept { return full_grid_; }

 private:
  std::vector<std::vector<std::size_t>> nodes_;
  std::vector<std::vector<unsigned char>> masks_;
  bool full_grid_;
};

/// Forward pass: X^0 = stencil(xi); X^{n+1} = union of stencils of
/// F_n(x, u, w) over x in X^n, u in the mesh, w in Omega_n.
/// Throws std::invalid_argument if xi is outside the grid box.
ReachableSets build_reachable_sets(std::span<const double> xi, const StateGrid& grid,
                                   const SystemSpec& sys, const ControlMesh& controls,
                                   InterpMode mode);

ReachableSets full_grid_sets(const StateGrid& grid, std::size_t horizon);

/// CSV with columns stage,node,x_1..x_n.
void write_reachable_csv(std::ostream& os, const ReachableSets& reach, const StateGrid& grid);

}  // namespace rst
