#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace masscut {

using Point = std::vector<double>;

/// A finite measure on R^d, discretized as a weighted point cloud.
///
/// Coordinates are stored column-major so the data-parallel kernels can
/// stream one coordinate of every point at a time.
class Mass {
 public:
  /// Throws InvalidArgument on empty input, non-positive weights or a
  /// length mismatch, DimensionMismatch if a point does not have `dim`
  /// coordinates.
  Mass(std::size_t dim, const std::vector<Point>& points, std::vector<double> weights);

  /// Unit weights.
  Mass(std::size_t dim, const std::vector<Point>& points);

  static Mass from_columns(std::size_t dim, std::vector<double> columns,
                           std::vector<double> weights);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  double total() const { return total_; }

  std::span<const double> columns() const { return columns_; }
  std::span<const double> column(std::size_t k) const {
    return std::span<const double>(columns_).subspan(k * size(), size());
  }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double coord(std::size_t i, std::size_t k) const { return columns_[k * size() + i]; }
  Point point(std::size_t i) const;
  std::vector<Point> points() const;

  /// Same support, weights multiplied by `factor` > 0.
  Mass scaled(double factor) const;

  bool operator==(const Mass&) const = default;

 private:
  Mass() = default;
  void validate();

  std::size_t dim_ = 0;
  std::vector<double> columns_;
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// {x : normal . x = offset} with a unit normal.
class Hyperplane {
 public:
  /// Requires | |normal| - 1 | <= 1e-12.
  Hyperplane(std::vector<double> normal, double offset);

  /// Divides normal and offset by |normal|; throws InvalidArgument for a
  /// zero normal.
  static Hyperplane normalized(std::vector<double> normal, double offset);

  std::size_t dim() const { return normal_.size(); }
  const std::vector<double>& normal() const { return normal_; }
  double offset() const { return offset_; }

  /// normal . x - offset
  double signed_distance(std::span<const double> x) const;

  /// Same plane with both sides swapped.
  Hyperplane flipped() const;

  bool operator==(const Hyperplane&) const = default;

 private:
  std::vector<double> normal_;
  double offset_;
};

/// Ordered list of h >= 1 hyperplanes in a common R^d.
class Arrangement {
 public:
  explicit Arrangement(std::vector<Hyperplane> planes);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return planes_.size(); }
  const std::vector<Hyperplane>& planes() const { return planes_; }
  const Hyperplane& operator[](std::size_t i) const { return planes_[i]; }

  bool operator==(const Arrangement&) const = default;

 private:
  std::size_t dim_;
  std::vector<Hyperplane> planes_;
};

/// Sign vector over {-1, +1}^h, stored as a bit mask: bit i is set when
/// the point lies on the + side of plane i.
class OrthantLabel {
 public:
  OrthantLabel(std::size_t h, std::uint32_t code);
  static OrthantLabel from_signs(std::span<const int> signs);

  std::size_t size() const { return h_; }
  std::uint32_t code() const { return code_; }
  int sign(std::size_t i) const { return ((code_ >> i) & 1U) ? +1 : -1; }
  std::vector<int> signs() const;
  OrthantLabel flipped(std::size_t i) const { return {h_, code_ ^ (1U << i)}; }

  bool operator==(const OrthantLabel&) const = default;

 private:
  std::size_t h_;
  std::uint32_t code_;
};

/// Orthant measures of one mass under an arrangement. entries is indexed
/// by OrthantLabel::code().
struct MeasureTable {
  std::size_t h = 0;
  std::vector<double> entries;
  double boundary = 0.0;
  double total = 0.0;

  double operator[](const OrthantLabel& s) const { return entries[s.code()]; }
};

/// 0 iff |a.x - b| <= tau, else the sign of a.x - b.
int side_of(std::span<const double> x, const Hyperplane& plane, double tau);

/// nullopt when x lies within tau of some plane.
std::optional<OrthantLabel> orthant_of(std::span<const double> x,
                                       const Arrangement& arrangement, double tau);

MeasureTable orthant_measures(const Mass& mass, const Arrangement& arrangement,
                              double tau);

/// Orthant code of every point, kernels::kBoundaryCode for boundary points.
std::vector<std::int32_t> orthant_codes(const Mass& mass, const Arrangement& arrangement,
                                        double tau);

/// Replaces every point (x, w) by (x, -eps/2) and (x, +eps/2), each of
/// weight w/2.
Mass thicken_mass(const Mass& mass, double eps);

/// n points drawn uniformly from the closed ball by rejection from the
/// bounding cube, each of weight 1/n.
Mass ball_mass(std::span<const double> center, double radius, std::size_t n,
               std::uint64_t seed);

/// Intersection with {x_{d+1} = 0}, renormalized. Throws
/// DegenerateRestriction when |(a_1..a_d)| <= 1e-9.
Hyperplane restrict_hyperplane(const Hyperplane& plane);

/// Pre-image under the projection R^{d+1} -> R^d.
Hyperplane lift_hyperplane(const Hyperplane& plane);

Arrangement lift_arrangement(const Arrangement& arrangement);
Arrangement restrict_arrangement(const Arrangement& arrangement);

/// Drops the last coordinate. Requires dim >= 2.
Mass project_mass(const Mass& mass);

/// Diagonal of the axis-aligned box containing every point of every mass.
double bounding_box_diagonal(std::span<const Mass> masses);

/// 1e-9 times the bounding-box diagonal.
double default_tau(std::span<const Mass> masses);

/// Common dimension of a non-empty list of masses.
std::size_t common_dim(std::span<const Mass> masses);

}  // namespace masscut
