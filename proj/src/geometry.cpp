#include "masscut/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "masscut/errors.hpp"
#include "masscut/kernels.hpp"
#include "masscut/rng.hpp"

namespace masscut {
namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(want) + ", got " + std::to_string(got));
  }
}

constexpr double kUnitTolerance = 1e-12;
constexpr double kRestrictionThreshold = 1e-9;
// Beyond this dimension the cube-rejection acceptance rate drops below 0.3%.
constexpr std::size_t kMaxRejectionDim = 10;

}  // namespace

// --- Mass -----------------------------------------------------------------

Mass::Mass(std::size_t dim, const std::vector<Point>& points, std::vector<double> weights)
    : dim_(dim), weights_(std::move(weights)) {
  if (points.size() != weights_.size()) {
    throw InvalidArgument("mass: " + std::to_string(points.size()) + " points but " +
                          std::to_string(weights_.size()) + " weights");
  }
  const std::size_t n = points.size();
  columns_.resize(dim * n);
  for (std::size_t i = 0; i < n; ++i) {
    require_dim(points[i].size(), dim, "mass point");
    for (std::size_t k = 0; k < dim; ++k) columns_[k * n + i] = points[i][k];
  }
  validate();
}

Mass::Mass(std::size_t dim, const std::vector<Point>& points)
    : Mass(dim, points, std::vector<double>(points.size(), 1.0)) {}

Mass Mass::from_columns(std::size_t dim, std::vector<double> columns,
                        std::vector<double> weights) {
  Mass m;
  m.dim_ = dim;
  m.columns_ = std::move(columns);
  m.weights_ = std::move(weights);
  if (m.columns_.size() != dim * m.weights_.size()) {
    throw DimensionMismatch("mass: column storage does not match dim * size");
  }
  m.validate();
  return m;
}

void Mass::validate() {
  if (dim_ == 0) throw InvalidArgument("mass: dimension must be positive");
  if (weights_.empty()) throw InvalidArgument("mass: no points");
  total_ = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("mass: weights must be positive and finite");
    }
    total_ += w;
  }
  for (double c : columns_) {
    if (!std::isfinite(c)) throw InvalidArgument("mass: non-finite coordinate");
  }
}

Point Mass::point(std::size_t i) const {
  Point p(dim_);
  for (std::size_t k = 0; k < dim_; ++k) p[k] = coord(i, k);
  return p;
}

std::vector<Point> Mass::points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

Mass Mass::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("mass: scale factor must be positive");
  std::vector<double> w(weights_);
  for (auto& x : w) x *= factor;
  return from_columns(dim_, columns_, std::move(w));
}

// --- Hyperplane -----------------------------------------------------------

Hyperplane::Hyperplane(std::vector<double> normal, double offset)
    : normal_(std::move(normal)), offset_(offset) {
  if (normal_.empty()) throw InvalidArgument("hyperplane: empty normal");
  double norm2 = 0.0;
  for (double a : normal_) norm2 += a * a;
  if (std::abs(std::sqrt(norm2) - 1.0) > kUnitTolerance) {
    throw InvalidArgument("hyperplane: normal is not a unit vector");
  }
  if (!std::isfinite(offset_)) throw InvalidArgument("hyperplane: non-finite offset");
}

Hyperplane Hyperplane::normalized(std::vector<double> normal, double offset) {
  double norm2 = 0.0;
  for (double a : normal) norm2 += a * a;
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("hyperplane: zero normal");
  }
  for (auto& a : normal) a /= norm;
  return Hyperplane(std::move(normal), offset / norm);
}

double Hyperplane::signed_distance(std::span<const double> x) const {
  require_dim(x.size(), dim(), "side_of");
  double acc = -offset_;
  for (std::size_t k = 0; k < x.size(); ++k) acc += normal_[k] * x[k];
  return acc;
}

Hyperplane Hyperplane::flipped() const {
  std::vector<double> n(normal_);
  for (auto& a : n) a = -a;
  return Hyperplane(std::move(n), -offset_);
}

// --- Arrangement / OrthantLabel -------------------------------------------

Arrangement::Arrangement(std::vector<Hyperplane> planes) : planes_(std::move(planes)) {
  if (planes_.empty()) throw InvalidArgument("arrangement: needs at least one plane");
  if (planes_.size() > 30) throw InvalidArgument("arrangement: at most 30 planes");
  dim_ = planes_.front().dim();
  for (const auto& p : planes_) require_dim(p.dim(), dim_, "arrangement plane");
}

OrthantLabel::OrthantLabel(std::size_t h, std::uint32_t code) : h_(h), code_(code) {
  if (h == 0 || h > 30 || code >= (std::uint32_t{1} << h)) {
    throw InvalidArgument("orthant label: code out of range");
  }
}

OrthantLabel OrthantLabel::from_signs(std::span<const int> signs) {
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] == +1) {
      code |= 1U << i;
    } else if (signs[i] != -1) {
      throw InvalidArgument("orthant label: signs must be +1 or -1");
    }
  }
  return {signs.size(), code};
}

std::vector<int> OrthantLabel::signs() const {
  std::vector<int> s(h_);
  for (std::size_t i = 0; i < h_; ++i) s[i] = sign(i);
  return s;
}

// --- classification -------------------------------------------------------

int side_of(std::span<const double> x, const Hyperplane& plane, double tau) {
  if (tau < 0.0) throw InvalidArgument("side_of: tau must be nonnegative");
  const double d = plane.signed_distance(x);
  if (std::abs(d) <= tau) return 0;
  return d > 0.0 ? +1 : -1;
}

std::optional<OrthantLabel> orthant_of(std::span<const double> x,
                                       const Arrangement& arrangement, double tau) {
  require_dim(x.size(), arrangement.dim(), "orthant_of");
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < arrangement.size(); ++i) {
    const int s = side_of(x, arrangement[i], tau);
    if (s == 0) return std::nullopt;
    if (s > 0) code |= 1U << i;
  }
  return OrthantLabel(arrangement.size(), code);
}

std::vector<std::int32_t> orthant_codes(const Mass& mass, const Arrangement& arrangement,
                                        double tau) {
  require_dim(mass.dim(), arrangement.dim(), "orthant_measures");
  if (tau < 0.0) throw InvalidArgument("orthant_measures: tau must be nonnegative");
  const auto& k = kernels::active();
  const std::size_t n = mass.size();
  const std::size_t h = arrangement.size();
  std::vector<double> dist(h * n);
  for (std::size_t p = 0; p < h; ++p) {
    k.signed_distance(mass.columns().data(), n, mass.dim(), arrangement[p].normal().data(),
                      arrangement[p].offset(), dist.data() + p * n);
  }
  std::vector<std::int32_t> codes(n);
  k.classify(dist.data(), n, h, tau, codes.data());
  return codes;
}

MeasureTable orthant_measures(const Mass& mass, const Arrangement& arrangement, double tau) {
  const auto codes = orthant_codes(mass, arrangement, tau);
  MeasureTable t;
  t.h = arrangement.size();
  t.entries.assign(std::size_t{1} << t.h, 0.0);
  t.total = mass.total();
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] == kernels::kBoundaryCode) {
      t.boundary += mass.weight(i);
    } else {
      t.entries[static_cast<std::size_t>(codes[i])] += mass.weight(i);
    }
  }
  return t;
}

// --- lift / thicken / restrict --------------------------------------------

Mass thicken_mass(const Mass& mass, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("thicken_mass: eps must be positive");
  const std::size_t n = mass.size();
  const std::size_t d = mass.dim();
  std::vector<double> cols((d + 1) * 2 * n);
  std::vector<double> weights(2 * n);
  for (std::size_t k = 0; k < d; ++k) {
    auto src = mass.column(k);
    double* dst = cols.data() + k * 2 * n;
    for (std::size_t i = 0; i < n; ++i) {
      dst[2 * i] = src[i];
      dst[2 * i + 1] = src[i];
    }
  }
  double* last = cols.data() + d * 2 * n;
  for (std::size_t i = 0; i < n; ++i) {
    last[2 * i] = -0.5 * eps;
    last[2 * i + 1] = 0.5 * eps;
    weights[2 * i] = 0.5 * mass.weight(i);
    weights[2 * i + 1] = 0.5 * mass.weight(i);
  }
  return Mass::from_columns(d + 1, std::move(cols), std::move(weights));
}

Mass ball_mass(std::span<const double> center, double radius, std::size_t n,
               std::uint64_t seed) {
  if (!(radius > 0.0)) throw InvalidArgument("ball_mass: radius must be positive");
  if (n == 0) throw InvalidArgument("ball_mass: n must be positive");
  const std::size_t d = center.size();
  if (d == 0) throw InvalidArgument("ball_mass: empty center");
  Rng rng(seed);
  std::vector<double> cols(d * n);
  Point x(d);
  for (std::size_t i = 0; i < n; ++i) {
    if (d <= kMaxRejectionDim) {
      double r2;
      do {
        r2 = 0.0;
        for (auto& c : x) {
          c = rng.uniform(-1.0, 1.0);
          r2 += c * c;
        }
      } while (r2 > 1.0);
    } else {
      x = rng.unit_vector(d);
      const double r = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
      for (auto& c : x) c *= r;
    }
    for (std::size_t k = 0; k < d; ++k) cols[k * n + i] = center[k] + radius * x[k];
  }
  return Mass::from_columns(d, std::move(cols),
                            std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Hyperplane restrict_hyperplane(const Hyperplane& plane) {
  const std::size_t d = plane.dim() - 1;
  if (d == 0) throw DimensionMismatch("restrict_hyperplane: needs dimension >= 2");
  std::vector<double> base(plane.normal().begin(), plane.normal().end() - 1);
  double norm2 = 0.0;
  for (double a : base) norm2 += a * a;
  const double norm = std::sqrt(norm2);
  if (norm <= kRestrictionThreshold) {
    throw DegenerateRestriction("restrict_hyperplane: plane is parallel to the base slice");
  }
  return Hyperplane::normalized(std::move(base), plane.offset());
}

Hyperplane lift_hyperplane(const Hyperplane& plane) {
  std::vector<double> n(plane.normal());
  n.push_back(0.0);
  return Hyperplane(std::move(n), plane.offset());
}

Arrangement lift_arrangement(const Arrangement& arrangement) {
  std::vector<Hyperplane> planes;
  for (const auto& p : arrangement.planes()) planes.push_back(lift_hyperplane(p));
  return Arrangement(std::move(planes));
}

Arrangement restrict_arrangement(const Arrangement& arrangement) {
  std::vector<Hyperplane> planes;
  for (const auto& p : arrangement.planes()) planes.push_back(restrict_hyperplane(p));
  return Arrangement(std::move(planes));
}

Mass project_mass(const Mass& mass) {
  if (mass.dim() < 2) throw DimensionMismatch("project_mass: needs dimension >= 2");
  const std::size_t n = mass.size();
  const auto cols = mass.columns();
  std::vector<double> out(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>((mass.dim() - 1) * n));
  return Mass::from_columns(mass.dim() - 1, std::move(out),
                            std::vector<double>(mass.weights().begin(), mass.weights().end()));
}

// --- helpers --------------------------------------------------------------

std::size_t common_dim(std::span<const Mass> masses) {
  if (masses.empty()) throw InvalidArgument("expected at least one mass");
  const std::size_t d = masses.front().dim();
  for (const auto& m : masses) require_dim(m.dim(), d, "mass list");
  return d;
}

double bounding_box_diagonal(std::span<const Mass> masses) {
  const std::size_t d = common_dim(masses);
  double diag2 = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& m : masses) {
      for (double c : m.column(k)) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
    }
    diag2 += (hi - lo) * (hi - lo);
  }
  return std::sqrt(diag2);
}

double default_tau(std::span<const Mass> masses) {
  return 1e-9 * bounding_box_diagonal(masses);
}

}  // namespace masscut
