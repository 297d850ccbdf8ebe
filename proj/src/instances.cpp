#include "masscut/instances.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "masscut/errors.hpp"
#include "masscut/rng.hpp"

namespace masscut {
namespace {

using nlohmann::json;

constexpr double kUnitSlack = 1e-6;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vector(std::ostringstream& os, std::span<const double> v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << num(v[i]);
  }
  os << ']';
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
}

const json& field(const json& obj, const std::string& name, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + name + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

std::size_t positive_int(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ParseError(where + ": expected a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

std::vector<Mass> gen_gaussian(std::size_t d, std::size_t n, std::size_t m, std::uint64_t seed,
                               const std::optional<std::vector<Point>>& centers) {
  if (d == 0 || n == 0 || m == 0) throw InvalidArgument("gen_gaussian: d, n and m must be positive");
  Rng rng(seed);
  std::vector<Point> c;
  if (centers) {
    if (centers->size() != m) throw InvalidArgument("gen_gaussian: need one center per mass");
    for (const auto& p : *centers) {
      if (p.size() != d) throw DimensionMismatch("gen_gaussian: center dimension");
    }
    c = *centers;
  } else {
    c.assign(m, Point(d));
    for (auto& p : c) {
      for (auto& x : p) x = rng.uniform(-3.0, 3.0);
    }
  }
  std::vector<Mass> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> cols(d * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) cols[k * n + i] = c[j][k] + rng.normal();
    }
    out.push_back(Mass::from_columns(d, std::move(cols), std::vector<double>(n, 1.0)));
  }
  return out;
}

Mass gen_symmetric(std::size_t n, std::uint64_t seed) {
  if (n == 0 || n % 4 != 0) throw InvalidArgument("gen_symmetric: n must be a positive multiple of 4");
  Rng rng(seed);
  const std::size_t quarter = n / 4;
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < quarter; ++i) {
    double x = 0.0, y = 0.0;
    while (x == 0.0) x = rng.uniform();
    while (y == 0.0) y = rng.uniform();
    pts[i] = {x, y};
    pts[quarter + i] = {-y, x};
    pts[2 * quarter + i] = {-x, -y};
    pts[3 * quarter + i] = {y, -x};
  }
  return Mass(2, pts);
}

std::vector<Mass> gen_grid(std::size_t d, std::size_t side, std::size_t m) {
  if (d == 0 || m == 0) throw InvalidArgument("gen_grid: d and m must be positive");
  if (side < 2) throw InvalidArgument("gen_grid: side must be at least 2");
  std::size_t count = 1;
  for (std::size_t k = 0; k < d; ++k) {
    count *= side;
    if (count > (std::size_t{1} << 24)) throw InvalidArgument("gen_grid: grid too large");
  }
  std::vector<Mass> out;
  for (std::size_t j = 0; j < m; ++j) {
    const double shift = static_cast<double>(j) / static_cast<double>(m + 1);
    std::vector<double> cols(d * count);
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t rest = i;
      for (std::size_t k = 0; k < d; ++k) {
        cols[k * count + i] = static_cast<double>(rest % side) + shift;
        rest /= side;
      }
    }
    out.push_back(Mass::from_columns(d, std::move(cols), std::vector<double>(count, 1.0)));
  }
  return out;
}

std::string instance_to_json(const InstanceFile& instance) {
  std::ostringstream os;
  os << "{\n  \"dim\": " << instance.dim << ",\n  \"masses\": [";
  for (std::size_t j = 0; j < instance.masses.size(); ++j) {
    const Mass& m = instance.masses[j];
    os << (j ? ",\n" : "\n") << "    {\n      \"points\": [";
    for (std::size_t i = 0; i < m.size(); ++i) {
      os << (i ? ",\n        " : "\n        ");
      write_vector(os, m.point(i));
    }
    os << "\n      ],\n      \"weights\": ";
    write_vector(os, m.weights());
    os << "\n    }";
  }
  os << "\n  ],\n  \"metadata\": " << (instance.metadata.is_null() ? std::string("{}") : instance.metadata.dump()) << "\n}\n";
  return os.str();
}

std::string cuts_to_json(const Arrangement& arrangement) {
  std::ostringstream os;
  os << "{\n  \"dim\": " << arrangement.dim() << ",\n  \"planes\": [";
  for (std::size_t p = 0; p < arrangement.size(); ++p) {
    os << (p ? ",\n" : "\n") << "    {\"normal\": ";
    write_vector(os, arrangement[p].normal());
    os << ", \"offset\": " << num(arrangement[p].offset()) << "}";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

InstanceFile instance_from_json(const std::string& text) {
  const json doc = parse_text(text);
  InstanceFile inst;
  inst.dim = positive_int(field(doc, "dim", "instance"), "instance.dim");
  const json& masses = field(doc, "masses", "instance");
  if (!masses.is_array()) throw ParseError("instance.masses: expected an array");
  if (masses.empty()) throw SchemaError("instance.masses: at least one mass is required");
  for (std::size_t j = 0; j < masses.size(); ++j) {
    const std::string where = "instance.masses[" + std::to_string(j) + "]";
    const json& pts = field(masses[j], "points", where);
    if (!pts.is_array()) throw ParseError(where + ".points: expected an array");
    std::vector<Point> points;
    points.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string pw = where + ".points[" + std::to_string(i) + "]";
      points.push_back(numbers(pts[i], pw));
      if (points.back().size() != inst.dim) {
        throw SchemaError(pw + ": expected " + std::to_string(inst.dim) + " coordinates, got " +
                          std::to_string(points.back().size()));
      }
    }
    auto weights = numbers(field(masses[j], "weights", where), where + ".weights");
    try {
      inst.masses.emplace_back(inst.dim, points, std::move(weights));
    } catch (const Error& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  if (auto it = doc.find("metadata"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("instance.metadata: expected an object");
    inst.metadata = *it;
  }
  return inst;
}

Arrangement cuts_from_json(const std::string& text) {
  const json doc = parse_text(text);
  const std::size_t dim = positive_int(field(doc, "dim", "cuts"), "cuts.dim");
  const json& planes = field(doc, "planes", "cuts");
  if (!planes.is_array()) throw ParseError("cuts.planes: expected an array");
  if (planes.empty()) throw SchemaError("cuts.planes: at least one plane is required");
  std::vector<Hyperplane> out;
  for (std::size_t p = 0; p < planes.size(); ++p) {
    const std::string where = "cuts.planes[" + std::to_string(p) + "]";
    auto normal = numbers(field(planes[p], "normal", where), where + ".normal");
    const double offset = number(field(planes[p], "offset", where), where + ".offset");
    if (normal.size() != dim) {
      throw SchemaError(where + ".normal: expected " + std::to_string(dim) + " components");
    }
    double norm2 = 0.0;
    for (double a : normal) norm2 += a * a;
    const double norm = std::sqrt(norm2);
    if (!(std::abs(norm - 1.0) <= kUnitSlack)) {
      throw SchemaError(where + ".normal: not a unit vector (norm " + num(norm) + ")");
    }
    if (std::abs(norm - 1.0) <= 1e-12) {
      out.emplace_back(std::move(normal), offset);
    } else {
      out.push_back(Hyperplane::normalized(std::move(normal), offset));
    }
  }
  return Arrangement(std::move(out));
}

InstanceFile read_instance(const std::filesystem::path& path) {
  try {
    return instance_from_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_instance(const std::filesystem::path& path, const InstanceFile& instance) {
  write_file(path, instance_to_json(instance));
}

Arrangement read_cuts(const std::filesystem::path& path) {
  try {
    return cuts_from_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_cuts(const std::filesystem::path& path, const Arrangement& arrangement) {
  write_file(path, cuts_to_json(arrangement));
}

}  // namespace masscut
