#include "mixvol/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixvol/error.hpp"

namespace mixvol::io {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

double number(const Json& j, const char* what) {
  if (!j.is_number()) invalid(std::string(what) + " must be a number");
  return j.get<double>();
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) invalid(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

const Json& list_or_field(const Json& j, const char* key) {
  if (j.is_array()) return j;
  const Json& inner = member(j, key);
  if (!inner.is_array()) invalid(std::string("\"") + key + "\" must be an array");
  return inner;
}

}  // namespace

Vector parse_vector(const Json& j) {
  if (!j.is_array()) invalid("expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], "vector entry");
  return v;
}

Matrix parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) invalid("expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) invalid("matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) invalid("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(j[r][c], "matrix entry");
    }
  }
  return m;
}

Ellipsoid parse_ellipsoid(const Json& j) {
  const Matrix sigma = parse_matrix(member(j, "sigma"));
  if (j.contains("dim")) {
    const Json& dim = j.at("dim");
    if (!dim.is_number_integer() || dim.get<long long>() != sigma.rows()) {
      throw Error(ErrorCode::DimensionMismatch, "\"dim\" does not match the size of \"sigma\"");
    }
  }
  return Ellipsoid(make_spd(sigma));
}

std::vector<Ellipsoid> parse_ellipsoids(const Json& j) {
  if (j.is_object() && j.contains("sigma")) return {parse_ellipsoid(j)};
  std::vector<Ellipsoid> out;
  for (const auto& item : list_or_field(j, "ellipsoids")) out.push_back(parse_ellipsoid(item));
  if (out.empty()) invalid("no ellipsoids given");
  return out;
}

std::vector<Matrix> parse_matrices(const Json& j) {
  std::vector<Matrix> out;
  for (const auto& item : list_or_field(j, "matrices")) out.push_back(parse_matrix(item));
  if (out.empty()) invalid("no matrices given");
  return out;
}

Matrix parse_points(const Json& j) { return parse_matrix(list_or_field(j, "points")); }

FieldSpec parse_field(const Json& j) {
  FieldSpec spec;
  const Json& dim = member(j, "dim");
  if (!dim.is_number_integer()) invalid("\"dim\" must be an integer");
  spec.dim = dim.get<int>();
  const Json& comps = member(j, "components");
  if (!comps.is_array()) invalid("\"components\" must be an array");
  for (const auto& c : comps) {
    KernelSpec kernel;
    const Json& kind = member(c, "kind");
    if (kind == "trig") {
      kernel.kind = KernelKind::trig;
    } else if (kind == "polynomial") {
      kernel.kind = KernelKind::polynomial;
    } else {
      invalid("component kind must be \"trig\" or \"polynomial\"");
    }
    const Json& atoms = member(c, "atoms");
    if (!atoms.is_array()) invalid("\"atoms\" must be an array");
    for (const auto& a : atoms) {
      KernelAtom atom;
      atom.weight = number(member(a, "w"), "atom weight");
      if (kernel.kind == KernelKind::trig) {
        atom.frequency = parse_vector(member(a, "omega"));
      } else {
        const Json& deg = member(a, "degree");
        if (!deg.is_number_integer()) invalid("\"degree\" must be an integer");
        atom.degree = deg.get<int>();
      }
      kernel.atoms.push_back(std::move(atom));
    }
    spec.components.push_back(std::move(kernel));
  }
  validate(spec);
  return spec;
}

Region parse_region(const Json& j) {
  Region r{parse_vector(member(j, "lower")), parse_vector(member(j, "upper"))};
  validate(r);
  return r;
}

Json to_json(const Ellipsoid& e) {
  Json rows = Json::array();
  const Matrix& s = e.sigma().entries();
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < s.cols(); ++k) row.push_back(s(i, k));
    rows.push_back(row);
  }
  return {{"dim", e.dim()}, {"sigma", rows}};
}

Json to_json(const FieldSpec& spec) {
  Json comps = Json::array();
  for (const auto& c : spec.components) {
    Json atoms = Json::array();
    for (const auto& a : c.atoms) {
      if (c.kind == KernelKind::trig) {
        atoms.push_back({{"w", a.weight}, {"omega", std::vector<double>(a.frequency.begin(), a.frequency.end())}});
      } else {
        atoms.push_back({{"w", a.weight}, {"degree", a.degree}});
      }
    }
    comps.push_back({{"kind", c.kind == KernelKind::trig ? "trig" : "polynomial"}, {"atoms", atoms}});
  }
  return {{"dim", spec.dim}, {"components", comps}};
}

Json to_json(const MCEstimate& e) {
  return {{"mean", e.mean},
          {"std_error", e.std_error},
          {"n_samples", e.n_samples},
          {"seed", e.seed},
          {"ci", {{"level", e.ci_level},
                  {"half_width", e.ci_half_width},
                  {"lower", e.ci_lower()},
                  {"upper", e.ci_upper()}}}};
}

Document read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Document doc;
  doc.bytes = buf.str();
  try {
    doc.json = Json::parse(doc.bytes);
  } catch (const Json::parse_error& e) {
    invalid(path + ": " + e.what());
  }
  return doc;
}

std::string content_digest(const std::vector<std::string>& contents) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const auto& s : contents) {
    for (unsigned char c : s) {
      hash ^= c;
      hash *= 0x100000001b3ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace mixvol::io
