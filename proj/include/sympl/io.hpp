#pragma once

// JSON and CSV serialization for the library's public types. Schemas are
// versioned and documented in docs/formats.md; matrices are row-major arrays
// of arrays of doubles, complex matrices are re/im pairs.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sympl/capacity.hpp"
#include "sympl/convex.hpp"
#include "sympl/propagate.hpp"
#include "sympl/uncertainty.hpp"
#include "sympl/wavefunction.hpp"

namespace sympl {

inline constexpr int kFormatVersion = 1;

using Json = nlohmann::json;

// ----------------------------------------------------------------- matrices

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InvalidInput("matrix JSON must be an array of arrays");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j[r].size()) != cols)
      throw InvalidInput("matrix JSON has ragged rows");
    for (Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

inline Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("vector JSON must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

// ------------------------------------------------------------ wavefunctions

inline Json to_json(const GridWavefunction& psi) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["x0"] = psi.x0;
  j["dx"] = psi.dx;
  j["hbar"] = psi.hbar;
  Json re = Json::array(), im = Json::array();
  for (Index k = 0; k < psi.size(); ++k) {
    re.push_back(psi.values(k).real());
    im.push_back(psi.values(k).imag());
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

inline GridWavefunction grid_wavefunction_from_json(const Json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != im.size()) throw InvalidInput("wavefunction JSON: re/im size mismatch");
  ComplexVector v(static_cast<Index>(re.size()));
  for (Index k = 0; k < v.size(); ++k)
    v(k) = Complex(re[k].get<double>(), im[k].get<double>());
  return GridWavefunction(j.at("x0").get<double>(), j.at("dx").get<double>(),
                          std::move(v), j.at("hbar").get<double>());
}

namespace detail {
inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace detail

inline void write_wavefunction_csv(std::ostream& os, const GridWavefunction& psi) {
  os << "x,re,im\n";
  for (Index k = 0; k < psi.size(); ++k)
    os << detail::fmt17(psi.x(k)) << ',' << detail::fmt17(psi.values(k).real()) << ','
       << detail::fmt17(psi.values(k).imag()) << '\n';
}

inline GridWavefunction read_wavefunction_csv(std::istream& is, double hbar) {
  std::vector<double> xs, res, ims;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string fx, fre, fim;
    if (!std::getline(ls, fx, ',') || !std::getline(ls, fre, ',') ||
        !std::getline(ls, fim, ','))
      continue;
    char* end = nullptr;
    const double x = std::strtod(fx.c_str(), &end);
    if (end == fx.c_str()) continue;  // header
    xs.push_back(x);
    res.push_back(std::strtod(fre.c_str(), nullptr));
    ims.push_back(std::strtod(fim.c_str(), nullptr));
  }
  if (xs.size() < 8) throw InvalidInput("wavefunction CSV: too few samples");
  ComplexVector v(static_cast<Index>(xs.size()));
  for (Index k = 0; k < v.size(); ++k) v(k) = Complex(res[k], ims[k]);
  return GridWavefunction(xs[0], xs[1] - xs[0], std::move(v), hbar);
}

inline Json to_json(const GaussianWavepacket& wp) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["n"] = wp.n;
  j["hbar"] = wp.hbar;
  j["center_x"] = vector_to_json(wp.center_x);
  j["center_p"] = vector_to_json(wp.center_p);
  j["width_re"] = matrix_to_json(wp.width.real());
  j["width_im"] = matrix_to_json(wp.width.imag());
  j["phase"] = wp.phase;
  return j;
}

inline GaussianWavepacket wavepacket_from_json(const Json& j) {
  const Matrix re = matrix_from_json(j.at("width_re"));
  const Matrix im = matrix_from_json(j.at("width_im"));
  ComplexMatrix w = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
  return GaussianWavepacket(vector_from_json(j.at("center_x")),
                            vector_from_json(j.at("center_p")), std::move(w),
                            j.at("phase").get<double>(), j.at("hbar").get<double>());
}

// ----------------------------------------------------------------- geometry

inline Json to_json(const Ellipsoid& E) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["center"] = vector_to_json(E.center);
  j["shape"] = matrix_to_json(E.shape);
  return j;
}

inline Ellipsoid ellipsoid_from_json(const Json& j) {
  return Ellipsoid(vector_from_json(j.at("center")), matrix_from_json(j.at("shape")));
}

inline Json to_json(const Polytope& P) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["A"] = matrix_to_json(P.A);
  j["b"] = vector_to_json(P.b);
  return j;
}

inline Polytope polytope_from_json(const Json& j) {
  return Polytope(matrix_from_json(j.at("A")), vector_from_json(j.at("b")));
}

inline PointCloud2D read_cloud_csv(std::istream& is) {
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string fx, fp;
    if (!std::getline(ls, fx, ',') || !std::getline(ls, fp, ',')) continue;
    char* end = nullptr;
    const double x = std::strtod(fx.c_str(), &end);
    if (end == fx.c_str()) continue;  // header
    pts.emplace_back(x, std::strtod(fp.c_str(), nullptr));
  }
  if (pts.size() < 3) throw InvalidInput("cloud CSV: need at least 3 points");
  Matrix m(static_cast<Index>(pts.size()), 2);
  for (Index i = 0; i < m.rows(); ++i) {
    m(i, 0) = pts[i].first;
    m(i, 1) = pts[i].second;
  }
  return PointCloud2D(std::move(m));
}

inline void write_cloud_csv(std::ostream& os, const PointCloud2D& cloud) {
  os << "x,p\n";
  for (Index i = 0; i < cloud.points.rows(); ++i)
    os << detail::fmt17(cloud.points(i, 0)) << ',' << detail::fmt17(cloud.points(i, 1))
       << '\n';
}

// ------------------------------------------------------------------ reports

inline Json to_json(const ShadowReport& r, Index dof) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["r"] = r.r;
  j["min_conjugate_area"] = r.min_conjugate_area;
  Json planes = Json::array();
  for (const auto& e : r.entries) {
    Json p;
    p["i"] = e.i;
    p["j"] = e.j;
    p["label"] = plane_label(e.i, e.j, dof);
    p["area"] = e.area;
    p["conjugate"] = e.conjugate;
    planes.push_back(std::move(p));
  }
  j["planes"] = std::move(planes);
  return j;
}

inline void write_shadow_csv(std::ostream& os, const ShadowReport& r, Index dof) {
  os << "plane,area,conjugate\n";
  for (const auto& e : r.entries)
    os << plane_label(e.i, e.j, dof) << ',' << detail::fmt17(e.area) << ','
       << (e.conjugate ? 1 : 0) << '\n';
}

inline Json to_json(const RsupReport& r) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["hbar"] = r.hbar;
  j["all_pass"] = r.all_pass;
  Json axes = Json::array();
  for (const auto& a : r.axes) {
    Json e;
    e["axis"] = a.axis;
    e["dx2"] = a.dx2;
    e["dp2"] = a.dp2;
    e["cov"] = a.cov;
    e["margin"] = a.margin;
    e["pass"] = a.pass;
    axes.push_back(std::move(e));
  }
  j["axes"] = std::move(axes);
  return j;
}

inline void write_rsup_csv(std::ostream& os, const RsupReport& r) {
  os << "axis,dx2,dp2,cov,margin,pass\n";
  for (const auto& a : r.axes)
    os << a.axis << ',' << detail::fmt17(a.dx2) << ',' << detail::fmt17(a.dp2) << ','
       << detail::fmt17(a.cov) << ',' << detail::fmt17(a.margin) << ','
       << (a.pass ? 1 : 0) << '\n';
}

inline Json to_json(const CovarianceMatrix& s) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["n"] = s.dof();
  j["sigma"] = matrix_to_json(s.sigma);
  return j;
}

inline CovarianceMatrix covariance_from_json(const Json& j) {
  const Matrix m = matrix_from_json(j.at("sigma"));
  if (j.contains("n") && j.at("n").get<Index>() * 2 != m.rows())
    throw InvalidInput("covariance JSON: n disagrees with sigma");
  return CovarianceMatrix(m);
}

inline Json to_json(const CertificationReport& rep) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["hbar"] = rep.hbar;
  j["hull_vertices"] = matrix_to_json(rep.hull.vertices);
  j["hull_polytope"] = to_json(rep.hull.polytope);
  j["john_ellipsoid"] = to_json(rep.john.ellipsoid);
  j["john_duality_gap"] = rep.john.duality_gap;
  j["john_log_volume"] = rep.john.log_volume;
  j["covariance"] = to_json(rep.sigma);
  j["rsup"] = to_json(rep.rsup);
  j["sigpos_pass"] = rep.sigpos_pass;
  j["sigpos_min_eigenvalue"] = rep.sigpos_min_eigenvalue;
  j["capacity"] = rep.capacity;
  j["is_blob"] = rep.is_blob;
  return j;
}

}  // namespace sympl
