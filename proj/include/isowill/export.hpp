#pragma once

// CSV datasets, OBJ meshes and JSON reports.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "dataset.hpp"
#include "verification.hpp"

namespace isowill {

inline constexpr const char* kDatasetSchema = "isowill-dataset/1";
inline constexpr const char* kMeshSchema = "isowill-mesh/1";

inline std::string grid_line(const GridSpec& g) {
  return std::string(g.kind == GridSpec::Kind::Polar ? "polar" : "rect") + " " + std::to_string(g.rows()) + " " +
         std::to_string(g.cols());
}

inline void write_csv(std::ostream& os, const Dataset& ds) {
  os << "# " << kDatasetSchema << "\n";
  os << "# spec_name " << ds.spec_name << "\n";
  os << "# spec_hash fnv1a64:" << hash_hex(ds.spec_hash) << "\n";
  os << "# grid " << grid_line(ds.grid) << "\n";
  os << "lambda_index,lambda_deg,row,col,z_re,z_im,branch,rank,status,rho_re,rho_im,rho_inf";
  for (int k = 0; k < 8; ++k) os << ",Y" << k;
  for (int k = 1; k <= 7; ++k) os << ",x" << k;
  os << ",metric,margin,renormalized\n";
  for (const auto& r : ds.records) {
    os << r.lambda_index << ',' << fmt(r.lambda_deg) << ',' << r.row << ',' << r.col << ',' << fmt(r.z.real()) << ','
       << fmt(r.z.imag()) << ',' << r.branch << ',' << r.rank << ',' << r.status << ',' << fmt(r.rho.real()) << ','
       << fmt(r.rho.imag()) << ',' << (r.rho_infinite ? 1 : 0);
    for (double v : r.Y) os << ',' << fmt(v);
    for (double v : r.x) os << ',' << fmt(v);
    os << ',' << fmt(r.metric) << ',' << fmt(r.margin) << ',' << (r.renormalized ? 1 : 0) << '\n';
  }
}

inline std::string csv_string(const Dataset& ds) {
  std::ostringstream ss;
  write_csv(ss, ds);
  return ss.str();
}

// enough of a dataset to rebuild a mesh
struct MeshInput {
  std::string spec_name, spec_hash;
  GridSpec::Kind kind = GridSpec::Kind::Polar;
  int rows = 0, cols = 0;
  std::vector<Record> records;
};

namespace detail {
inline double parse_double(const std::string& s, int line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ParseError(line, "bad number '" + s + "'");
  return v;
}
}  // namespace detail

inline MeshInput read_csv(std::istream& is) {
  MeshInput in;
  std::string line;
  int ln = 0;
  bool header = false, schema = false;
  while (std::getline(is, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == kDatasetSchema) schema = true;
      else if (key == "spec_name") ss >> in.spec_name;
      else if (key == "spec_hash") ss >> in.spec_hash;
      else if (key == "grid") {
        std::string kind;
        ss >> kind >> in.rows >> in.cols;
        if (kind != "polar" && kind != "rect") throw ParseError(ln, "unknown grid kind '" + kind + "'");
        in.kind = kind == "polar" ? GridSpec::Kind::Polar : GridSpec::Kind::Rect;
      }
      continue;
    }
    if (!header) {
      if (!schema) throw Error(ErrorKind::UnsupportedFormat, std::string("missing '# ") + kDatasetSchema + "' line");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 12 + 8 + 7 + 3) throw ParseError(ln, "expected 30 fields");
    Record r;
    r.lambda_index = static_cast<int>(detail::parse_double(f[0], ln));
    r.lambda_deg = detail::parse_double(f[1], ln);
    r.row = static_cast<int>(detail::parse_double(f[2], ln));
    r.col = static_cast<int>(detail::parse_double(f[3], ln));
    r.z = {detail::parse_double(f[4], ln), detail::parse_double(f[5], ln)};
    r.branch = f[6];
    r.rank = static_cast<int>(detail::parse_double(f[7], ln));
    r.status = f[8];
    for (size_t k = 0; k < 8; ++k) r.Y[k] = detail::parse_double(f[12 + k], ln);
    for (size_t k = 0; k < 7; ++k) r.x[k] = detail::parse_double(f[20 + k], ln);
    r.metric = detail::parse_double(f[27], ln);
    in.records.push_back(r);
  }
  if (!schema) throw Error(ErrorKind::UnsupportedFormat, std::string("missing '# ") + kDatasetSchema + "' line");
  if (in.rows < 1 || in.cols < 1) throw Error(ErrorKind::UnsupportedFormat, "missing grid line");
  return in;
}

inline MeshInput mesh_input(const Dataset& ds) {
  MeshInput in;
  in.spec_name = ds.spec_name;
  in.spec_hash = "fnv1a64:" + hash_hex(ds.spec_hash);
  in.kind = ds.grid.kind;
  in.rows = ds.grid.rows();
  in.cols = ds.grid.cols();
  in.records = ds.records;
  return in;
}

// ---------------------------------------------------------------------------
// meshes

struct Projection {
  bool pca = false;
  std::array<int, 3> coords{0, 1, 2};  // 0-based indices into x
};

inline Projection parse_projection(const std::string& s) {
  if (s == "pca") return {true, {0, 1, 2}};
  Projection p;
  std::stringstream ss(s);
  std::string item;
  int n = 0;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (n >= 3 || r.ec != std::errc() || r.ptr != item.data() + item.size() || v < 1 || v > 7)
      throw Error(ErrorKind::UnsupportedFormat, "projection must be 'pca' or three coordinates in 1..7");
    p.coords[static_cast<size_t>(n++)] = v - 1;
  }
  if (n != 3) throw Error(ErrorKind::UnsupportedFormat, "projection must be 'pca' or three coordinates in 1..7");
  return p;
}

struct Mesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;  // 0-based
  std::vector<bool> valid;
  std::array<std::array<double, 7>, 3> axes{};  // PCA only
};

// quads (i,k)-(i,k+1)-(i+1,k+1)-(i+1,k), angle periodic on polar grids
inline std::vector<std::array<int, 3>> grid_triangles(GridSpec::Kind kind, int rows, int cols) {
  std::vector<std::array<int, 3>> t;
  const bool periodic = kind == GridSpec::Kind::Polar;
  const int kmax = periodic ? cols : cols - 1;
  for (int i = 0; i + 1 < rows; ++i)
    for (int k = 0; k < kmax; ++k) {
      const int k1 = (k + 1) % cols;
      const int a = i * cols + k, b = i * cols + k1, c = (i + 1) * cols + k1, d = (i + 1) * cols + k;
      t.push_back({a, b, c});
      t.push_back({a, c, d});
    }
  return t;
}

inline Mesh build_mesh(const MeshInput& in, int lambda_index, const std::string& branch, const Projection& proj) {
  const size_t nv = static_cast<size_t>(in.rows) * static_cast<size_t>(in.cols);
  std::vector<std::array<double, 7>> xs(nv);
  std::vector<bool> have(nv, false), ok(nv, false);
  for (const auto& r : in.records) {
    if (r.lambda_index != lambda_index) continue;
    if (r.branch != "none" && r.branch != "unique" && r.branch != branch) continue;
    const size_t v = static_cast<size_t>(r.row) * static_cast<size_t>(in.cols) + static_cast<size_t>(r.col);
    if (v >= nv || have[v]) continue;
    have[v] = true;
    ok[v] = r.status == "ok" || r.status.rfind("metric:", 0) == 0;
    xs[v] = r.x;
  }
  for (size_t v = 0; v < nv; ++v)
    if (!have[v]) throw Error(ErrorKind::UnsupportedFormat, "dataset has no record for vertex " + std::to_string(v));

  Mesh m;
  m.valid = ok;
  if (proj.pca) {
    Eigen::Matrix<double, 7, 1> mean = Eigen::Matrix<double, 7, 1>::Zero();
    int cnt = 0;
    for (size_t v = 0; v < nv; ++v)
      if (ok[v]) mean += Eigen::Map<const Eigen::Matrix<double, 7, 1>>(xs[v].data()), ++cnt;
    if (cnt) mean /= cnt;
    Eigen::Matrix<double, 7, 7> cov = Eigen::Matrix<double, 7, 7>::Zero();
    for (size_t v = 0; v < nv; ++v)
      if (ok[v]) {
        const Eigen::Matrix<double, 7, 1> d = Eigen::Map<const Eigen::Matrix<double, 7, 1>>(xs[v].data()) - mean;
        cov += d * d.transpose();
      }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 7, 7>> es(cov);
    for (int a = 0; a < 3; ++a) {
      Eigen::Matrix<double, 7, 1> e = es.eigenvectors().col(6 - a);
      int big = 0;
      for (int i = 1; i < 7; ++i)
        if (std::abs(e(i)) > std::abs(e(big)) + 1e-12) big = i;
      if (e(big) < 0) e = -e;
      for (int i = 0; i < 7; ++i) m.axes[static_cast<size_t>(a)][static_cast<size_t>(i)] = e(i);
    }
    for (size_t v = 0; v < nv; ++v) {
      std::array<double, 3> p{};
      if (ok[v])
        for (size_t a = 0; a < 3; ++a) {
          double s = 0;
          for (int i = 0; i < 7; ++i) s += (xs[v][static_cast<size_t>(i)] - mean(i)) * m.axes[a][static_cast<size_t>(i)];
          p[a] = s;
        }
      m.vertices.push_back(p);
    }
  } else {
    for (size_t v = 0; v < nv; ++v) {
      std::array<double, 3> p{};
      if (ok[v])
        for (size_t a = 0; a < 3; ++a) p[a] = xs[v][static_cast<size_t>(proj.coords[a])];
      m.vertices.push_back(p);
    }
  }
  for (const auto& t : grid_triangles(in.kind, in.rows, in.cols))
    if (ok[static_cast<size_t>(t[0])] && ok[static_cast<size_t>(t[1])] && ok[static_cast<size_t>(t[2])]) m.triangles.push_back(t);
  return m;
}

inline void write_obj(std::ostream& os, const MeshInput& in, const Mesh& m, int lambda_index, double lambda_deg,
                      const std::string& branch, const Projection& proj) {
  os << "# " << kMeshSchema << "\n";
  os << "# spec_name " << in.spec_name << "\n";
  os << "# spec_hash " << in.spec_hash << "\n";
  os << "# lambda_index " << lambda_index << "\n";
  os << "# lambda_deg " << fmt(lambda_deg) << "\n";
  os << "# branch " << branch << "\n";
  if (proj.pca) {
    os << "# projection pca\n";
    for (size_t a = 0; a < 3; ++a) {
      os << "# axis" << a + 1;
      for (double v : m.axes[a]) os << ' ' << fmt(v);
      os << "\n";
    }
  } else {
    os << "# projection x" << proj.coords[0] + 1 << ",x" << proj.coords[1] + 1 << ",x" << proj.coords[2] + 1 << "\n";
  }
  size_t bad = 0;
  for (bool b : m.valid) bad += b ? 0 : 1;
  os << "# vertices " << m.vertices.size() << " triangles " << m.triangles.size() << " invalid " << bad << "\n";
  for (const auto& v : m.vertices) os << "v " << fmt(v[0]) << ' ' << fmt(v[1]) << ' ' << fmt(v[2]) << "\n";
  for (const auto& t : m.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
}

// ---------------------------------------------------------------------------
// reports

inline nlohmann::ordered_json report_json(const Report& r) {
  nlohmann::ordered_json j;
  j["schema"] = Report::kSchema;
  j["case"] = r.case_name;
  j["pass"] = r.pass();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e[c.at_least ? "min" : "tol"] = c.tol;
    e["pass"] = c.pass();
    arr.push_back(e);
  }
  j["checks"] = arr;
  j["notes"] = r.notes;
  return j;
}

inline std::string report_string(const Report& r) { return report_json(r).dump(2) + "\n"; }

}  // namespace isowill
