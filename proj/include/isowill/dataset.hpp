#pragma once

// Grid runs: one record per (λ, grid point, branch), λ outer, grid row-major.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "spec_file.hpp"
#include "surface_builder.hpp"
#include "verification.hpp"

namespace isowill {

// shortest round-trip decimal, locale independent
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) v = 0;  // drop the sign of -0
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string fmt_point(cd z) { return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i"; }

inline uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

enum class BranchPolicy { Primal, Dual, Both };

inline BranchPolicy parse_branch_policy(const std::string& s) {
  if (s == "primal") return BranchPolicy::Primal;
  if (s == "dual") return BranchPolicy::Dual;
  if (s == "both") return BranchPolicy::Both;
  throw Error(ErrorKind::UnsupportedFormat, "branch policy must be primal, dual or both");
}

struct RunConfig {
  std::optional<GridSpec> grid;        // overrides the spec file
  std::vector<double> lambda_deg;      // overrides the spec file; default {0}
  Mode mode = Mode::Exact;
  Gauge gauge = Gauge::DetD;
  double fd_step = 1e-4;
  BranchPolicy branches = BranchPolicy::Both;
  IwasawaTolerances tol{};
};

struct Record {
  int lambda_index = 0;
  double lambda_deg = 0;
  int row = 0, col = 0;
  cd z;
  std::string branch = "none";
  int rank = 0;
  std::string status = "ok";
  cd rho;
  bool rho_infinite = false;
  std::array<double, 8> Y{};
  std::array<double, 7> x{};
  double metric = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  bool renormalized = false;
};

struct Dataset {
  std::string spec_name;
  uint64_t spec_hash = 0;
  GridSpec grid;
  std::vector<double> lambda_deg;
  std::vector<Record> records;
  int samples = 0;         // (λ, point) pairs
  int big_cell_or_degenerate = 0;
};

using run_scalar = std::complex<long double>;

inline Pipeline<run_scalar> make_pipeline(const SpecFile& spec, const RunConfig& cfg) {
  FcheckData fc = load_potential(spec.potential);
  Mode mode = cfg.mode;
  if (mode == Mode::Exact && !fc.polynomial()) mode = Mode::Numeric;
  return Pipeline<run_scalar>(std::move(fc), mode, cfg.gauge, cfg.tol);
}

inline bool keep_branch(Branch b, BranchPolicy p) {
  if (b == Branch::Rank2Unique || p == BranchPolicy::Both) return true;
  return (b == Branch::Rank1Primal) == (p == BranchPolicy::Primal);
}

inline Dataset construct_dataset(const SpecFile& spec, const RunConfig& cfg) {
  using C = run_scalar;
  Dataset ds;
  ds.spec_name = spec.potential.name;
  ds.spec_hash = fnv1a64(spec.source);
  ds.grid = cfg.grid ? *cfg.grid : spec.grid ? *spec.grid : default_grid();
  ds.lambda_deg = !cfg.lambda_deg.empty() ? cfg.lambda_deg : !spec.lambda_deg.empty() ? spec.lambda_deg : std::vector<double>{0};
  const Pipeline<C> pl = make_pipeline(spec, cfg);
  const auto pts = ds.grid.points();
  const int cols = ds.grid.cols();
  const size_t n = pts.size() * ds.lambda_deg.size();

  auto one = [&](size_t idx) {
    const size_t li = idx / pts.size(), pi = idx % pts.size();
    Record base;
    base.lambda_index = static_cast<int>(li);
    base.lambda_deg = ds.lambda_deg[li];
    base.row = static_cast<int>(pi) / cols;
    base.col = static_cast<int>(pi) % cols;
    base.z = pts[pi];
    const cd lam = unit_lambda(base.lambda_deg);
    std::vector<Record> out;
    try {
      const C z = from_cd<C>(base.z), l = from_cd<C>(lam);
      const auto p = pl.at(z);
      for (const auto& s : surface_at(p, l)) {
        if (!keep_branch(s.branch, cfg.branches)) continue;
        Record r = base;
        r.branch = branch_name(s.branch);
        r.rank = s.rank;
        r.rho = to_cd(s.rho);
        r.rho_infinite = s.rho_infinite;
        for (size_t k = 0; k < 8; ++k) r.Y[k] = to_double(s.Y[k]);
        for (size_t k = 0; k < 7; ++k) r.x[k] = to_double(s.x[k]);
        r.margin = to_double(s.margin);
        r.renormalized = s.renormalized;
        try {
          r.metric = to_double(induced_metric(pl, z, l, fd_step(z, cfg.fd_step), s.branch));
        } catch (const Error& e) {
          r.status = std::string("metric:") + kind_name(e.kind());
        }
        out.push_back(r);
      }
    } catch (const Error& e) {
      Record r = base;
      r.status = kind_name(e.kind());
      for (auto& v : r.Y) v = std::numeric_limits<double>::quiet_NaN();
      for (auto& v : r.x) v = std::numeric_limits<double>::quiet_NaN();
      out.push_back(r);
    }
    return out;
  };
  const auto parts = parallel_map<std::vector<Record>>(n, one);
  ds.samples = static_cast<int>(n);
  for (const auto& v : parts) {
    if (v.size() == 1 && (v[0].status == "OutsideBigCell" || v[0].status == "DegenerateB1")) ++ds.big_cell_or_degenerate;
    ds.records.insert(ds.records.end(), v.begin(), v.end());
  }
  return ds;
}

}  // namespace isowill
