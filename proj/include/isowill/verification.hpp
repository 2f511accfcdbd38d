#pragma once

// Golden cases and residual suites over grids.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "golden_forms.hpp"
#include "spec_file.hpp"
#include "surface_builder.hpp"

namespace isowill {

using cd = std::complex<double>;

// one named residual against its tolerance
struct Check {
  std::string name;
  double value = 0;
  double tol = 0;
  bool at_least = false;  // pass when value >= tol
  bool pass() const { return at_least ? value >= tol : value <= tol; }
};

struct Report {
  static constexpr const char* kSchema = "isowill-report/1";
  std::string case_name;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  void add(std::string name, double value, double tol) { checks.push_back({std::move(name), value, tol, false}); }
  void add_min(std::string name, double value, double bound) { checks.push_back({std::move(name), value, bound, true}); }
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// golden cases

struct GoldenCase {
  std::string name;
  std::string spec_text;
  Gauge gauge = Gauge::DetD;
  Branch branch = Branch::Rank2Unique;
  std::function<std::array<double, 7>(cd, cd)> closed_form;
  double tol = 1e-8;

  SpecFile spec() const { return parse_spec(spec_text); }
};

namespace detail {
inline const char* kSphereSpec = R"(format = isowill-potential/1
name = sphere
h11.num = 0, i
h21.num = 0, -i
h31.num = -1
h41.num = i
h12.num = -1/2i
h22.num = -1/2i
h32.num = 0, -1/2
h42.num = 0, -1/2i
)";

inline const char* kMinimalSpec = R"(format = isowill-potential/1
name = minimal
h11.num = 0, -i
h21.num = 0, i
h31.num = 1/2
h41.num = 1/2i
)";

inline std::array<double, 7> minimal_x(cd z, cd lambda) {
  const auto y = golden::minimal::Y(golden::minimal::polynomial_example(z), lambda);
  std::array<double, 7> x{};
  for (int i = 0; i < 7; ++i) x[static_cast<size_t>(i)] = y[static_cast<size_t>(i) + 1] / y[0];
  return x;
}
}  // namespace detail

inline const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases = {
      {"sphere", detail::kSphereSpec, Gauge::DetD, Branch::Rank2Unique, golden::sphere::x, 1e-8},
      {"minimal", detail::kMinimalSpec, Gauge::UnitMiddle, Branch::Rank1Primal, detail::minimal_x, 1e-8},
  };
  return cases;
}

inline const GoldenCase& golden_case(const std::string& name) {
  for (const auto& c : golden_cases())
    if (c.name == name) return c;
  throw Error(ErrorKind::UnsupportedFormat, "unknown golden case '" + name + "'");
}

// 5x4 polar grid; the radii stay clear of the frame blow-up circle
inline GridSpec default_grid() { return GridSpec{}; }

inline double blowup_band_distance(const GridSpec& g) {
  double m = 1e300;
  const double rb = golden::sphere::blowup_radius();
  for (const auto& z : g.points()) m = std::min(m, std::abs(std::abs(z) - rb));
  return m;
}

// min over sign of the chordal distance between normalized vectors
template <size_t N>
double chordal_distance(const std::array<double, N>& a, const std::array<double, N>& b) {
  double na = 0, nb = 0;
  for (size_t i = 0; i < N; ++i) na += a[i] * a[i], nb += b[i] * b[i];
  na = std::sqrt(na), nb = std::sqrt(nb);
  double dp = 0, dm = 0;
  for (size_t i = 0; i < N; ++i) {
    const double u = a[i] / na, v = b[i] / nb;
    dp += (u - v) * (u - v);
    dm += (u + v) * (u + v);
  }
  return std::sqrt(std::min(dp, dm));
}

inline cd unit_lambda(double deg) { return std::polar(1.0, deg * std::numbers::pi / 180.0); }

template <class R>
std::array<double, 7> to_double7(const std::array<R, 7>& x) {
  std::array<double, 7> out{};
  for (size_t i = 0; i < 7; ++i) out[i] = to_double(x[i]);
  return out;
}

struct GoldenSample {
  cd z, lambda;
  double distance = 0;
};

template <class C>
std::vector<GoldenSample> golden_residual(const GoldenCase& gc, const Pipeline<C>& pl, const std::vector<cd>& points,
                                          const std::vector<cd>& lambdas) {
  std::vector<GoldenSample> out;
  for (const cd& lam : lambdas)
    for (const cd& z : points) {
      const auto x = to_double7(x_at(pl, from_cd<C>(z), from_cd<C>(lam), gc.branch));
      out.push_back({z, lam, chordal_distance(x, gc.closed_form(z, lam))});
    }
  return out;
}

inline double max_distance(const std::vector<GoldenSample>& s) {
  double m = 0;
  for (const auto& x : s) m = std::max(m, x.distance);
  return m;
}

// ---------------------------------------------------------------------------
// suites

struct IsotropyReport {
  double zz = 0, zzz = 0, zzzz = 0;  // ⟨Yz,Yz⟩, ⟨Yz,Yzz⟩, ⟨Yzz,Yzz⟩
  double max() const { return std::max({zz, zzz, zzzz}); }
};

template <class C>
IsotropyReport isotropy_suite(const Pipeline<C>& pl, const std::vector<cd>& points, const cd& lambda, double h,
                              Branch branch = Branch::Rank1Primal) {
  IsotropyReport r;
  for (const cd& z : points) {
    const auto v = isotropy_residuals(pl, from_cd<C>(z), from_cd<C>(lambda), fd_step(from_cd<C>(z), h), branch);
    r.zz = std::max(r.zz, to_double(v[0]));
    r.zzz = std::max(r.zzz, to_double(v[1]));
    r.zzzz = std::max(r.zzzz, to_double(v[2]));
  }
  return r;
}

struct FrameReport {
  double reality = 0, twist = 0, group = 0, positive = 0;
  double max() const { return std::max({reality, twist, group, positive}); }
};

// reality, twisting and G(8) membership of F̌; only nonnegative λ-degrees in F̌⁻¹H
template <class C>
void accumulate_frame(FrameReport& r, const LoopMat<C>& F, const LoopMat<C>& H, const std::vector<C>& lambdas) {
  r.reality = std::max(r.reality, to_double(loop_max_abs_diff(tau(F), F)));
  r.twist = std::max(r.twist, to_double(twist_residual(F)));
  for (const C& lam : lambdas) r.group = std::max(r.group, to_double(g8_residual(loop_eval(F, lam))));
  r.positive = std::max(r.positive, to_double(negative_part(LoopMat<C>(g8_inverse(F) * H))));
}

template <class C>
FrameReport reality_twist_suite(const Pipeline<C>& pl, const std::vector<cd>& points) {
  std::vector<C> lams;
  for (int k = 0; k < 8; ++k) lams.push_back(from_cd<C>(std::polar(1.0, 2 * std::numbers::pi * (k + 0.25) / 8)));
  FrameReport r;
  for (const cd& z : points) {
    const auto p = pl.at(from_cd<C>(z));
    accumulate_frame(r, p.F, p.H, lams);
  }
  return r;
}

template <class C>
W0Residuals iwasawa_suite(const Pipeline<C>& pl, const std::vector<cd>& points) {
  W0Residuals m;
  for (const cd& z : points) {
    const auto p = pl.at(from_cd<C>(z));
    const auto r = w0_residuals(p.w0, p.pot.f, p.pot.g);
    m.a = std::max(m.a, r.a), m.b = std::max(m.b, r.b), m.c = std::max(m.c, r.c);
    m.d = std::max(m.d, r.d), m.e = std::max(m.e, r.e), m.gcheck = std::max(m.gcheck, r.gcheck);
  }
  return m;
}

template <class C>
double flatness_suite(const Pipeline<C>& pl, const std::vector<cd>& points, const std::vector<cd>& lambdas, double h) {
  double m = 0;
  for (const cd& lam : lambdas)
    for (const cd& z : points) {
      const C zc = from_cd<C>(z);
      m = std::max(m, to_double(flatness_residual(pl, zc, from_cd<C>(lam), fd_step(zc, h))));
    }
  return m;
}

// largest relative spread of the metric density over λ at each point
template <class C>
double lambda_isometry_suite(const Pipeline<C>& pl, const std::vector<cd>& points, const std::vector<cd>& lambdas,
                             double h, Branch branch = Branch::Rank2Unique) {
  double m = 0;
  for (const cd& z : points) {
    const C zc = from_cd<C>(z);
    std::vector<double> v;
    for (const cd& lam : lambdas) v.push_back(to_double(induced_metric(pl, zc, from_cd<C>(lam), fd_step(zc, h), branch)));
    for (double x : v) m = std::max(m, std::abs(x - v.front()) / std::max(1.0, std::abs(v.front())));
  }
  return m;
}

// surface invariants per sample: lightcone, unit sphere, B1 pattern and isotropy
template <class C>
std::map<std::string, double> sample_suite(const Pipeline<C>& pl, const std::vector<cd>& points,
                                           const std::vector<cd>& lambdas) {
  std::map<std::string, double> m;
  for (const cd& lam : lambdas)
    for (const cd& z : points)
      for (const auto& s : surface_at(pl.at(from_cd<C>(z)), from_cd<C>(lam)))
        for (const auto& [k, v] : s.residuals) m[k] = std::max(m[k], v);
  return m;
}

}  // namespace isowill
