#pragma once

// The full residual report for a potential over a grid, and the extra
// closed-form checks of the golden cases.

#include <optional>

#include "dataset.hpp"
#include "multiprecision.hpp"
#include "verification.hpp"

namespace isowill {

struct VerifyOptions {
  std::vector<double> flat_lambda_deg{0, 90, 60};
  std::optional<double> tol_override;  // replaces every upper tolerance
  double max_flagged = 0;              // allowed fraction of failing points
};

namespace detail {
struct PointChecks {
  bool flagged = false;
  std::string error;
  std::map<std::string, double> v;  // max-accumulated residuals
  void put(const std::string& k, double x) {
    auto it = v.find(k);
    if (it == v.end() || !(x <= it->second)) v[k] = x;  // NaN sticks
  }
};

inline void merge(std::map<std::string, double>& into, const std::map<std::string, double>& from) {
  for (const auto& [k, x] : from) {
    auto it = into.find(k);
    if (it == into.end() || !(x <= it->second)) into[k] = x;
  }
}

// W₁ never carries the v blocks
template <class C>
double v_block_size(const LoopMat<C>& W) {
  const Mat<C> w1 = W.coeff(-1);
  return to_double(std::max(max_abs(w1.block(2, 0, 4, 2)), max_abs(w1.block(6, 2, 2, 4))));
}
}  // namespace detail

struct Tolerances {
  double iwasawa = 1e-11, factor = 1e-11, frame = 1e-9, lightcone = 1e-9, sphere = 1e-10, rho = 1e-8;
  double b1 = 1e-8, phi_imag = 1e-9, isotropy = 1e-5, flatness = 1e-3, halving = 3;
  double mc_fd = 1e-6, mc_blocks = 1e-4, structural = 0;
};

inline Report verify_spec(const SpecFile& spec, const RunConfig& cfg, const VerifyOptions& opt = {}) {
  using C = run_scalar;
  Tolerances t;
  const GridSpec grid = cfg.grid ? *cfg.grid : spec.grid ? *spec.grid : default_grid();
  const std::vector<double> lam_deg =
      !cfg.lambda_deg.empty() ? cfg.lambda_deg : !spec.lambda_deg.empty() ? spec.lambda_deg : std::vector<double>{0};
  const Pipeline<C> pl = make_pipeline(spec, cfg);
  const auto pts = grid.points();
  const double h = cfg.fd_step;

  auto one = [&](size_t i) {
    detail::PointChecks pc;
    const C z = from_cd<C>(pts[i]);
    try {
      const auto p = pl.at(z);
      const auto w = w0_residuals(p.w0, p.pot.f, p.pot.g);
      pc.put("iwasawa.a", w.a), pc.put("iwasawa.b", w.b), pc.put("iwasawa.c", w.c), pc.put("iwasawa.d", w.d);
      pc.put("iwasawa.e", w.e), pc.put("iwasawa.gcheck", w.gcheck);
      const auto l = l0_residuals(p.l, p.w0);
      pc.put("factor", std::max({l.a, l.q, l.d, l.group}));
      pc.put("structural.v_block", detail::v_block_size(p.W));
      FrameReport fr;
      std::vector<C> lams;
      for (int k = 0; k < 8; ++k) lams.push_back(from_cd<C>(std::polar(1.0, 2 * std::numbers::pi * (k + 0.25) / 8)));
      accumulate_frame(fr, p.F, p.H, lams);
      pc.put("frame.reality", fr.reality), pc.put("frame.twist", fr.twist), pc.put("frame.group", fr.group);
      pc.put("frame.positive", fr.positive);
      for (double d : lam_deg)
        for (const auto& s : surface_at(p, from_cd<C>(unit_lambda(d))))
          for (const auto& [k, x] : s.residuals) pc.put("surface." + k, x);

      const real_t<C> hs = fd_step(z, h);
      const auto mc = mc_form(pl, z, hs);
      pc.put("mc.b1_pattern", to_double(b1_pattern_residual(mc.B1)));
      pc.put("mc.b1_isotropy", to_double(b1_isotropy_residual(mc.B1)));
      pc.put("mc.stray_degrees", to_double(mc.stray / mc.scale));
      pc.put("mc.antiholomorphic", to_double(mc.antiholo / mc.scale));
      pc.put("mc.cartan", to_double(cartan_residual(mc) / mc.scale));
      pc.put("mc.k2_pattern", to_double(k2_pattern_residual(mc.A2)));
      const auto bf = check_block_formulas(pl, z, hs);
      pc.put("mc.offdiagonal_block", to_double(bf.p));
      pc.put("mc.diagonal_blocks", to_double(std::max({bf.a1, bf.a0, bf.a4})));

      const C l0 = from_cd<C>(unit_lambda(lam_deg.front()));
      for (int half = 0; half < 2; ++half) {
        const real_t<C> hh = half ? hs / 2 : hs;
        const auto iso = isotropy_residuals(pl, z, l0, hh);
        pc.put(half ? "isotropy@h/2" : "isotropy@h", to_double(std::max({iso[0], iso[1], iso[2]})));
        for (double d : opt.flat_lambda_deg)
          pc.put(half ? "flatness@h/2" : "flatness@h", to_double(flatness_residual(pl, z, from_cd<C>(unit_lambda(d)), hh)));
      }
    } catch (const Error& e) {
      pc.flagged = true;
      pc.error = e.what();
    }
    return pc;
  };
  const auto per = parallel_map<detail::PointChecks>(pts.size(), one);

  std::map<std::string, double> m;
  int flagged = 0;
  Report r;
  r.case_name = spec.potential.name;
  for (size_t i = 0; i < per.size(); ++i) {
    if (per[i].flagged) {
      ++flagged;
      r.notes.push_back("flagged z=" + fmt_point(pts[i]) + ": " + per[i].error);
      continue;
    }
    detail::merge(m, per[i].v);
  }
  auto tol = [&](double base) { return opt.tol_override ? *opt.tol_override : base; };
  auto get = [&](const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
  };
  r.add("flagged_fraction", pts.empty() ? 0.0 : double(flagged) / double(pts.size()), opt.max_flagged);
  if (flagged == static_cast<int>(pts.size())) return r;

  for (const char* k : {"iwasawa.a", "iwasawa.b", "iwasawa.c", "iwasawa.d", "iwasawa.e", "iwasawa.gcheck"})
    r.add(k, get(k), tol(t.iwasawa));
  r.add("factor", get("factor"), tol(t.factor));
  r.add("structural.v_block", get("structural.v_block"), tol(t.structural));
  for (const char* k : {"frame.reality", "frame.twist", "frame.group", "frame.positive"}) r.add(k, get(k), tol(t.frame));
  r.add("surface.lightcone", get("surface.lightcone"), tol(t.lightcone));
  r.add("surface.sphere", get("surface.sphere"), tol(t.sphere));
  r.add("surface.rho", get("surface.rho"), tol(t.rho));
  r.add("surface.b1_pattern", get("surface.b1_pattern"), tol(t.b1));
  r.add("surface.b1_isotropy", get("surface.b1_isotropy"), tol(t.b1));
  r.add("surface.phi_imag", get("surface.phi_imag"), tol(t.phi_imag));
  r.add("mc.b1_pattern", get("mc.b1_pattern"), tol(t.mc_fd));
  r.add("mc.b1_isotropy", get("mc.b1_isotropy"), tol(t.mc_fd));
  r.add("mc.stray_degrees", get("mc.stray_degrees"), tol(t.mc_blocks));
  r.add("mc.antiholomorphic", get("mc.antiholomorphic"), tol(t.mc_blocks));
  r.add("mc.cartan", get("mc.cartan"), tol(t.mc_blocks));
  r.add("mc.k2_pattern", get("mc.k2_pattern"), tol(t.mc_fd));
  r.add("mc.offdiagonal_block", get("mc.offdiagonal_block"), tol(t.mc_blocks));
  r.add("mc.diagonal_blocks", get("mc.diagonal_blocks"), tol(t.mc_blocks));
  r.add("isotropy", get("isotropy@h"), tol(t.isotropy));
  r.add_min("isotropy.halving_ratio", get("isotropy@h") / get("isotropy@h/2"), t.halving);
  r.add("flatness", get("flatness@h"), tol(t.flatness));
  r.add_min("flatness.halving_ratio", get("flatness@h") / get("flatness@h/2"), t.halving);
  return r;
}

// ---------------------------------------------------------------------------
// golden case extras

inline Report golden_report(const GoldenCase& gc, const VerifyOptions& opt = {}) {
  using C = run_scalar;
  const SpecFile spec = gc.spec();
  RunConfig cfg;
  cfg.gauge = gc.gauge;
  cfg.grid = default_grid();
  cfg.lambda_deg = {0, 90};
  Report r = verify_spec(spec, cfg, opt);
  r.case_name = gc.name;
  const Pipeline<C> pl = make_pipeline(spec, cfg);
  auto tol = [&](double base) { return opt.tol_override ? *opt.tol_override : base; };

  std::vector<cd> pts = cfg.grid->points();
  pts.insert(pts.begin(), cd(0));
  const auto g = golden_residual(gc, pl, pts, {cd(1), cd(0, 1)});
  r.add("golden.chordal", max_distance(g), tol(gc.tol));

  if (gc.name == "sphere") {
    const double m0 = to_double(induced_metric(pl, C(0), C(1), real_t<C>(1e-4)));
    r.add("golden.metric_at_0", std::abs(m0 - 2), tol(1e-6));
    const Pipeline<mp_complex> hp(load_potential(spec.potential), Mode::Exact, gc.gauge);
    const double c1 = to_double(induced_metric_at_infinity(hp, mp_complex(1), mp_real(2e-5)));
    const double c2 = to_double(induced_metric_at_infinity(hp, mp_complex(1), mp_real(1e-5)));
    r.add("golden.metric_chart_infinity", std::abs(c1 - 32), tol(1e-6));
    r.add_min("golden.metric_chart_halving_ratio", std::abs(c1 - 32) / std::abs(c2 - 32), 3);
    r.add("golden.lambda_isometry", lambda_isometry_suite(pl, cfg.grid->points(), {cd(1), cd(0, 1), unit_lambda(60)}, 1e-4),
          tol(1e-8));
  }
  if (gc.name == "minimal") {
    double tail = 0;
    for (const cd& z : pts)
      for (const cd& lam : {cd(1), cd(0, 1)}) {
        const auto x = x_at(pl, from_cd<C>(z), from_cd<C>(lam), gc.branch);
        tail = std::max({tail, std::abs(to_double(x[5])), std::abs(to_double(x[6]))});
      }
    r.add("golden.s4_coordinates", tail, tol(1e-10));
  }
  return r;
}

}  // namespace isowill
