#pragma once

// Pointwise evaluation of the extended frame.

#include <optional>

#include "iwasawa.hpp"
#include "potential.hpp"

namespace isowill {

enum class Mode { Exact, Numeric };

inline const char* mode_name(Mode m) { return m == Mode::Exact ? "exact" : "numeric"; }

template <class C>
struct PointFrame {
  C z;
  FcheckAt<C> pot;
  W0Blocks<C> w0;
  L0Blocks<C> l;
  Mat<C> L0, L0inv;
  LoopMat<C> H, W, F;

  Mat<C> frame(const C& lambda) const { return loop_eval(F, lambda); }
  real_t<C> margin() const { return big_cell_margin(w0); }
};

template <class C>
class Pipeline {
 public:
  // exact mode needs polynomial f and g; the W0 blocks are then solved once
  // symbolically and compiled for evaluation
  Pipeline(FcheckData fc, Mode mode = Mode::Exact, Gauge gauge = Gauge::DetD, IwasawaTolerances tol = {})
      : fc_(std::move(fc)), mode_(mode), gauge_(gauge), tol_(tol) {
    if (mode_ == Mode::Exact) {
      if (!fc_.polynomial()) throw Error(ErrorKind::UnsupportedFormat, "exact mode needs a polynomial potential");
      exact_ = std::make_shared<const ExactW0>(solve_w0_exact(fc_));
      eval_ = ExactW0Eval<C>(*exact_);
    }
  }

  // share an already solved exact system across scalar types
  Pipeline(FcheckData fc, std::shared_ptr<const ExactW0> exact, Gauge gauge = Gauge::DetD, IwasawaTolerances tol = {})
      : fc_(std::move(fc)), mode_(Mode::Exact), gauge_(gauge), tol_(tol), exact_(std::move(exact)) {
    eval_ = ExactW0Eval<C>(*exact_);
  }

  const FcheckData& potential() const { return fc_; }
  Mode mode() const { return mode_; }
  Gauge gauge() const { return gauge_; }
  const std::shared_ptr<const ExactW0>& exact() const { return exact_; }

  W0Blocks<C> w0_at(const C& z, const FcheckAt<C>& pot) const {
    if (mode_ == Mode::Exact) {
      W0Blocks<C> w = eval_(z);
      const real_t<C> m = big_cell_margin(w);
      const real_t<C> tr = re_part(C(w.d(0, 0) + w.d(1, 1)));
      if (!(m > 0) || to_double(tr / m) > tol_.cond_max) throw Error(ErrorKind::OutsideBigCell, "d is numerically singular");
      return w;
    }
    return solve_w0(pot.f, pot.g, tol_);
  }

  PointFrame<C> at(const C& z) const {
    PointFrame<C> p;
    p.z = z;
    p.pot = eval_fcheck(fc_, z);
    p.w0 = w0_at(z, p.pot);
    p.l = factor_l0(p.w0, gauge_, tol_);
    p.L0 = assemble_l0(p.l);
    p.L0inv = assemble_l0_inverse(p.l);
    p.H = meromorphic_frame(p.pot.f, p.pot.g);
    p.W = assemble_w(p.w0);
    p.F = extended_frame(p.H, p.W, p.L0inv);
    return p;
  }

 private:
  FcheckData fc_;
  Mode mode_;
  Gauge gauge_;
  IwasawaTolerances tol_;
  std::shared_ptr<const ExactW0> exact_;
  ExactW0Eval<C> eval_;
};

}  // namespace isowill
