#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace cnb {

struct QuadConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-15;
  /// At most 2^max_depth Simpson panels per integrated segment.
  int max_depth = 20;
  /// When set, continuous weight is restricted to [epsilon, 1 - epsilon].
  /// Point masses are unaffected.
  std::optional<double> epsilon;
};

namespace detail {

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

template <class F>
double simpson_recurse(const F& f, const SimpsonPanel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol || !(lm > p.a && rm < p.b))
    return left + right + delta / 15.0;
  return simpson_recurse(f, SimpsonPanel{p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         simpson_recurse(f, SimpsonPanel{p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline constexpr int kMaxInitialPanels = 8;

/// Adaptive Simpson quadrature with Richardson correction on a smooth
/// integrand. The interval is first cut into `initial_panels` (1 to 8)
/// panels; each panel is halved until successive estimates agree to
/// max(abs_tol, rel_tol * |I|).
template <class F>
double integrate(const F& f, double a, double b, const QuadConfig& cfg = {}, int initial_panels = kMaxInitialPanels) {
  if (!(b > a)) return 0.0;
  const int count = std::clamp(initial_panels, 1, kMaxInitialPanels);
  const double h = (b - a) / count;
  detail::SimpsonPanel panels[kMaxInitialPanels];
  double coarse = 0.0;
  double f_left = f(a);
  for (int k = 0; k < count; ++k) {
    const double lo = a + k * h;
    const double hi = k + 1 == count ? b : a + (k + 1) * h;
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    const double f_right = f(hi);
    const double s = (hi - lo) / 6.0 * (f_left + 4.0 * f_mid + f_right);
    panels[k] = detail::SimpsonPanel{lo, mid, hi, f_left, f_mid, f_right, s};
    coarse += s;
    f_left = f_right;
  }
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(coarse)) / count;
  double total = 0.0;
  for (int k = 0; k < count; ++k)
    total += detail::simpson_recurse(f, panels[k], tol, std::max(0, cfg.max_depth - 3));
  return total;
}

}  // namespace cnb
