#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace heis::detail {

struct Min2D {
  double u = 0, v = 0, value = 0;
};

/// Nelder-Mead on two variables. Small fixed iteration budget; callers pass
/// a good start, so this is a local polish step, not a global search.
template <class F>
Min2D nelder_mead_2d(F&& f, double u0, double v0, double step, int iters = 80) {
  struct Vtx {
    double u, v, fv;
  };
  std::array<Vtx, 3> s{Vtx{u0, v0, f(u0, v0)}, Vtx{u0 + step, v0, f(u0 + step, v0)},
                       Vtx{u0, v0 + step, f(u0, v0 + step)}};
  auto order = [&] { std::sort(s.begin(), s.end(), [](const Vtx& a, const Vtx& b) { return a.fv < b.fv; }); };
  order();
  for (int it = 0; it < iters; ++it) {
    double cu = (s[0].u + s[1].u) / 2, cv = (s[0].v + s[1].v) / 2;
    double ru = cu + (cu - s[2].u), rv = cv + (cv - s[2].v);
    double fr = f(ru, rv);
    if (fr < s[0].fv) {
      double eu = cu + 2 * (cu - s[2].u), ev = cv + 2 * (cv - s[2].v);
      double fe = f(eu, ev);
      s[2] = fe < fr ? Vtx{eu, ev, fe} : Vtx{ru, rv, fr};
    } else if (fr < s[1].fv) {
      s[2] = {ru, rv, fr};
    } else {
      double ku = cu + 0.5 * (s[2].u - cu), kv = cv + 0.5 * (s[2].v - cv);
      double fk = f(ku, kv);
      if (fk < s[2].fv) {
        s[2] = {ku, kv, fk};
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].u = s[0].u + 0.5 * (s[i].u - s[0].u);
          s[i].v = s[0].v + 0.5 * (s[i].v - s[0].v);
          s[i].fv = f(s[i].u, s[i].v);
        }
      }
    }
    order();
    if (std::abs(s[2].fv - s[0].fv) < 1e-14 * (1.0 + std::abs(s[0].fv))) break;
  }
  return {s[0].u, s[0].v, s[0].fv};
}

}  // namespace heis::detail
