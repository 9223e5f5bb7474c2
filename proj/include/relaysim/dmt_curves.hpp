#pragma once

// Closed-form diversity-multiplexing tradeoff curves and the outage-probability
// transform that lower-bounds the successive-relaying scheme by a 2x2 MIMO
// reference.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaysim {

// Piecewise-linear d(r) curve. Evaluation interpolates between breakpoints
// and clamps to zero beyond the last one.
struct DmtCurve {
  struct Breakpoint {
    double r;
    double d;
  };
  std::vector<Breakpoint> breakpoints;

  double value(double r) const {
    if (breakpoints.empty() || r < breakpoints.front().r)
      throw std::domain_error("DmtCurve: multiplexing gain below curve domain");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
      const Breakpoint& a = breakpoints[i];
      const Breakpoint& b = breakpoints[i + 1];
      if (r <= b.r) {
        const double t = (r - a.r) / (b.r - a.r);
        return a.d + t * (b.d - a.d);
      }
    }
    return 0.0;  // beyond maximal multiplexing gain
  }

  double max_r() const { return breakpoints.back().r; }
};

// nt x nr point-to-point MIMO tradeoff: piecewise linear through
// (k, (nt-k)(nr-k)), k = 0..min(nt, nr).
inline DmtCurve mimo_dmt_curve(int nt, int nr) {
  if (nt < 1 || nr < 1)
    throw std::invalid_argument("mimo_dmt_curve: antenna counts must be positive");
  DmtCurve curve;
  const int kmax = std::min(nt, nr);
  for (int k = 0; k <= kmax; ++k)
    curve.breakpoints.push_back(
        {static_cast<double>(k), static_cast<double>((nt - k) * (nr - k))});
  return curve;
}

inline double mimo_dmt(int nt, int nr, double r) {
  const DmtCurve curve = mimo_dmt_curve(nt, nr);
  if (r < 0.0 || r > curve.max_r())
    throw std::domain_error("mimo_dmt: multiplexing gain out of range");
  return curve.value(r);
}

// Maximal tradeoff achievable by any half-duplex protocol on this network:
// d(r) = 4(1 - r)^+.
inline DmtCurve upper_bound_dmt_curve() {
  return DmtCurve{{{0.0, 4.0}, {1.0, 0.0}}};
}

inline double upper_bound_dmt(double r) {
  if (r < 0.0) throw std::domain_error("upper_bound_dmt: negative multiplexing gain");
  return 4.0 * std::max(1.0 - r, 0.0);
}

// Space-time coding protocol tradeoff, valid while the relay decodes
// correctly: 6-6r on [0,1/2], 5-4r on [1/2,1], 3-2r on [1,3/2]. Exceeds the
// general upper bound at low r because correct relay decoding is assumed.
inline DmtCurve stc_dmt_curve() {
  return DmtCurve{{{0.0, 6.0}, {0.5, 3.0}, {1.0, 1.0}, {1.5, 0.0}}};
}

inline double stc_dmt(double r) {
  if (r < 0.0 || r > 1.5)
    throw std::domain_error("stc_dmt: multiplexing gain out of range");
  if (r <= 0.5) return 6.0 - 6.0 * r;
  if (r <= 1.0) return 5.0 - 4.0 * r;
  return 3.0 - 2.0 * r;
}

// Outage bound for the successive-relaying network in terms of the 2x2 MIMO
// outage probability: p -> 2p - p^2, i.e. the probability that at least one
// of two independent 2x2 outage events occurs.
inline double outage_lower_bound(double p22) {
  if (!(p22 >= 0.0) || !(p22 <= 1.0))
    throw std::domain_error("outage_lower_bound: probability out of [0,1]");
  return 2.0 * p22 - p22 * p22;
}

}  // namespace relaysim
