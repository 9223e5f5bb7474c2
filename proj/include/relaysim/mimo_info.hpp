#pragma once

// Gaussian mutual information and outage events on complex channel matrices,
// plus the SNR-constraint thresholds under which the relay can be assumed to
// decode reliably.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/complex_matrix.hpp"

namespace relaysim {

// Per-antenna transmit power over unit noise variance, linear scale.
struct SnrPoint {
  double eta = 1.0;

  SnrPoint() = default;
  explicit SnrPoint(double eta_) : eta(eta_) {
    if (!(eta > 0.0)) throw std::invalid_argument("SnrPoint: eta must be positive");
  }
  static SnrPoint from_db(double db) { return SnrPoint(std::pow(10.0, db / 10.0)); }
  double eta_db() const { return 10.0 * std::log10(eta); }
};

// log2 det(I + eta H H^H) evaluator, reusable across an SNR sweep: the Gram
// is formed once on the smaller side (det(I + eta H H^H) = det(I + eta H^H H))
// and each evaluation is one band-aware Cholesky.
class MutualInformation {
 public:
  explicit MutualInformation(const ComplexMatrix& h) {
    if (!h.all_finite())
      throw std::invalid_argument("mutual_information: non-finite channel matrix");
    gram_ = h.rows() <= h.cols() ? conjugate_gram_rows(h) : conjugate_gram_cols(h);
    bandwidth_ = hermitian_bandwidth(gram_);
  }

  double bits(const SnrPoint& snr) const {
    HermitianBand a(gram_.rows(), bandwidth_);
    a.load_identity_plus(gram_, snr.eta);
    a.cholesky_in_place();
    const double mi = a.log2_det_of_factor();
    if (!std::isfinite(mi))
      throw std::runtime_error("mutual_information: non-finite log-determinant");
    return mi;
  }

 private:
  ComplexMatrix gram_;
  std::size_t bandwidth_ = 0;
};

inline double mutual_information(const ComplexMatrix& h, const SnrPoint& snr) {
  return MutualInformation(h).bits(snr);
}

// Direct transmission baseline: 1x2 SIMO between source and destination.
inline bool direct_outage_event(const ChannelRealization& ch, const SnrPoint& snr,
                                double rate_bits_per_slot) {
  if (rate_bits_per_slot < 0.0)
    throw std::invalid_argument("direct_outage_event: negative rate");
  const double b = std::norm(ch.h_sd[0]) + std::norm(ch.h_sd[1]);
  const double mi = std::log2(1.0 + snr.eta * b);
  return mi < rate_bits_per_slot;
}

// Successive relaying with joint decoding of the whole frame: outage when
// the frame mutual information falls below R(L+1) bits, i.e. spectral
// efficiency R bits/slot over the L+1 slots.
inline bool successive_outage_event(const ChannelRealization& ch,
                                    const FrameSpec& frame, const SnrPoint& snr,
                                    double rate_bits_per_slot) {
  if (rate_bits_per_slot < 0.0)
    throw std::invalid_argument("successive_outage_event: negative rate");
  const double mi = mutual_information(assemble_successive_matrix(ch, frame), snr);
  return mi < rate_bits_per_slot * frame.slots();
}

// Space-time coding protocol: one message per two slots, so the target is 2R.
inline bool stc_outage_event(const ChannelRealization& ch, const SnrPoint& snr,
                             double rate_bits_per_slot) {
  if (rate_bits_per_slot < 0.0)
    throw std::invalid_argument("stc_outage_event: negative rate");
  const double mi = mutual_information(assemble_stc_matrix(ch), snr);
  return mi < 2.0 * rate_bits_per_slot;
}

// Point-to-point 2x2 MIMO outage, the reference the relaying scheme is
// measured against.
inline bool mimo22_outage_event(const ComplexMatrix& h22, const SnrPoint& snr,
                                double rate_bits_per_use) {
  if (h22.rows() != 2 || h22.cols() != 2)
    throw std::invalid_argument("mimo22_outage_event: matrix must be 2x2");
  return mutual_information(h22, snr) < rate_bits_per_use;
}

namespace detail {

// Shared handling of the degenerate denominators in the constraint
// thresholds. num/den with den == 0 resolves by the numerator's sign;
// an all-zero realization has no meaningful threshold.
inline double threshold_ratio(double numerator, double denominator,
                              bool all_terms_zero) {
  if (all_terms_zero)
    throw std::domain_error("constraint threshold: all channel terms zero");
  if (denominator == 0.0) {
    if (numerator > 0.0) return std::numeric_limits<double>::infinity();
    if (numerator < 0.0) return -std::numeric_limits<double>::infinity();
    return 0.0;
  }
  return numerator / denominator;
}

}  // namespace detail

// Largest eta for which the successive-relaying decode constraint holds:
// eta <= (a - b - c) / (b c) with a = min_i |h_sr_i|^2 (path-loss scaling
// already inside the coefficients), b = |h_sd_1|^2 + |h_sd_2|^2 and
// c = min_i (|h_ri_d1|^2 + |h_ri_d2|^2). Negative when a < b + c: the
// constraint then fails for every positive eta.
inline double constraint_threshold_successive(const ChannelRealization& ch) {
  const double a = std::min(std::norm(ch.h_sr[0]), std::norm(ch.h_sr[1]));
  const double b = std::norm(ch.h_sd[0]) + std::norm(ch.h_sd[1]);
  const double c =
      std::min(std::norm(ch.h_rd[0][0]) + std::norm(ch.h_rd[0][1]),
               std::norm(ch.h_rd[1][0]) + std::norm(ch.h_rd[1][1]));
  if (b * c == 0.0 && a > 0.0) return std::numeric_limits<double>::infinity();
  return detail::threshold_ratio(a - b - c, b * c,
                                 a == 0.0 && b == 0.0 && c == 0.0);
}

// Largest eta for which the space-time-coding decode constraint holds:
// eta <= p / (q z) with p = |h_sr_1|^2 + |h_sr_2|^2 (scaled), q as b above
// and z the total relay-destination power.
inline double constraint_threshold_stc(const ChannelRealization& ch) {
  const double p = std::norm(ch.h_sr[0]) + std::norm(ch.h_sr[1]);
  const double q = std::norm(ch.h_sd[0]) + std::norm(ch.h_sd[1]);
  const double z = std::norm(ch.h_rd[0][0]) + std::norm(ch.h_rd[0][1]) +
                   std::norm(ch.h_rd[1][0]) + std::norm(ch.h_rd[1][1]);
  if (p == 0.0 && q == 0.0 && z == 0.0)
    throw std::domain_error("constraint threshold: all channel terms zero");
  if (p == 0.0) return 0.0;
  return detail::threshold_ratio(p, q * z, false);
}

}  // namespace relaysim
