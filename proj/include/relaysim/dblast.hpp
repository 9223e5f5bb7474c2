#pragma once

// Distributed D-BLAST: each message is layered diagonally across its source
// slot and the following relay slot, and the destination decodes layer by
// layer with MMSE-SIC. Decoded layers are cancelled exactly; undecoded ones
// are treated as Gaussian interference.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/complex_matrix.hpp"
#include "relaysim/mimo_info.hpp"

namespace relaysim {

// Column pairing and slot placement of the diagonal layers in the assembled
// successive-relaying matrix.
struct LayerSchedule {
  struct Layer {
    std::size_t source_col;  // column carrying the source codeword
    std::size_t relay_col;   // column carrying the relay re-encoding
    int source_slot;         // 1-based
    int relay_slot;
    int relay_antenna;       // 1 or 2, alternating with the message index
  };

  int codewords = 0;
  std::vector<Layer> layers;
};

inline LayerSchedule layer_schedule(int l_count) {
  if (l_count < 1) throw std::invalid_argument("layer_schedule: L must be >= 1");
  LayerSchedule schedule;
  schedule.codewords = l_count;
  schedule.layers.reserve(static_cast<std::size_t>(l_count));
  for (int l = 1; l <= l_count; ++l) {
    const std::size_t source_col = 2 * static_cast<std::size_t>(l) - 2;
    schedule.layers.push_back({source_col, source_col + 1, l, l + 1,
                               relay_antenna_for_message(l)});
  }
  return schedule;
}

// Achievable rate of every layer, in bits per frame per layer.
struct LayerRates {
  std::vector<double> bits;

  double total() const {
    return std::accumulate(bits.begin(), bits.end(), 0.0);
  }
};

// Block MMSE-SIC: decoding position k treats all not-yet-decoded layers as
// Gaussian interference, so layer l at position k achieves
//   rate_l = log2 det(I_2 + eta H_l^H K^-1 H_l),
//   K = I + eta * sum of H_j H_j^H over layers j decoded after position k.
// K^-1 is applied through Cholesky solves. The rates chain: their sum equals
// log2 det(I + eta H H^H) for any decode order.
inline LayerRates mmse_sic_layer_rates(const ComplexMatrix& h, const SnrPoint& snr,
                                       const LayerSchedule& schedule,
                                       std::span<const std::size_t> decode_order) {
  const std::size_t l_count = schedule.layers.size();
  if (h.cols() != 2 * l_count)
    throw std::invalid_argument("mmse_sic_layer_rates: schedule does not match H");
  if (decode_order.size() != l_count)
    throw std::invalid_argument("mmse_sic_layer_rates: bad decode order size");
  const std::size_t n = h.rows();

  // Interference Gram sum(H_j H_j^H), grown as undecoded layers accumulate
  // in reverse decode order. Its bandwidth is bounded by the widest column
  // support, which the band storage tracks below.
  ComplexMatrix interference(n, n);
  std::size_t bandwidth = 0;
  std::vector<std::pair<std::size_t, std::size_t>> support(h.cols());
  for (std::size_t c = 0; c < h.cols(); ++c) {
    support[c] = h.column_support(c);
    if (support[c].second > support[c].first)
      bandwidth = std::max(bandwidth, support[c].second - support[c].first - 1);
  }

  LayerRates rates;
  rates.bits.assign(l_count, 0.0);
  HermitianBand k_factor(n, bandwidth);
  std::vector<Complex> column(n), w_source, w_relay;

  const auto add_column = [&](std::size_t c) {
    const auto [lo, hi] = support[c];
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = lo; j <= i; ++j)
        interference(i, j) += h(i, c) * std::conj(h(j, c));
  };
  const auto solve_column = [&](std::size_t c, std::vector<Complex>& w) {
    for (std::size_t i = 0; i < n; ++i) column[i] = h(i, c);
    k_factor.forward_solve(column, w);
  };

  for (std::size_t pos = l_count; pos-- > 0;) {
    const std::size_t l = decode_order[pos];
    if (l >= l_count)
      throw std::invalid_argument("mmse_sic_layer_rates: decode order out of range");
    const LayerSchedule::Layer& layer = schedule.layers[l];

    k_factor.load_identity_plus(interference, snr.eta);
    k_factor.cholesky_in_place();
    solve_column(layer.source_col, w_source);
    solve_column(layer.relay_col, w_relay);

    double g11 = 0.0, g22 = 0.0;
    Complex g12 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      g11 += std::norm(w_source[i]);
      g22 += std::norm(w_relay[i]);
      g12 += std::conj(w_source[i]) * w_relay[i];
    }
    const double det = (1.0 + snr.eta * g11) * (1.0 + snr.eta * g22) -
                       std::norm(snr.eta * g12);
    if (!(det > 0.0) || !std::isfinite(det))
      throw std::runtime_error("mmse_sic_layer_rates: non-finite layer rate");
    rates.bits[l] = std::log2(det);

    add_column(layer.source_col);
    add_column(layer.relay_col);
  }
  return rates;
}

// Default decode order follows the temporal layering: message 1 first.
inline LayerRates mmse_sic_layer_rates(const ComplexMatrix& h, const SnrPoint& snr,
                                       const LayerSchedule& schedule) {
  std::vector<std::size_t> order(schedule.layers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return mmse_sic_layer_rates(h, snr, schedule, order);
}

// Frame outage under SIC decoding: the frame is lost as soon as any layer's
// rate falls below the per-message target B = R(L+1)/L, which preserves the
// frame spectral efficiency of R bits/slot.
inline bool dblast_frame_outage(const ChannelRealization& ch, const FrameSpec& frame,
                                const SnrPoint& snr, double rate_bits_per_slot) {
  if (rate_bits_per_slot < 0.0)
    throw std::invalid_argument("dblast_frame_outage: negative rate");
  const double per_message_bits =
      rate_bits_per_slot * frame.slots() / frame.codewords;
  const LayerSchedule schedule = layer_schedule(frame.codewords);
  const ComplexMatrix h = assemble_successive_matrix(ch, frame);
  const LayerRates rates = mmse_sic_layer_rates(h, snr, schedule);
  for (double r : rates.bits)
    if (r < per_message_bits) return true;
  return false;
}

}  // namespace relaysim
