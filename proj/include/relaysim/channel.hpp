#pragma once

// Block-fading channel model for the half-duplex successive-relaying network:
// one single-antenna source, one two-antenna relay next to it, one
// two-antenna destination at unit distance from both. Provides fading draws
// and the per-frame channel transfer matrices of the two relaying protocols.

#include <array>
#include <cmath>
#include <stdexcept>

#include "relaysim/complex_matrix.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {

// Network geometry. Source and relay sit at unit distance from the
// destination; rtilde is the source-relay separation, so only the
// source-relay links pick up a path-loss gain.
struct Geometry {
  double rtilde = 1.0;
  double pathloss_exponent = 4.0;

  Geometry() = default;
  Geometry(double rtilde_, double pathloss_exponent_)
      : rtilde(rtilde_), pathloss_exponent(pathloss_exponent_) {
    if (!(rtilde > 0.0))
      throw std::invalid_argument("Geometry: rtilde must be positive");
    if (!(pathloss_exponent > 0.0))
      throw std::invalid_argument("Geometry: pathloss exponent must be positive");
  }

  // Amplitude scaling of the source-relay coefficients: rtilde^(-exponent/2),
  // so received power scales as rtilde^(-exponent).
  double source_relay_amplitude() const {
    return std::pow(rtilde, -pathloss_exponent / 2.0);
  }
};

// One message frame: L codewords sent over L+1 slots.
struct FrameSpec {
  int codewords = 1;  // L

  FrameSpec() = default;
  explicit FrameSpec(int l) : codewords(l) {
    if (l < 1) throw std::invalid_argument("FrameSpec: L must be >= 1");
  }
  int slots() const { return codewords + 1; }
};

// One block-fading draw of all eight channel coefficients. Coefficients are
// i.i.d. circularly-symmetric complex Gaussian with unit variance; the
// source-relay pair additionally carries the path-loss amplitude.
struct ChannelRealization {
  std::array<Complex, 2> h_sd;                 // source -> dest antenna j
  std::array<Complex, 2> h_sr;                 // source -> relay antenna i (scaled)
  std::array<std::array<Complex, 2>, 2> h_rd;  // [relay antenna i][dest antenna j]
};

// Draw order is fixed (h_sd, h_sr, h_rd row-major) so a given
// (master seed, trial index) always yields the same realization bitwise.
inline ChannelRealization sample_realization(RandomStream& stream,
                                             const Geometry& geometry) {
  ChannelRealization ch;
  ch.h_sd[0] = stream.next_complex_normal();
  ch.h_sd[1] = stream.next_complex_normal();
  const double gain = geometry.source_relay_amplitude();
  ch.h_sr[0] = gain * stream.next_complex_normal();
  ch.h_sr[1] = gain * stream.next_complex_normal();
  for (auto& row : ch.h_rd)
    for (auto& h : row) h = stream.next_complex_normal();
  return ch;
}

// Relay antenna that receives (and later forwards) message l in 1..L:
// odd-indexed messages land on antenna 1, even-indexed on antenna 2.
inline int relay_antenna_for_message(int message) {
  return (message % 2 == 1) ? 1 : 2;
}

// Channel transfer matrix of the successive-relaying frame, 2(L+1) x 2L.
// Row pair 2i-1, 2i holds destination antennas 1, 2 in slot i. Column 2l-1
// carries the source transmission of message l in slot l; column 2l carries
// the relay retransmission in slot l+1 on the alternating antenna, antenna 1
// when l is odd. Transmit amplitude scaling is left to the consumers so one
// realization serves a whole SNR sweep.
inline ComplexMatrix assemble_successive_matrix(const ChannelRealization& ch,
                                                const FrameSpec& frame) {
  const int l_count = frame.codewords;
  ComplexMatrix h(2 * static_cast<std::size_t>(l_count + 1),
                  2 * static_cast<std::size_t>(l_count));
  for (int l = 1; l <= l_count; ++l) {
    const std::size_t source_col = 2 * static_cast<std::size_t>(l) - 2;
    const std::size_t relay_col = source_col + 1;
    const std::size_t source_row = 2 * static_cast<std::size_t>(l) - 2;  // slot l
    const std::size_t relay_row = source_row + 2;                        // slot l+1
    h(source_row, source_col) = ch.h_sd[0];
    h(source_row + 1, source_col) = ch.h_sd[1];
    const int antenna = relay_antenna_for_message(l);
    h(relay_row, relay_col) = ch.h_rd[antenna - 1][0];
    h(relay_row + 1, relay_col) = ch.h_rd[antenna - 1][1];
  }
  return h;
}

// Channel transfer matrix of the two-slot space-time coding protocol, 4 x 3.
// Slot 1: source broadcast; slot 2: both relay antennas forward
// independently re-encoded copies. Both destination antennas hear each relay
// antenna. No amplitude scaling baked in.
inline ComplexMatrix assemble_stc_matrix(const ChannelRealization& ch) {
  ComplexMatrix h(4, 3);
  h(0, 0) = ch.h_sd[0];
  h(1, 0) = ch.h_sd[1];
  h(2, 1) = ch.h_rd[0][0];
  h(3, 1) = ch.h_rd[0][1];
  h(2, 2) = ch.h_rd[1][0];
  h(3, 2) = ch.h_rd[1][1];
  return h;
}

}  // namespace relaysim
