#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "relaysim/channel.hpp"
#include "relaysim/mimo_info.hpp"

using namespace relaysim;

namespace {

ChannelRealization sample(std::uint64_t seed, std::uint64_t trial,
                          const Geometry& g) {
  RandomStream stream(seed, trial);
  return sample_realization(stream, g);
}

}  // namespace

TEST_CASE("snr point validation and dB conversion") {
  CHECK_THROWS_AS(SnrPoint(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SnrPoint(-1.0), std::invalid_argument);
  CHECK(SnrPoint::from_db(10.0).eta == Approx(10.0));
  CHECK(SnrPoint(100.0).eta_db() == Approx(20.0));
}

TEST_CASE("mutual information basics") {
  ComplexMatrix zero(3, 2);
  CHECK(mutual_information(zero, SnrPoint(37.0)) == 0.0);

  ComplexMatrix scalar(1, 1);
  scalar(0, 0) = 1.0;
  CHECK(mutual_information(scalar, SnrPoint(3.0)) == Approx(2.0));  // log2(4)
}

TEST_CASE("mutual information equals the eigenvalue sum on random 2x2") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    const ComplexMatrix h = oracles::random_matrix(2, 2, rng);
    const double eta = 10.0;
    CHECK(mutual_information(h, SnrPoint(eta)) ==
          Approx(oracles::mi_eigenvalue(h, eta)).epsilon(1e-10));
  }
}

TEST_CASE("mutual information is monotone in snr") {
  std::mt19937_64 rng(22);
  const ComplexMatrix h = oracles::random_matrix(4, 3, rng);
  const MutualInformation mi(h);
  double previous = 0.0;
  for (double db = -10.0; db <= 40.0; db += 2.5) {
    const double bits = mi.bits(SnrPoint::from_db(db));
    CHECK(bits >= previous);
    previous = bits;
  }
}

TEST_CASE("determinant identity between both gram orientations") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix h = oracles::random_matrix(6, 4, rng);
    ComplexMatrix ht(4, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 4; ++j) ht(j, i) = std::conj(h(i, j));
    CHECK(mutual_information(h, SnrPoint(2.5)) ==
          Approx(mutual_information(ht, SnrPoint(2.5))).epsilon(1e-10));
  }
}

TEST_CASE("direct outage event") {
  ChannelRealization ch{};
  ch.h_sd = {Complex{0.3, 0.0}, Complex{0.0, 0.458257569495584}};  // |h|^2 sums to 0.3
  CHECK(std::norm(ch.h_sd[0]) + std::norm(ch.h_sd[1]) == Approx(0.3));

  CHECK_FALSE(direct_outage_event(ch, SnrPoint(10.0), 0.0));
  // log2(1 + 10 * 0.3) = 2 bits: outage just above, none just below
  CHECK_FALSE(direct_outage_event(ch, SnrPoint(10.0), 2.0 - 1e-9));
  CHECK(direct_outage_event(ch, SnrPoint(10.0), 2.0 + 1e-9));

  ChannelRealization dead{};
  CHECK(direct_outage_event(dead, SnrPoint(10.0), 0.5));
}

TEST_CASE("successive outage event matches an independent recomputation") {
  const Geometry g(0.1, 4.0);
  const FrameSpec frame(20);
  const SnrPoint snr = SnrPoint::from_db(10.0);
  int outages = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const ChannelRealization ch = sample(606, t, g);
    const ComplexMatrix h = assemble_successive_matrix(ch, frame);
    const double rate = 0.45 * oracles::mi_eigenvalue(h, snr.eta) / frame.slots();
    const bool event = successive_outage_event(ch, frame, snr, rate);
    const bool oracle = oracles::mi_eigenvalue(h, snr.eta) < rate * frame.slots();
    REQUIRE(event == oracle);
    outages += event;
  }
  CHECK(outages == 0);  // rate was set at 45% of each realization's MI

  ChannelRealization dead{};
  CHECK(successive_outage_event(dead, frame, snr, 0.1));
  CHECK_FALSE(successive_outage_event(dead, frame, snr, 0.0));
}

TEST_CASE("stc outage event factors into its two slots") {
  const Geometry g(0.1, 4.0);
  const SnrPoint snr = SnrPoint::from_db(12.0);
  for (std::uint64_t t = 0; t < 100; ++t) {
    const ChannelRealization ch = sample(707, t, g);
    const double b = std::norm(ch.h_sd[0]) + std::norm(ch.h_sd[1]);
    ComplexMatrix h_rd(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) h_rd(i, j) = ch.h_rd[i][j];
    const double slot1 = std::log2(1.0 + snr.eta * b);
    const double slot2 = oracles::mi_eigenvalue(h_rd, snr.eta);
    const double mi = mutual_information(assemble_stc_matrix(ch), snr);
    REQUIRE(mi == Approx(slot1 + slot2).epsilon(1e-10));

    const double rate = 0.3 * mi;  // below mi/2: no outage
    REQUIRE_FALSE(stc_outage_event(ch, snr, rate));
    REQUIRE(stc_outage_event(ch, snr, 0.6 * mi));
  }

  // zero relay block degenerates to the direct event at rate 2R
  ChannelRealization ch = sample(707, 3, g);
  ch.h_rd = {};
  const double rate = 1.25;
  CHECK(stc_outage_event(ch, snr, rate) ==
        direct_outage_event(ch, snr, 2.0 * rate));
  CHECK_FALSE(stc_outage_event(ch, snr, 0.0));
}

TEST_CASE("mimo22 outage event") {
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  CHECK_FALSE(mimo22_outage_event(eye, SnrPoint(1.0), 2.0 - 1e-9));
  CHECK(mimo22_outage_event(eye, SnrPoint(1.0), 2.0 + 1e-9));
  ComplexMatrix zero(2, 2);
  CHECK(mimo22_outage_event(zero, SnrPoint(8.0), 0.5));
  ComplexMatrix wrong(3, 2);
  CHECK_THROWS_AS(mimo22_outage_event(wrong, SnrPoint(1.0), 1.0),
                  std::invalid_argument);
}

TEST_CASE("successive constraint threshold arithmetic") {
  ChannelRealization ch{};
  // a = 3, b = 1, c = 1 -> threshold (3 - 1 - 1) / 1 = 1
  ch.h_sr = {Complex{2.0, 0.0}, Complex{0.0, std::sqrt(3.0)}};
  ch.h_sd = {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  ch.h_rd = {{{Complex{1.0, 0.0}, Complex{0.0, 0.0}},
              {Complex{3.0, 0.0}, Complex{0.0, 0.0}}}};
  CHECK(constraint_threshold_successive(ch) == Approx(1.0));

  // a < b + c forces a negative threshold
  ch.h_sr = {Complex{0.5, 0.0}, Complex{0.5, 0.0}};
  CHECK(constraint_threshold_successive(ch) < 0.0);

  // dead cross links with a live source-relay pair: vacuously satisfiable
  ChannelRealization vacuous{};
  vacuous.h_sr = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
  CHECK(std::isinf(constraint_threshold_successive(vacuous)));
  CHECK(constraint_threshold_successive(vacuous) > 0.0);

  ChannelRealization dead{};
  CHECK_THROWS_AS(constraint_threshold_successive(dead), std::domain_error);
}

TEST_CASE("stc constraint threshold arithmetic") {
  ChannelRealization ch{};
  // p = 4, q = 1, z = 2 -> threshold 2
  ch.h_sr = {Complex{2.0, 0.0}, Complex{0.0, 0.0}};
  ch.h_sd = {Complex{0.0, 1.0}, Complex{0.0, 0.0}};
  ch.h_rd = {{{Complex{1.0, 0.0}, Complex{0.0, 0.0}},
              {Complex{0.0, 1.0}, Complex{0.0, 0.0}}}};
  CHECK(constraint_threshold_stc(ch) == Approx(2.0));

  ch.h_sr = {};
  CHECK(constraint_threshold_stc(ch) == 0.0);

  ChannelRealization dead{};
  CHECK_THROWS_AS(constraint_threshold_stc(dead), std::domain_error);
}

TEST_CASE("exact successive threshold tracks its path-loss approximation") {
  // With the path-loss gain inside the coefficients, the exact threshold is
  // r^-4 a/(bc) - 1/b - 1/c; at small r the correction is negligible, so
  // quantiles of both distributions must agree tightly.
  const Geometry g(0.1, 4.0);
  std::vector<double> exact, approx;
  const int draws = 20000;
  for (std::uint64_t t = 0; t < draws; ++t) {
    const ChannelRealization ch = sample(808, t, g);
    exact.push_back(constraint_threshold_successive(ch));
    const double a = std::min(std::norm(ch.h_sr[0]), std::norm(ch.h_sr[1]));
    const double b = std::norm(ch.h_sd[0]) + std::norm(ch.h_sd[1]);
    const double c =
        std::min(std::norm(ch.h_rd[0][0]) + std::norm(ch.h_rd[0][1]),
                 std::norm(ch.h_rd[1][0]) + std::norm(ch.h_rd[1][1]));
    approx.push_back(a / (b * c));  // path-loss scaling is already inside a
  }
  std::sort(exact.begin(), exact.end());
  std::sort(approx.begin(), approx.end());
  for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const std::size_t idx = static_cast<std::size_t>(q * draws);
    CHECK(exact[idx] == Approx(approx[idx]).epsilon(0.02));
  }
}

TEST_CASE("stc thresholds at closer relay stochastically dominate") {
  std::vector<double> near, far;
  const int draws = 20000;
  for (std::uint64_t t = 0; t < draws; ++t)
    near.push_back(constraint_threshold_stc(sample(909, t, Geometry(0.05, 4.0))));
  for (std::uint64_t t = 0; t < draws; ++t)
    far.push_back(
        constraint_threshold_stc(sample(910, t + draws, Geometry(0.1, 4.0))));
  std::sort(near.begin(), near.end());
  std::sort(far.begin(), far.end());
  for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    const std::size_t idx = static_cast<std::size_t>(q * draws);
    CHECK(near[idx] > far[idx]);
  }
}
