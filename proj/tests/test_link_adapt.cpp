#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "svb/link_adapt.hpp"
#include "test_util.hpp"

using namespace svb;

TEST_CASE("mmse filter known closed forms") {
  const CMat gi = mmse_filter(CMat::identity(2), 1.0);
  CHECK(std::abs(gi(0, 0) - cxd(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(gi(1, 1) - cxd(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(gi(0, 1)) < 1e-12);

  CMat h(2, 2);
  h(0, 0) = 2.0;
  h(1, 1) = 1.0;
  const CMat g = mmse_filter(h, 1.0);
  CHECK(std::abs(g(0, 0) - cxd(2.0 / 5.0, 0.0)) < 1e-12);
  CHECK(std::abs(g(1, 1) - cxd(1.0 / 2.0, 0.0)) < 1e-12);
}

TEST_CASE("mmse filter satisfies its defining linear system") {
  std::mt19937_64 rng(97);
  for (int it = 0; it < 50; ++it) {
    const int n_rx = 2 + static_cast<int>(rng() % 3);
    const int n_tx = 2 + static_cast<int>(rng() % 3);
    const CMat h = testutil::random_channel(rng, n_rx, n_tx);
    const double sigma2 = 0.3 + 0.001 * static_cast<double>(rng() % 1000);
    const CMat g = mmse_filter(h, sigma2);
    REQUIRE(g.rows() == n_tx);
    REQUIRE(g.cols() == n_rx);
    // (H^H H + sigma^2 I) G == H^H, entrywise.
    CMat lhs = h.adjoint() * h;
    for (int i = 0; i < n_tx; ++i) lhs(i, i) += sigma2;
    const CMat back = lhs * g;
    const CMat want = h.adjoint();
    for (int r = 0; r < n_tx; ++r)
      for (int c = 0; c < n_rx; ++c) CHECK(std::abs(back(r, c) - want(r, c)) < 1e-9);
  }
}

TEST_CASE("mmse rates known values") {
  const RateVector id_rates = mmse_rates(CMat::identity(2), 1.0);
  CHECK(id_rates[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id_rates[1] == doctest::Approx(1.0).epsilon(1e-12));

  // Scalar channel: the linear receiver is exact, rate log2(1 + |h|^2).
  CMat h(1, 1);
  h(0, 0) = std::sqrt(3.0);
  CHECK(mmse_rates(h, 1.0)[0] == doctest::Approx(2.0).epsilon(1e-12));

  const RateVector zero = mmse_rates(CMat(2, 2), 1.0);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
}

TEST_CASE("mmse rates equal the per-stream interference-whitened capacity") {
  // The filtered SINR collapses to h_t^H (sigma^2 I + sum_{q != t} h_q h_q^H)^-1 h_t.
  std::mt19937_64 rng(103);
  for (int it = 0; it < 100; ++it) {
    const int n_rx = 2 + static_cast<int>(rng() % 3);
    const int n_tx = 2 + static_cast<int>(rng() % 3);
    const CMat h = testutil::random_channel(rng, n_rx, n_tx);
    const double sigma2 = 0.4 + 0.001 * static_cast<double>(rng() % 2000);
    const RateVector rates = mmse_rates(h, sigma2);
    const oracle::Mat hm = oracle::from(h);
    for (int t = 0; t < n_tx; ++t) {
      oracle::Mat cov(n_rx, std::vector<oracle::cx>(n_rx, 0.0));
      for (int i = 0; i < n_rx; ++i) {
        cov[i][i] = sigma2;
        for (int j = 0; j < n_rx; ++j)
          for (int q = 0; q < n_tx; ++q)
            if (q != t) cov[i][j] += hm[i][q] * std::conj(hm[j][q]);
      }
      const oracle::Mat cov_inv = oracle::inverse(cov);
      oracle::cx sinr = 0.0;
      for (int i = 0; i < n_rx; ++i)
        for (int j = 0; j < n_rx; ++j) sinr += std::conj(hm[i][t]) * cov_inv[i][j] * hm[j][t];
      CHECK(rates[t] == doctest::Approx(std::log2(1.0 + std::real(sinr))).epsilon(1e-9));
    }
  }
}

TEST_CASE("mmse rate at unit noise equals the fully-interfered singleton margin") {
  std::mt19937_64 rng(107);
  for (int it = 0; it < 60; ++it) {
    const CMat h = testutil::random_channel(rng, 3, 4);
    const RateVector zeros(4, 0.0);
    const RateVector rates = mmse_rates(h, 1.0);
    const AntennaSet all = AntennaSet::full(4);
    for (int t = 0; t < 4; ++t)
      CHECK(rates[t] ==
            doctest::Approx(decode_margin(h, AntennaSet::of({t}), all.without(AntennaSet::of({t})),
                                          zeros))
                .epsilon(1e-9));
  }
}

TEST_CASE("mmse rates respect the matched filter bound") {
  std::mt19937_64 rng(109);
  for (int it = 0; it < 60; ++it) {
    const CMat h = testutil::random_channel(rng, 3, 3);
    const double sigma2 = 0.5 + 0.001 * static_cast<double>(rng() % 1500);
    const RateVector rates = mmse_rates(h, sigma2);
    for (int t = 0; t < 3; ++t) {
      double energy = 0.0;
      for (int r = 0; r < 3; ++r) energy += std::norm(h(r, t));
      CHECK(rates[t] <= std::log2(1.0 + energy / sigma2) + 1e-9);
    }
  }
}

TEST_CASE("decoder choice follows the spare-rate rule") {
  const AntennaSet one = AntennaSet::of({0});
  CHECK(choose_decoder({1.5}, {1.0}, one, 0.2) == DecoderChoice::kMmse);
  CHECK(choose_decoder({1.15}, {1.0}, one, 0.2) == DecoderChoice::kSgd);
  CHECK(choose_decoder({1.25}, {1.0}, one, 0.25) == DecoderChoice::kMmse);  // boundary: >=
  CHECK(choose_decoder({5.0, 0.1}, {1.0, 1.0}, AntennaSet::full(2), 0.2) == DecoderChoice::kSgd);
  // Antennas outside the desired set do not matter.
  CHECK(choose_decoder({5.0, 0.1}, {1.0, 1.0}, one, 0.2) == DecoderChoice::kMmse);
  CHECK(choose_decoder({0.0, 0.0}, {9.0, 9.0}, AntennaSet{}, 0.2) == DecoderChoice::kMmse);
}

TEST_CASE("raising an mmse rate never flips the choice away from the linear decoder") {
  std::mt19937_64 rng(113);
  for (int it = 0; it < 200; ++it) {
    RateVector mmse = testutil::random_rates(rng, 3, 0.0, 2.0);
    const RateVector targets = testutil::random_rates(rng, 3, 0.0, 2.0);
    const AntennaSet desired{static_cast<std::uint32_t>(1 + rng() % 7)};
    if (choose_decoder(mmse, targets, desired, 0.2) != DecoderChoice::kMmse) continue;
    mmse[static_cast<size_t>(rng() % 3)] += 0.7;
    CHECK(choose_decoder(mmse, targets, desired, 0.2) == DecoderChoice::kMmse);
  }
}

TEST_CASE("linear-decoder clearance implies staged decoding succeeds") {
  std::mt19937_64 rng(127);
  DecoderConfig cfg;
  int accepted = 0;
  for (int it = 0; it < 400; ++it) {
    const CMat h = testutil::random_channel(rng, 4, 4, 1.6);
    const RateVector mmse = mmse_rates(h, 1.0);
    RateVector targets = mmse;
    // Targets at or below the linear rates, so the zero-threshold rule accepts.
    for (double& t : targets) t = std::max(0.0, t - 0.001 * static_cast<double>(rng() % 300));
    if (choose_decoder(mmse, targets, AntennaSet::full(4), 0.0) != DecoderChoice::kMmse) continue;
    ++accepted;
    CHECK_FALSE(greedy_partition(h, targets, cfg, AntennaSet::full(4)).outage);
  }
  CHECK(accepted == 400);
}

TEST_CASE("uep backoff arithmetic") {
  CHECK(uep_backoff(2.0, 0.15, 2) == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(uep_backoff(0.1, 0.15, 6) == 0.0);
  CHECK(uep_backoff(1.2345, 0.0, 6) == doctest::Approx(1.2345).epsilon(1e-15));
  CHECK_THROWS_AS(uep_backoff(-1.0, 0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(uep_backoff(1.0, -0.1, 2), std::invalid_argument);
}

TEST_CASE("mcs selection reproduces the threshold examples") {
  // 0.8 bits/use, no margin: QPSK band, wanted 0.4 -> code rate 1/3.
  const McsEntry a = select_mcs(0.8, 0.0);
  CHECK(a.modulation == Modulation::kQpsk);
  CHECK(a.code_rate == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(a.spectral_rate == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(a.usable);

  // 1.5 bits/use: 16QAM band, wanted 0.375 -> code rate 1/3.
  const McsEntry b = select_mcs(1.5, 0.0);
  CHECK(b.modulation == Modulation::k16Qam);
  CHECK(b.code_rate == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(b.spectral_rate == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  // 0.3 bits/use: wanted 0.15 sits below the slowest code, unusable.
  const McsEntry c = select_mcs(0.3, 0.0);
  CHECK(c.modulation == Modulation::kQpsk);
  CHECK_FALSE(c.usable);
  CHECK(c.code_rate == 0.0);
  CHECK(c.spectral_rate == 0.0);
}

TEST_CASE("mcs selection covers every band and the fallback gap") {
  const McsEntry high = select_mcs(4.1, 0.0);  // 64QAM, wanted 0.6833 -> 2/3
  CHECK(high.modulation == Modulation::k64Qam);
  CHECK(high.code_rate == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(high.spectral_rate == doctest::Approx(4.0).epsilon(1e-15));

  // With margin 0.15: QPSK sees 1.1 (out of band), 16QAM sees 0.8 (out of
  // band), 64QAM sees 0.5 (out of band) -> robust fallback to QPSK at 1.1.
  const McsEntry gap = select_mcs(1.4, 0.15);
  CHECK(gap.modulation == Modulation::kQpsk);
  CHECK(gap.code_rate == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gap.spectral_rate == doctest::Approx(1.0).epsilon(1e-15));

  // A positive margin shifts band membership by margin * bits.
  const McsEntry shifted = select_mcs(2.2, 0.15);
  CHECK(shifted.modulation == Modulation::k16Qam);  // 2.2 - 0.6 = 1.6 in (1, 2]
  CHECK(shifted.code_rate == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("mcs quantization never exceeds the backed-off rate") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> rate_u(0.0, 8.0);
  std::uniform_real_distribution<double> margin_u(0.0, 0.3);
  for (int it = 0; it < 2000; ++it) {
    const double rate = rate_u(rng);
    const double margin = margin_u(rng);
    const McsEntry e = select_mcs(rate, margin);
    const double backed_off = uep_backoff(rate, margin, bits_per_symbol(e.modulation));
    CHECK(e.spectral_rate <= backed_off + 1e-12);
    if (e.usable) {
      CHECK(e.spectral_rate == doctest::Approx(e.code_rate * bits_per_symbol(e.modulation))
                                   .epsilon(1e-15));
      bool known = false;
      for (double c : kCodeRates) known = known || c == e.code_rate;
      CHECK(known);
    } else {
      CHECK(e.spectral_rate == 0.0);
    }
  }
}

TEST_CASE("uep profile validation") {
  UepProfile ok;
  ok.margin = {0.15, 0.13, 0.10};
  ok.target_bler = {0.001, 0.01, 0.1};
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.layers() == 3);

  UepProfile bad = ok;
  bad.margin = {0.10, 0.13, 0.15};  // base layer must be protected most
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.target_bler = {0.001, 1.0, 0.1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.target_bler = {0.001, 0.01};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.margin.clear();
  bad.target_bler.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
