#include <doctest.h>

#include <cmath>

#include <qrm/order2.hpp>
#include <qrm/rwa.hpp>
#include <qrm/states.hpp>

using qrm::ModelParams;
using qrm::Parity;
using qrm::RwaDoublet;

TEST_CASE("resonant vacuum doublet splits symmetrically by twice the coupling") {
  const RwaDoublet d = qrm::rwa_doublet(ModelParams{1.0, 0.1}, 0);
  CHECK(d.E_lower == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(d.E_upper == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(d.R == doctest::Approx(0.2).epsilon(1e-14));
  const double r2 = 1.0 / std::sqrt(2.0);
  CHECK(d.amp_c_lower == doctest::Approx(r2));
  CHECK(d.amp_d_lower == doctest::Approx(-r2));
  CHECK(d.amp_c_upper == doctest::Approx(r2));
  CHECK(d.amp_d_upper == doctest::Approx(r2));
}

TEST_CASE("detuned vacuum doublet matches the closed-form Rabi frequency") {
  const RwaDoublet d = qrm::rwa_doublet(ModelParams{1.1, 0.1}, 0);
  CHECK(d.R == doctest::Approx(std::sqrt(0.05)).epsilon(1e-14));
  CHECK(d.E_lower == doctest::Approx(0.38819660112501053).epsilon(1e-14));
  CHECK(d.E_upper == doctest::Approx(0.6118033988749895).epsilon(1e-14));
  CHECK(d.E_upper - d.E_lower == doctest::Approx(d.R).epsilon(1e-14));
}

TEST_CASE("uncoupled doublets collapse onto bare states") {
  for (const double delta : {1.4, 0.6}) {
    const RwaDoublet d = qrm::rwa_doublet(ModelParams{delta, 0.0}, 2);
    const double det = delta - 1.0;
    CHECK(d.E_lower == doctest::Approx(2.5 - std::abs(det) / 2).epsilon(1e-14));
    CHECK(d.E_upper == doctest::Approx(2.5 + std::abs(det) / 2).epsilon(1e-14));
    // each branch is a single bare state under the nonnegative-|e,n> convention
    CHECK(std::abs(d.amp_c_lower * d.amp_d_lower) == 0.0);
    CHECK(std::abs(d.amp_c_upper * d.amp_d_upper) == 0.0);
  }
}

TEST_CASE("doublet amplitudes form an orthonormal pair with a nonnegative upper component") {
  for (const double delta : {0.2, 1.0, 1.7}) {
    for (int n : {0, 1, 5}) {
      const RwaDoublet d = qrm::rwa_doublet(ModelParams{delta, 0.35}, n);
      CHECK(d.amp_c_lower >= 0.0);
      CHECK(d.amp_c_upper >= 0.0);
      CHECK(d.amp_c_lower * d.amp_c_lower + d.amp_d_lower * d.amp_d_lower ==
            doctest::Approx(1.0).epsilon(1e-14));
      CHECK(d.amp_c_upper * d.amp_c_upper + d.amp_d_upper * d.amp_d_upper ==
            doctest::Approx(1.0).epsilon(1e-14));
      CHECK(d.amp_c_lower * d.amp_c_upper + d.amp_d_lower * d.amp_d_upper ==
            doctest::Approx(0.0).epsilon(1e-14));
      CHECK(d.E_upper - d.E_lower == doctest::Approx(d.R).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(qrm::rwa_doublet(ModelParams{1.0, 0.1}, -1), std::invalid_argument);
}

TEST_CASE("rotating-wave ground level is the bare ground state") {
  const auto [energy, state] = qrm::rwa_ground(ModelParams{1.0, 0.3});
  CHECK(energy == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(qrm::parity_expectation(state) == doctest::Approx(1.0));
  CHECK(state.lower[0] == doctest::Approx(1.0));
  CHECK(state.upper.norm() == 0.0);

  CHECK(qrm::rwa_ground(ModelParams{0.1, 0.3}).first == doctest::Approx(-0.05).epsilon(1e-15));
}

TEST_CASE("doublet states alternate excitation parity with the manifold index") {
  const ModelParams p{0.8, 0.25};
  for (int n : {0, 1, 2, 3}) {
    const RwaDoublet d = qrm::rwa_doublet(p, n);
    const auto [lower, upper] = qrm::rwa_doublet_states(d, 8);
    const double expected = (n % 2 == 0) ? -1.0 : +1.0;  // (-1)^(n+1)
    CHECK(qrm::parity_expectation(lower) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(qrm::parity_expectation(upper) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(qrm::overlap(lower, upper) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("resonant doublets follow the square-root ladder exactly") {
  const double g = 0.45;
  for (int n : {0, 1, 4, 9}) {
    const RwaDoublet d = qrm::rwa_doublet(ModelParams{1.0, g}, n);
    CHECK(d.E_lower == doctest::Approx(n + 0.5 - g * std::sqrt(n + 1.0)).epsilon(1e-14));
    CHECK(d.E_upper == doctest::Approx(n + 0.5 + g * std::sqrt(n + 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("first-order truncated levels reproduce the rotating-wave doublets") {
  for (const double delta : {0.3, 1.0, 1.9}) {
    for (const double g : {0.05, 0.3}) {
      const ModelParams p{delta, g};
      for (int m : {0, 2, 7}) {
        const RwaDoublet d = qrm::rwa_doublet(p, m);
        CHECK(qrm::first_order_level(m, -1, p) == doctest::Approx(d.E_lower).epsilon(1e-13));
        CHECK(qrm::first_order_level(m, +1, p) == doctest::Approx(d.E_upper).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("weak coupling pulls doublets onto the zero-order staircase") {
  const ModelParams p{0.7, 1e-4};
  for (int n : {0, 1, 2}) {
    const RwaDoublet d = qrm::rwa_doublet(p, n);
    // the doublet built on photon number n carries parity (-1)^(n+1); its two
    // branches approach the two staggered diagonal entries of that sector
    const Parity parity = (n % 2 == 0) ? Parity::odd : Parity::even;
    const double z_low = std::min(qrm::zero_order_level(n, parity, p),
                                  qrm::zero_order_level(n + 1, parity, p));
    const double z_high = std::max(qrm::zero_order_level(n, parity, p),
                                   qrm::zero_order_level(n + 1, parity, p));
    CHECK(std::abs(d.E_lower - z_low) < 1e-6);  // O(g^2) residual at g = 1e-4
    CHECK(std::abs(d.E_upper - z_high) < 1e-6);
  }
}
