#include <cmath>
#include <initializer_list>
#include <tuple>

#include <doctest.h>

#include "triom/constants.hpp"
#include "triom/modes.hpp"

using namespace triom;

TEST_CASE("Hermite polynomials") {
  CHECK(hermite(0, 0.7) == 1.0);
  CHECK(hermite(1, 0.7) == 1.4);
  CHECK(hermite(10, 0.3) == doctest::Approx(-6173.8524877824).epsilon(1e-13));
  CHECK(hermite(7, -1.25) == doctest::Approx(-971.2890625).epsilon(1e-13));
  CHECK(hermite(15, 2.0) == doctest::Approx(708980224.0).epsilon(1e-13));
}

namespace {

const CavityGeometry test_geometry{1e-6, 2e-6, 1e6};

}  // namespace

TEST_CASE("fundamental mode envelope at the atom location") {
  // (0,0,1) mode, atom at axial x0 = eps*pi/k0 and transverse radius
  // mu * w(x0): envelope reduces to 2 exp(-mu^2) / (w(x0) sqrt(pi L)).
  const double mu = 0.5, eps = 0.2;
  const double x0 = eps * triom::constants::pi / test_geometry.wavenumber;
  const double xr = test_geometry.rayleigh_range();
  const double w_x0 = test_geometry.waist * std::sqrt(1.0 + (x0 / xr) * (x0 / xr));

  const ModeAmplitude amp = mode_profile({0, 0, 1}, x0, mu * w_x0, 0.0, test_geometry);
  CHECK(amp.envelope == doctest::Approx(419191688.18312504).epsilon(1e-12));

  // same transverse radius rotated into z: envelope must not change
  const ModeAmplitude rotated = mode_profile({0, 0, 1}, x0, 0.0, mu * w_x0, test_geometry);
  CHECK(rotated.envelope == doctest::Approx(amp.envelope).epsilon(1e-14));
  CHECK(rotated.phase == doctest::Approx(amp.phase).epsilon(1e-14));
}

TEST_CASE("coupling rate against the closed axial form") {
  for (const auto& [mu, eps, chi] :
       {std::tuple{0.5, 0.2, -385697953.8070629},
        std::tuple{1.0, 0.3, -105617681.54904208}}) {
    const double closed = axial_coupling_001(mu, eps, test_geometry, 1.0);
    CHECK(closed == doctest::Approx(chi).epsilon(1e-12));

    const double x0 = eps * triom::constants::pi / test_geometry.wavenumber;
    const double xr = test_geometry.rayleigh_range();
    const double w_x0 = test_geometry.waist * std::sqrt(1.0 + (x0 / xr) * (x0 / xr));
    const double generic =
        coupling_rate({0, 0, 1}, x0, mu * w_x0, 0.0, test_geometry, 1.0);
    CHECK(generic == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("nonlinearity f_j frozen values") {
  struct Case {
    int j;
    long nb;
    double eta;
    double expected;
  };
  const Case cases[] = {
      {0, 5, 0.3, 0.5892986195425001},
      {1, 10, 0.08, 0.9683058922122576},
      {2, 10, 0.08, 0.48940987167813227},
      {3, 10, 0.08, 0.16401531637917133},
      {1, 50, 0.2, 0.2790242498959944},
      {2, 100, 0.5, 0.011318193534553277},
      {4, 17, 0.12, 0.03966543432336783},
      {5, 100, 0.5, -8.325499545348872e-05},
      {1, 170, 0.05, 0.8019506006843016},
      {3, 33, 0.9, 0.001846621391961333},
  };
  for (const Case& c : cases)
    CHECK(nonlinearity_f(c.j, c.nb, c.eta) ==
          doctest::Approx(c.expected).scale(0.0).epsilon(2e-15));
}

TEST_CASE("nonlinearity at eta = 0 collapses to 1/j! exactly") {
  const double inverse_factorial[] = {1.0,
                                      1.0,
                                      0.5,
                                      0.16666666666666666,
                                      0.041666666666666664,
                                      0.008333333333333333};
  for (int j = 0; j <= 5; ++j)
    for (long nb : {0L, 1L, 7L, 64L, 100L, 171L, 400L})
      CHECK(nonlinearity_f(j, nb, 0.0) == inverse_factorial[j]);
}

TEST_CASE("nonlinearity f_1 second-order truncation bound") {
  for (double eta : {0.05, 0.1, 0.2}) {
    for (long nb = 0; nb <= 50; ++nb) {
      const double f1 = nonlinearity_f(1, nb, eta);
      const double truncated = 1.0 - 0.5 * eta * eta * static_cast<double>(nb);
      const double bound = std::pow(eta, 4) * static_cast<double>(nb) *
                           static_cast<double>(nb - 1) / 6.0;
      CHECK(std::abs(f1 - truncated) <= bound + 1e-16);
    }
  }
}

TEST_CASE("nonlinearity vs associated Laguerre recurrence") {
  CHECK(laguerre_recurrence(10, 1, 0.08 * 0.08) ==
        doctest::Approx(10.651364814334833).epsilon(1e-12));
  CHECK(laguerre_recurrence(33, 3, 0.9 * 0.9) ==
        doctest::Approx(79.109260431623507).epsilon(1e-12));

  // f_j(n_b, eta) * (n_b+j)!/n_b! == L^j_{n_b}(eta^2)
  for (int j = 0; j <= 5; ++j) {
    for (long nb : {0L, 3L, 10L, 42L, 100L, 170L}) {
      for (double eta : {0.05, 0.3, 0.9}) {
        double rising = 1.0;
        for (int m = 1; m <= j; ++m) rising *= static_cast<double>(nb + m);
        const double via_f = nonlinearity_f(j, nb, eta) * rising;
        const double via_l = laguerre_recurrence(static_cast<int>(nb), j, eta * eta);
        CHECK(via_f == doctest::Approx(via_l).epsilon(1e-10));
      }
    }
  }
}
