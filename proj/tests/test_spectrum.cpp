#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ringlab/errors.hpp"
#include "ringlab/kinetics.hpp"
#include "ringlab/linalg.hpp"
#include "ringlab/spectrum.hpp"
#include "support/oracles.hpp"

using ringlab::Matrix;
namespace spectral = ringlab::spectral;

TEST_SUITE_BEGIN("spectrum");

TEST_CASE("2x2 rotation block gives a conjugate pair") {
  Matrix a({{0.0, -1.0}, {1.0, 0.0}});
  auto eigs = spectral::eigenvalues(a);
  REQUIRE(eigs.size() == 2);
  CHECK(eigs[0].real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eigs[0].imag() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(eigs[1].imag() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("companion matrix recovers chosen roots") {
  // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
  Matrix a({{6.0, -11.0, 6.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  auto eigs = spectral::eigenvalues(a);
  REQUIRE(eigs.size() == 3);
  CHECK(eigs[0].real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(eigs[1].real() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(eigs[2].real() == doctest::Approx(3.0).epsilon(1e-10));
  for (const auto& e : eigs) CHECK(std::abs(e.imag()) < 1e-10);
}

TEST_CASE("cycle spectrum matches the closed form") {
  for (int n : {2, 3, 4, 7, 12}) {
    auto k = spectral::build_cycle_kinetic(n, 1.0);
    auto numeric = spectral::eigenvalues(k.matrix());
    auto analytic = spectral::circulant_cycle_spectrum(n, 1.0);
    REQUIRE(numeric.size() == analytic.size());
    for (std::size_t i = 0; i < numeric.size(); ++i)
      CHECK(std::abs(numeric[i] - analytic[i]) < 1e-8);
  }
}

TEST_CASE("analytic cycle spectrum value check") {
  auto s = spectral::circulant_cycle_spectrum(4, 1.0);
  REQUIRE(s.size() == 4);
  // sorted by real part: -2, -1-i, -1+i, 0
  CHECK(std::abs(s[0] - std::complex<double>(-2.0, 0.0)) < 1e-15);
  CHECK(s[1].real() == doctest::Approx(-1.0));
  CHECK(s[1].imag() == doctest::Approx(-1.0));
  CHECK(s[2].imag() == doctest::Approx(1.0));
  CHECK(std::abs(s[3]) < 1e-15);
}

TEST_CASE("random matrices against the charpoly oracle") {
  for (int n : {3, 4, 5, 6}) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      auto k = spectral::random_kinetic(n, 0.6, seed * 977 + n);
      auto numeric = spectral::eigenvalues(k.matrix());
      auto reference = oracles::eigenvalues_charpoly(k.matrix());
      REQUIRE(numeric.size() == reference.size());
      // Conjugate pairs may tie-break differently in the two sorts, so
      // match each eigenvalue to its nearest unused counterpart.
      std::vector<bool> used(reference.size(), false);
      for (const auto& z : numeric) {
        double best = 1e300;
        std::size_t pick = 0;
        for (std::size_t j = 0; j < reference.size(); ++j) {
          if (used[j]) continue;
          const double d = std::abs(z - reference[j]);
          if (d < best) {
            best = d;
            pick = j;
          }
        }
        used[pick] = true;
        CHECK(best < 1e-7);
      }
    }
  }
}

TEST_CASE("max ratio report on the uniform cycle") {
  using std::numbers::pi;
  auto r4 = spectral::max_im_re_ratio(spectral::circulant_cycle_spectrum(4, 1.0));
  CHECK(r4.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r4.bound == doctest::Approx(1.0 / std::tan(pi / 4)).epsilon(1e-12));
  CHECK(r4.bound_satisfied);
  CHECK(!r4.purely_imaginary);

  auto r10 = spectral::max_im_re_ratio(spectral::circulant_cycle_spectrum(10, 1.0));
  CHECK(r10.max_ratio == doctest::Approx(3.0776835371752527).epsilon(1e-12));
  CHECK(r10.bound_satisfied);
}

TEST_CASE("ratio flags a purely imaginary eigenvalue") {
  std::vector<std::complex<double>> eigs = {{0.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  auto r = spectral::max_im_re_ratio(eigs);
  CHECK(r.purely_imaginary);
  CHECK(!r.bound_satisfied);
}

TEST_CASE("all-zero spectrum is degenerate") {
  std::vector<std::complex<double>> eigs = {{0.0, 0.0}, {1e-12, 0.0}};
  CHECK_THROWS_AS(spectral::max_im_re_ratio(eigs),
                  ringlab::DegenerateSpectrumError);
}

TEST_CASE("zero matrix eigenvalues are all zero") {
  Matrix z(3, 3);
  auto eigs = spectral::eigenvalues(z);
  for (const auto& e : eigs) CHECK(std::abs(e) == 0.0);
}

TEST_CASE("larger defective-ish matrix converges") {
  // Jordan-like block with small coupling; stresses the QR deflation.
  Matrix a(5, 5);
  for (int i = 0; i < 5; ++i) a(i, i) = -1.0;
  for (int i = 0; i + 1 < 5; ++i) a(i, i + 1) = 1.0;
  a(4, 0) = 1e-10;
  auto eigs = spectral::eigenvalues(a);
  for (const auto& e : eigs)
    CHECK(std::abs(e - std::complex<double>(-1.0, 0.0)) < 1e-1);
}

TEST_SUITE_END();
