#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ssr/constants.hpp"
#include "ssr/physics.hpp"

using namespace ssr;
using Catch::Approx;

namespace {

PhysicalParams fig1_params(double density_e12) {
  PhysicalParams p;
  p.species = rubidium87();
  p.temperature = 400e-9;
  p.mean_density = density_e12 * constants::per_cm3_e12;
  p.dls_per_intensity = -2.2;
  p.total_ls_per_intensity = -31400.0;
  p.mean_intensity = 5.399;
  p.magnetic_field = 0.095;
  p.dephasing_correction = 1.0;
  p.exchange_correction = 1.0;
  return p;
}

}  // namespace

TEST_CASE("density shift coefficient", "[physics]") {
  const AtomSpecies rb = rubidium87();

  SECTION("matches the predicted -0.48 Hz per 1e12 cm^-3 within 1%") {
    const double per_e12 = density_shift_coefficient(rb) * constants::per_cm3_e12;
    REQUIRE(per_e12 == Approx(-0.48).epsilon(0.01));
  }

  SECTION("vanishes for equal scattering lengths") {
    AtomSpecies s = rb;
    s.a_dd = s.a_uu;
    REQUIRE(density_shift_coefficient(s) == 0.0);
  }

  SECTION("linear in the scattering-length difference") {
    AtomSpecies s = rb;
    s.a_dd = s.a_uu + 2.0 * (rb.a_dd - rb.a_uu);
    REQUIRE(density_shift_coefficient(s) ==
            Approx(2.0 * density_shift_coefficient(rb)).epsilon(1e-12));
  }

  SECTION("antisymmetric under swapping a_uu and a_dd") {
    AtomSpecies s = rb;
    std::swap(s.a_uu, s.a_dd);
    REQUIRE(density_shift_coefficient(s) ==
            Approx(-density_shift_coefficient(rb)).epsilon(1e-12));
  }
}

TEST_CASE("dephasing rate", "[physics]") {
  SECTION("vanishes as T -> 0 and n -> 0") {
    PhysicalParams p = fig1_params(0.0);
    p.temperature = 1e-30;
    REQUIRE(std::abs(dephasing_rate(p)) < 1e-20);
  }

  SECTION("cancellation density zeroes Delta0") {
    // Solve Delta0 = 0 analytically: n* = 2 k_B T (dls/total) / (hbar gamma_ang).
    PhysicalParams p = fig1_params(1.0);
    const double gamma_ang = constants::two_pi * density_shift_coefficient(p.species);
    const double n_star = 2.0 * constants::k_boltzmann * p.temperature *
                          (p.dls_per_intensity / p.total_ls_per_intensity) /
                          (constants::hbar * gamma_ang);
    p.mean_density = n_star;
    REQUIRE(std::abs(dephasing_rate(p)) < 1e-10 * std::abs(dephasing_rate(fig1_params(1.0))));
  }

  SECTION("affine in density and in temperature (three-point collinearity)") {
    auto at_n = [&](double n) { return dephasing_rate(fig1_params(n)); };
    REQUIRE(at_n(0.5) == Approx(0.5 * (at_n(0.2) + at_n(0.8))).epsilon(1e-12));
    auto at_t = [&](double t) {
      PhysicalParams p = fig1_params(0.5);
      p.temperature = t;
      return dephasing_rate(p);
    };
    REQUIRE(at_t(300e-9) == Approx(0.5 * (at_t(200e-9) + at_t(400e-9))).epsilon(1e-12));
  }

  SECTION("undefined light-shift ratio is rejected") {
    PhysicalParams p = fig1_params(0.5);
    p.total_ls_per_intensity = 0.0;
    REQUIRE_THROWS_AS(dephasing_rate(p), physics_error);
  }

  SECTION("condition ratio rises from 4.3 to 23 over the density scan") {
    double previous = 0.0;
    for (double n : {0.18, 0.36, 0.65, 1.38}) {
      const PhysicalParams p = fig1_params(n);
      const double ratio = exchange_rate(p) / dephasing_rate(p);
      REQUIRE(ratio > previous);
      previous = ratio;
    }
    REQUIRE(exchange_rate(fig1_params(0.18)) / dephasing_rate(fig1_params(0.18)) ==
            Approx(4.3).margin(0.15));
    REQUIRE(exchange_rate(fig1_params(1.38)) / dephasing_rate(fig1_params(1.38)) ==
            Approx(23.0).margin(0.5));
  }
}

TEST_CASE("exchange rate", "[physics]") {
  SECTION("zero density gives zero") {
    REQUIRE(exchange_rate(fig1_params(0.0)) == 0.0);
  }

  SECTION("exactly linear in density") {
    REQUIRE(exchange_rate(fig1_params(1.0)) ==
            Approx(2.0 * exchange_rate(fig1_params(0.5))).epsilon(1e-14));
  }

  SECTION("optimized conditions give the 20.8 and 9.6 ratios") {
    PhysicalParams p = fig1_params(0.3);
    p.temperature = 100e-9;
    REQUIRE(exchange_rate(p) / dephasing_rate(p) == Approx(20.8).margin(0.3));
    REQUIRE(exchange_rate(p) / (constants::pi * collision_rate(p)) == Approx(9.6).margin(0.01));
  }
}

TEST_CASE("collision rate calibration", "[physics]") {
  SECTION("zero density gives zero") {
    REQUIRE(collision_rate(fig1_params(0.0)) == 0.0);
  }

  SECTION("anchor self-consistency: ratio (ii) = 4.8 at 400 nK within 1e-6") {
    const PhysicalParams p = fig1_params(0.65);
    const double ratio = exchange_rate(p) / (constants::pi * collision_rate(p));
    REQUIRE(ratio == Approx(4.8).epsilon(1e-6));
  }

  SECTION("anchor holds under the default correction factors too") {
    PhysicalParams p = fig1_params(0.65);
    p.dephasing_correction = 1.6;
    p.exchange_correction = 0.6;
    const double ratio = exchange_rate(p) / (constants::pi * collision_rate(p));
    REQUIRE(ratio == Approx(4.8).epsilon(1e-6));
  }

  SECTION("quadrupling T halves the condition ratio exactly") {
    PhysicalParams p = fig1_params(0.5);
    const double r1 = exchange_rate(p) / (constants::pi * collision_rate(p));
    p.temperature *= 4.0;
    const double r4 = exchange_rate(p) / (constants::pi * collision_rate(p));
    REQUIRE(r4 == Approx(0.5 * r1).epsilon(1e-12));
  }

  SECTION("ratio of exchange to collision rate is density independent") {
    const double ref = exchange_rate(fig1_params(0.1)) / collision_rate(fig1_params(0.1));
    for (double n : {0.2, 0.5, 1.0, 2.0, 5.0}) {
      const PhysicalParams p = fig1_params(n);
      REQUIRE(exchange_rate(p) / collision_rate(p) == Approx(ref).epsilon(1e-12));
    }
  }

  SECTION("explicit calibration overrides the anchor") {
    PhysicalParams p = fig1_params(0.5);
    const double base = collision_rate(p);
    p.collision_calibration = 1.0;
    REQUIRE(collision_rate(p) != Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("ssr conditions", "[physics]") {
  SECTION("direct inequality") {
    const ConditionReport r = ssr_conditions({1.0, 10.0, 0.5, 0.0});
    REQUIRE(r.dephasing_ok);
    REQUIRE(r.mixing_ok);
    REQUIRE(r.exchange_to_dephasing == Approx(10.0));
    REQUIRE(r.exchange_to_collision == Approx(10.0 / (constants::pi * 0.5)));
  }

  SECTION("large dephasing violates condition (i)") {
    const ConditionReport r = ssr_conditions({10.0, 1.0, 0.1, 0.0});
    REQUIRE_FALSE(r.dephasing_ok);
  }

  SECTION("zero denominators report infinite ratios with conditions met") {
    const ConditionReport r = ssr_conditions({0.0, 1.0, 0.0, 0.0});
    REQUIRE(std::isinf(r.exchange_to_dephasing));
    REQUIRE(std::isinf(r.exchange_to_collision));
    REQUIRE(r.dephasing_ok);
    REQUIRE(r.mixing_ok);
  }

  SECTION("booleans are exactly the comparisons on the returned ratios") {
    for (double d : {0.0, 0.5, 2.0})
      for (double w : {0.0, 1.0, 3.0})
        for (double g : {0.0, 0.2, 2.0}) {
          const ConditionReport r = ssr_conditions({d, w, g, 0.0});
          REQUIRE(r.dephasing_ok == (r.exchange_to_dephasing > 1.0));
          REQUIRE(r.mixing_ok == (r.exchange_to_collision > 1.0));
        }
  }

  SECTION("fig1 lowest density reproduces the quoted ratio pair") {
    const ConditionReport r = ssr_conditions(make_rates(fig1_params(0.18)));
    REQUIRE(r.exchange_to_dephasing == Approx(4.3).margin(0.15));
    REQUIRE(r.exchange_to_collision == Approx(4.8).epsilon(1e-6));
  }
}

TEST_CASE("zeeman shift", "[physics]") {
  const AtomSpecies rb = rubidium87();

  SECTION("zero field gives zero") { REQUIRE(zeeman_shift(0.0, rb) == 0.0); }

  SECTION("95 mG gives 5.2(1) Hz") {
    REQUIRE(zeeman_shift(0.095, rb) == Approx(5.2).margin(0.1));
  }

  SECTION("quadratic: doubling B quadruples the shift") {
    for (double b : {0.01, 0.095, 0.5, 2.0})
      REQUIRE(zeeman_shift(2.0 * b, rb) == Approx(4.0 * zeeman_shift(b, rb)).epsilon(1e-12));
  }
}

TEST_CASE("mean shift", "[physics]") {
  SECTION("all contributions zero") {
    PhysicalParams p = fig1_params(0.0);
    p.mean_intensity = 0.0;
    p.magnetic_field = 0.0;
    REQUIRE(mean_shift(p) == 0.0);
  }

  SECTION("fig1 conditions give about -7 Hz") {
    REQUIRE(mean_shift(fig1_params(0.65)) == Approx(-7.0).margin(0.1));
  }

  SECTION("density alone gives the -0.48 Hz coefficient") {
    PhysicalParams p = fig1_params(1.0);
    p.mean_intensity = 0.0;
    p.magnetic_field = 0.0;
    REQUIRE(mean_shift(p) == Approx(-0.48).epsilon(0.01));
  }
}

TEST_CASE("parameter validation", "[physics]") {
  PhysicalParams p = fig1_params(0.5);
  SECTION("valid set passes") { REQUIRE_NOTHROW(p.validate()); }
  SECTION("nonpositive temperature rejected") {
    p.temperature = 0.0;
    REQUIRE_THROWS_AS(p.validate(), input_error);
  }
  SECTION("ratio invariant enforced") {
    p.total_ls_per_intensity = 0.0;
    REQUIRE_THROWS_AS(p.validate(), input_error);
  }
}
