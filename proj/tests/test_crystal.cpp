#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "biphoton/crystal.hpp"
#include "biphoton/math.hpp"

using namespace biphoton;

namespace {
const double deg = 180.0 / pi;
}

TEST_CASE("bundled table parses and lists all four crystals in stable order") {
    const auto names = list_crystals();
    REQUIRE(names.size() >= 4);
    CHECK(names[0] == "LiIO3");
    CHECK(names[1] == "BBO");
    CHECK(names[2] == "KDP");
    CHECK(names[3] == "LBO");
    CHECK(list_crystals() == names);
}

TEST_CASE("index evaluation is deterministic and physical over the valid range") {
    for (const auto& m : bundled_models()) {
        const double lo = m.ordinary.lo_um * 1e3;
        const double hi = m.ordinary.hi_um * 1e3;
        for (double lam : {lo, 0.5 * (lo + hi), hi}) {
            const double n1 = index_ordinary(m, lam);
            const double n2 = index_ordinary(m, lam);
            CHECK(n1 == n2);  // bit-identical
            CHECK(n1 > 1.0);
            CHECK(n1 < 4.0);
            CHECK(index_extraordinary(m, lam) > 1.0);
            CHECK(index_extraordinary(m, lam) < 4.0);
        }
    }
}

TEST_CASE("out-of-range wavelength raises a domain error naming the interval") {
    const auto& li = find_model("LiIO3");
    CHECK_THROWS_WITH_AS(index_ordinary(li, 100.0),
                         doctest::Contains("valid range"), std::domain_error);
    CHECK_NOTHROW(index_ordinary(li, 300.0));   // boundary is inclusive
    CHECK_NOTHROW(index_ordinary(li, 5000.0));
}

TEST_CASE("angle-dependent index hits both principal values") {
    const auto& li = find_model("LiIO3");
    CHECK(index_extraordinary_angle(li, 650.0, 0.0) ==
          doctest::Approx(index_ordinary(li, 650.0)).epsilon(1e-14));
    CHECK(index_extraordinary_angle(li, 650.0, pi / 2) ==
          doctest::Approx(index_extraordinary(li, 650.0)).epsilon(1e-14));
    CHECK_THROWS_AS(index_extraordinary_angle(li, 650.0, -0.1), std::domain_error);
}

TEST_CASE("angle-dependent index is monotone between its endpoint values") {
    for (const auto& m : bundled_models()) {
        const double lam = 0.5 * (m.ordinary.lo_um + m.ordinary.hi_um) * 1e3;
        double prev = index_extraordinary_angle(m, lam, 0.0);
        const bool decreasing = index_extraordinary(m, lam) < index_ordinary(m, lam);
        for (int i = 1; i <= 64; ++i) {
            const double cur = index_extraordinary_angle(m, lam, i * pi / 2 / 64);
            if (decreasing)
                CHECK(cur <= prev + 1e-15);
            else
                CHECK(cur >= prev - 1e-15);
            prev = cur;
        }
    }
}

TEST_CASE("phase matching solution satisfies its defining identity") {
    const auto li = solve_phase_matching(find_model("LiIO3"), 325.0);
    const double n_at_phi0 = index_extraordinary_angle(li.model, 325.0, li.phi0_rad);
    CHECK(std::abs(n_at_phi0 - li.n_o_signal) / li.n_o_signal < 1e-10);
    CHECK(li.n_o_signal == doctest::Approx(index_ordinary(li.model, 650.0)).epsilon(1e-15));
}

TEST_CASE("analytic derivative matches central finite difference for all crystals") {
    const double h = 1e-6;
    for (const auto& [name, lam] :
         {std::pair{"LiIO3", 325.0}, {"BBO", 325.0}, {"KDP", 325.0}, {"LBO", 488.0}}) {
        const auto o = solve_phase_matching(find_model(name), lam);
        const double fd = (index_extraordinary_angle(o.model, lam, o.phi0_rad + h) -
                           index_extraordinary_angle(o.model, lam, o.phi0_rad - h)) /
                          (2.0 * h);
        CHECK(std::abs(o.np_prime - fd) / std::abs(fd) < 1e-6);
    }
}

TEST_CASE("anisotropy constants reproduce the reference table within 0.005") {
    const struct {
        const char* name;
        double lambda_nm, np_ref;
    } rows[] = {{"LiIO3", 325.0, -0.1409},
                {"BBO", 325.0, -0.1175},
                {"KDP", 325.0, -0.0395},
                {"LBO", 488.0, -0.0270}};
    for (const auto& r : rows) {
        const auto o = solve_phase_matching(find_model(r.name), r.lambda_nm);
        CHECK(std::abs(o.np_prime - r.np_ref) < 0.005);
    }
    const auto bbo = solve_phase_matching(find_model("BBO"), 325.0);
    CHECK(std::abs(bbo.phi0_rad * deg - 36.44) < 0.5);
    // LiIO3 angle from the optical axis, consistent with the quoted ~60 deg
    const auto li = solve_phase_matching(find_model("LiIO3"), 325.0);
    CHECK(li.phi0_rad * deg == doctest::Approx(60.9).epsilon(0.02));
    CHECK(li.np_prime == doctest::Approx(-0.1436).epsilon(1e-3));
}

TEST_CASE("re-solving from the found solution is idempotent") {
    const auto a = solve_phase_matching(find_model("BBO"), 325.0);
    const auto b = solve_phase_matching(a.model, a.lambda_p_nm);
    CHECK(a.phi0_rad == b.phi0_rad);
    CHECK(a.np_prime == b.np_prime);
}

TEST_CASE("isotropic model has no phase matching") {
    // n_e == n_o: the angular index surface is a sphere, no sign change
    const auto models = parse_dispersion_data(
        "iso o 0.2 2.0 2.25 0.01 0.01 0 100 0 0\n"
        "iso e 0.2 2.0 2.25 0.01 0.01 0 100 0 0\n");
    CHECK_THROWS_WITH_AS(solve_phase_matching(models[0], 400.0),
                         doctest::Contains("no collinear degenerate"),
                         std::runtime_error);
}

TEST_CASE("LBO has no collinear degenerate solution at 325 nm") {
    CHECK_THROWS_AS(solve_phase_matching(find_model("LBO"), 325.0), std::runtime_error);
}

TEST_CASE("parser rejects malformed lines with their line number") {
    CHECK_THROWS_WITH_AS(parse_dispersion_data("X o 0.2 2.0 1 2 3\n"),
                         doctest::Contains("line 1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse_dispersion_data("# c\nX q 0.2 2.0 1 2 3 4 5 6 7\n"),
        doctest::Contains("line 2"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse_dispersion_data("X o 0.2 2.0 1 2 3 4 5 6 7 8\n"),
        doctest::Contains("trailing"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_dispersion_data("X o 0.2 2.0 1 2 3 4 5 6 7\n"),
                         doctest::Contains("missing an o or e record"),
                         std::runtime_error);
    CHECK_THROWS_AS(find_model("NoSuchCrystal"), std::runtime_error);
}

TEST_CASE("source comments survive parsing") {
    const auto models = parse_dispersion_data(
        "X o 0.2 2.0 2.25 0.01 0.01 0 100 0 0 # some handbook\n"
        "X e 0.2 2.0 2.10 0.01 0.01 0 100 0 0 # some handbook\n");
    CHECK(models[0].source == "some handbook");
}
