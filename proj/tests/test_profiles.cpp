#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>

#include "dynspec/profiles.hpp"

using namespace dynspec;

TEST_CASE("eval anchors") {
  const auto c = AlphaProfile::constant(1.5);
  CHECK(c(0.0) == 1.5);
  CHECK(c(0.33) == 1.5);
  CHECK(c(1.0) == 1.5);

  const auto s = AlphaProfile::stefani(1.0);
  CHECK(s(0.0) == Catch::Approx(-21.46).margin(1e-14));
  // coefficient sum -21.46 + 426.41 - 806.73 + 392.28
  CHECK(s(1.0) == Catch::Approx(-9.50).margin(1e-12));

  CHECK_THROWS_AS(s(-0.1), std::domain_error);
  CHECK_THROWS_AS(s(1.1), std::domain_error);
}

TEST_CASE("eval_derivative anchors") {
  CHECK(AlphaProfile::constant(-4.0).derivative(0.7) == 0.0);
  const auto s = AlphaProfile::stefani(1.0);
  CHECK(s.derivative(0.0) == 0.0);
  // 852.82 - 2420.19 + 1569.12
  CHECK(s.derivative(1.0) == Catch::Approx(1.75).margin(1e-10));
  CHECK_THROWS_AS(s.derivative(2.0), std::domain_error);
}

TEST_CASE("norms anchors") {
  const auto n0 = AlphaProfile::constant(-3.0).norms();
  CHECK(n0.alpha_norm == 3.0);
  CHECK(n0.alpha_prime_norm == 0.0);

  const auto nf = AlphaProfile::stefani(0.818).norms();
  CHECK(nf.alpha_norm == Catch::Approx(17.55).margin(0.01));
  CHECK(nf.alpha_prime_norm == Catch::Approx(71.36).margin(0.01));

  const auto n1 = AlphaProfile::stefani(0.7).norms();
  const auto n2 = AlphaProfile::stefani(1.4).norms();
  CHECK(n2.alpha_norm == Catch::Approx(2.0 * n1.alpha_norm).epsilon(1e-13));
  CHECK(n2.alpha_prime_norm ==
        Catch::Approx(2.0 * n1.alpha_prime_norm).epsilon(1e-13));
}

TEST_CASE("homogeneity of norms under scaling") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> cd(-2.0, 3.0);
  const auto base = AlphaProfile::polynomial({0.4, -1.3, 2.2, 0.9, -3.1});
  const auto nb = base.norms();
  for (int i = 0; i < 20; ++i) {
    const double c = std::abs(cd(rng));
    const auto ns = base.scaled(c).norms();
    CHECK(ns.alpha_norm == Catch::Approx(c * nb.alpha_norm).epsilon(1e-13));
    CHECK(ns.alpha_prime_norm ==
          Catch::Approx(c * nb.alpha_prime_norm).epsilon(1e-13));
  }
}

TEST_CASE("norm dominates samples") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> rd(0.0, 1.0);
  const AlphaProfile ps[] = {
      AlphaProfile::stefani(0.95),
      AlphaProfile::polynomial({1.0, -8.0, 3.0, 14.0, -9.0, 0.5}),
      AlphaProfile::constant(2.5),
  };
  for (const auto& p : ps) {
    const auto n = p.norms();
    for (int i = 0; i < 10000; ++i) {
      const double r = rd(rng);
      CHECK(std::abs(p(r)) <= n.alpha_norm + 1e-12);
      CHECK(std::abs(p.derivative(r)) <= n.alpha_prime_norm + 1e-12);
    }
  }
}

TEST_CASE("derivative agrees with central differences") {
  const auto p = AlphaProfile::polynomial({0.2, 1.7, -4.0, 2.3, 5.5});
  const double h = 1e-6;
  for (int i = 1; i < 100; ++i) {
    const double r = i / 100.0;
    const double fd = (p(std::min(1.0, r + h)) - p(r - h)) /
                      (std::min(1.0, r + h) - (r - h));
    const double an = p.derivative(r);
    const double scale = std::max({std::abs(fd), std::abs(an), 1e-6});
    CHECK(std::abs(fd - an) / scale < 1e-6);
  }
}

TEST_CASE("profile spec parsing") {
  const auto c = parse_profile_spec("const:1.5");
  CHECK(c.kind() == ProfileKind::Constant);
  CHECK(c(0.5) == 1.5);

  const auto p = parse_profile_spec("poly:1,0,2.5");
  CHECK(p.kind() == ProfileKind::Polynomial);
  CHECK(p(2.0 / 3) == Catch::Approx(1.0 + 2.5 * 4.0 / 9.0).epsilon(1e-14));

  const auto s = parse_profile_spec("stefani:0.818");
  CHECK(s.kind() == ProfileKind::Stefani);
  CHECK(s.parameter() == 0.818);

  CHECK_THROWS_AS(parse_profile_spec("spline:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_profile_spec("const"), std::invalid_argument);
  CHECK_THROWS_AS(parse_profile_spec("const:abc"), std::invalid_argument);
  CHECK_THROWS_AS(AlphaProfile::stefani(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(AlphaProfile::polynomial(std::vector<double>(40, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("profile file round-trip") {
  const char* path = "test_profile_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"kind":"stefani","C":0.818})";
  }
  const auto s = load_profile_file(path);
  CHECK(s.kind() == ProfileKind::Stefani);
  CHECK(s(0.0) == Catch::Approx(0.818 * -21.46).margin(1e-12));

  {
    std::ofstream out(path);
    out << R"({"kind":"poly","coeffs":[0.5,-1.0,2.0]})";
  }
  const auto p = parse_profile_spec(std::string("@") + path);
  CHECK(p.kind() == ProfileKind::Polynomial);
  CHECK(p(1.0) == Catch::Approx(1.5).epsilon(1e-14));

  {
    std::ofstream out(path);
    out << R"({"kind":"const","value":-2.0})";
  }
  CHECK(load_profile_file(path)(0.1) == -2.0);
  std::remove(path);
}
