#include "verhulst/model.hpp"

#include <algorithm>
#include <cmath>

#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using Catch::Approx;
using namespace verhulst;
using verhulst::testing::Draw;
using verhulst::testing::standard_extended;
using verhulst::testing::tau0_extended;

namespace {

const LogisticParams kFigure1{10.0, 0.7, 1.0};
const LogisticParams kFigure2{10.0, 0.7, 30.0};
const LogisticParams kNegative{10.0, 0.7, -5.0};

// ln(9)/0.7, ln(2/3)/0.7 and ln(3)/0.7 to 40 digits.
constexpr double kTau0Figure1 = 3.138892253337456261129272105492930584707;
constexpr double kTau0Figure2 = -0.5792358687259491171114473078062130522457;
constexpr double kTau0Negative = 1.569446126668728130564636052746465292354;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected verhulst::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("LogisticParams rejects non-positive capacity and rate", "[model][params]") {
  CHECK(kind_of([] { LogisticParams(0.0, 1.0, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { LogisticParams(-1.0, 1.0, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { LogisticParams(10.0, 0.0, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { LogisticParams(10.0, 1.0, NAN); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { LogisticParams(10.0, 1.0, 1e-320); }) == ErrorKind::InvalidArgument);
  CHECK_NOTHROW(LogisticParams(10.0, 1.0, -1e6));
}

TEST_CASE("classify reproduces the figure parameter branches", "[model][classify]") {
  SECTION("Figure 1 is Interior") {
    const Branch b = classify(kFigure1);
    CHECK(b.tag == BranchTag::Interior);
    CHECK(*b.ratio_r0 == 9.0);
    CHECK_FALSE(b.s0.has_value());
    CHECK(*b.tau0 == Approx(kTau0Figure1).epsilon(1e-15));
    CHECK(std::abs(*b.tau0 - static_cast<double>(tau0_extended(10.0L, 0.7L, 1.0L))) < 1e-12);
  }
  SECTION("P0 = M/2 puts the inflection at t = 0") {
    const Branch b = classify(LogisticParams(10.0, 1.0, 5.0));
    CHECK(b.tag == BranchTag::Interior);
    CHECK(*b.ratio_r0 == 1.0);
    CHECK(*b.tau0 == 0.0);
  }
  SECTION("Figure 2 is AboveCapacity with tau0 < 0") {
    const Branch b = classify(kFigure2);
    CHECK(b.tag == BranchTag::AboveCapacity);
    CHECK(*b.s0 == Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(*b.ratio_r0 == Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(*b.tau0 == Approx(kTau0Figure2).epsilon(1e-14));
  }
  SECTION("negative start has S0 >= 1 and tau0 >= 0") {
    const Branch b = classify(kNegative);
    CHECK(b.tag == BranchTag::NegativeStart);
    CHECK(*b.s0 == 3.0);
    CHECK(*b.tau0 == Approx(kTau0Negative).epsilon(1e-15));
  }
  SECTION("boundary cases are frozen") {
    const Branch at_capacity = classify(LogisticParams(10.0, 0.7, 10.0));
    CHECK(at_capacity.tag == BranchTag::FrozenCapacity);
    CHECK(*at_capacity.ratio_r0 == 0.0);
    CHECK_FALSE(at_capacity.tau0.has_value());

    const Branch at_zero = classify(LogisticParams(10.0, 0.7, 0.0));
    CHECK(at_zero.tag == BranchTag::FrozenZero);
    CHECK_FALSE(at_zero.ratio_r0.has_value());
    CHECK_FALSE(at_zero.tau0.has_value());
  }
}

TEST_CASE("branch classification is total and consistent", "[model][classify][property]") {
  Draw draw(11);
  for (int i = 0; i < 5000; ++i) {
    const double m = draw.capacity();
    const double p0 = draw.uniform(-3.0 * m, 3.0 * m);
    const Branch b = classify(LogisticParams(m, draw.rate(), p0));
    const int matches = (p0 < 0.0) + (p0 == 0.0) + (p0 > 0.0 && p0 < m) + (p0 == m) + (p0 > m);
    REQUIRE(matches == 1);
    if (p0 > 0.0 && p0 < m) {
      REQUIRE(b.tag == BranchTag::Interior);
      REQUIRE(*b.ratio_r0 > 0.0);
    } else if (p0 > m) {
      REQUIRE(b.tag == BranchTag::AboveCapacity);
      REQUIRE(*b.s0 > 0.0);
      REQUIRE(*b.s0 <= 1.0);
      REQUIRE(*b.tau0 <= 0.0);
    } else if (p0 < 0.0) {
      REQUIRE(b.tag == BranchTag::NegativeStart);
      REQUIRE(*b.s0 >= 1.0);
      REQUIRE(*b.tau0 >= 0.0);
    }
  }
}

TEST_CASE("eval_standard evaluates the reference form", "[model][standard]") {
  CHECK(eval_standard(kFigure1, 0.0) == 1.0);
  CHECK(eval_standard(kFigure1, kTau0Figure1) == Approx(5.0).epsilon(1e-14));
  CHECK(std::abs(eval_standard(kFigure2, 50.0) - 10.0) < 1e-9);
  CHECK(kind_of([] { eval_standard(LogisticParams(10.0, 0.7, 0.0), 1.0); }) ==
        ErrorKind::WrongBranch);
  CHECK(kind_of([] { eval_standard(kNegative, *classify(kNegative).tau0); }) ==
        ErrorKind::SingularInput);
}

TEST_CASE("eval_tanh is the S-curve about tau0", "[model][tanh]") {
  const double tau0 = *classify(kFigure1).tau0;
  CHECK(eval_tanh(kFigure1, tau0) == 5.0);
  CHECK(eval_tanh(kFigure1, 0.0) == eval_standard(kFigure1, 0.0));
  const double x = 1.3;
  CHECK(eval_tanh(kFigure1, tau0 + x) + eval_tanh(kFigure1, tau0 - x) == Approx(10.0).epsilon(1e-15));
  CHECK(kind_of([] { eval_tanh(kFigure2, 1.0); }) == ErrorKind::WrongBranch);
  CHECK(kind_of([] { eval_tanh(LogisticParams(10.0, 0.7, 10.0), 1.0); }) == ErrorKind::WrongBranch);

  SECTION("tails saturate without overflow") {
    CHECK(eval_tanh(kFigure1, -2000.0) == 0.0);
    CHECK(eval_tanh(kFigure1, 2000.0) == 10.0);
    CHECK(eval_tanh(kFigure1, -40.0) > 0.0);
    CHECK(eval_tanh(kFigure1, -40.0) ==
          Approx(static_cast<double>(standard_extended(10.0L, 0.7L, 1.0L, -40.0L))).epsilon(1e-12));
  }
}

TEST_CASE("eval_coth covers both arches", "[model][coth]") {
  CHECK(eval_coth(kFigure2, 0.0) == 30.0);

  const double p5 = eval_coth(kFigure2, 5.0);
  const double p10 = eval_coth(kFigure2, 10.0);
  CHECK(p10 > 10.0);
  CHECK(p10 < 30.0);
  CHECK(p10 < p5);
  CHECK(p5 == Approx(eval_standard(kFigure2, 5.0)).epsilon(1e-13));
  CHECK(p10 == Approx(eval_standard(kFigure2, 10.0)).epsilon(1e-13));
  CHECK(p10 == Approx(10.00608291103494400004748022318815561364).epsilon(1e-13));

  SECTION("negative start crosses the asymptote") {
    const double tau0 = *classify(kNegative).tau0;
    const double below = eval_coth(kNegative, tau0 - 1e-6);
    const double above = eval_coth(kNegative, tau0 + 1e-6);
    CHECK(below < -1e6);
    CHECK(above > 1e6);
    CHECK(below == Approx(eval_standard(kNegative, tau0 - 1e-6)).epsilon(1e-8));
    CHECK(above == Approx(eval_standard(kNegative, tau0 + 1e-6)).epsilon(1e-8));
    CHECK(eval_coth(kNegative, 0.0) == -5.0);
    CHECK(eval_coth(kNegative, 0.5 * tau0) < 0.0);
    CHECK(kind_of([&] { eval_coth(kNegative, tau0); }) == ErrorKind::SingularInput);
  }
  SECTION("the guard is a half-width of 1e-12 in k (t - tau0) / 2") {
    const double tau0 = *classify(kNegative).tau0;
    const double half_width = 2e-12 / 0.7;
    CHECK(kind_of([&] { eval_coth(kNegative, tau0 + 0.5 * half_width); }) ==
          ErrorKind::SingularInput);
    CHECK_NOTHROW(eval_coth(kNegative, tau0 + 4.0 * half_width));
  }
  CHECK(kind_of([] { eval_coth(kFigure1, 1.0); }) == ErrorKind::WrongBranch);
}

TEST_CASE("eval dispatches on the branch", "[model][eval]") {
  for (const double t : {-5.0, 0.0, 3.0, 1e6}) {
    CHECK(eval(LogisticParams(10.0, 0.7, 0.0), t) == 0.0);
    CHECK(eval(LogisticParams(10.0, 0.7, 10.0), t) == 10.0);
  }
  CHECK(eval(kFigure1, 3.13889225334) == Approx(5.0).margin(1e-5));
  CHECK(eval(kFigure1, 1.0) == eval_tanh(kFigure1, 1.0));
  CHECK(eval(kFigure2, 1.0) == eval_coth(kFigure2, 1.0));
  CHECK(kind_of([] { eval(kNegative, *classify(kNegative).tau0); }) == ErrorKind::SingularInput);
}

TEST_CASE("niche ratio decays exponentially", "[model][ratio]") {
  CHECK(ratio(kFigure1, 0.0) == 9.0);
  CHECK(ratio(kFigure1, kTau0Figure1) == Approx(1.0).epsilon(1e-14));
  CHECK(ratio(kFigure2, 0.0) == Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(ratio(LogisticParams(10.0, 0.7, 10.0), 4.0) == 0.0);
  CHECK(kind_of([] { ratio(LogisticParams(10.0, 0.7, 0.0), 1.0); }) == ErrorKind::WrongBranch);
  CHECK(exponential_model(9.0, -0.7, 2.0) == Approx(9.0 * std::exp(-1.4)).epsilon(1e-15));
  CHECK(exponential_model(2.0, 0.5, 0.0) == 2.0);
}

TEST_CASE("growth rate and its completed square", "[model][growth]") {
  const LogisticParams p(10.0, 0.7, 1.0);
  CHECK(growth_rate(p, 5.0) == Approx(1.75).epsilon(1e-15));
  CHECK(growth_rate_completed_square(p, 5.0) == Approx(1.75).epsilon(1e-15));
  CHECK(growth_rate(p, 0.0) == 0.0);
  CHECK(growth_rate(p, 10.0) == 0.0);
  CHECK(growth_rate(p, 20.0) < 0.0);
  CHECK(growth_rate(p, -1.0) < 0.0);
}

TEST_CASE("max_growth_point sits at (tau0, M/2, Mk/4)", "[model][peak]") {
  const GrowthPeak fig1 = max_growth_point(kFigure1);
  CHECK(fig1.time == Approx(kTau0Figure1).epsilon(1e-15));
  CHECK(fig1.population == 5.0);
  CHECK(fig1.rate == Approx(1.75).epsilon(1e-15));

  const GrowthPeak mid = max_growth_point(LogisticParams(2.0, 1.0, 1.0));
  CHECK(mid.time == 0.0);
  CHECK(mid.population == 1.0);
  CHECK(mid.rate == 0.5);

  const GrowthPeak late = max_growth_point(LogisticParams(10.0, 0.7, 9.0));
  CHECK(late.time < 0.0);
  CHECK(late.time == Approx(std::log(1.0 / 9.0) / 0.7).epsilon(1e-14));

  CHECK(kind_of([] { max_growth_point(kFigure2); }) == ErrorKind::WrongBranch);
  CHECK(kind_of([] { max_growth_point(LogisticParams(10.0, 0.7, 10.0)); }) ==
        ErrorKind::WrongBranch);
}

TEST_CASE("closed forms agree with the reference form", "[model][property]") {
  Draw draw(2024);
  SECTION("Interior") {
    for (int i = 0; i < 2000; ++i) {
      const double m = draw.capacity();
      const double k = draw.rate();
      const LogisticParams p(m, k, draw.interior_p0(m));
      const double t = draw.uniform(-20.0 / k, 20.0 / k);
      REQUIRE(std::abs(eval_tanh(p, t) - eval_standard(p, t)) <= 1e-9 * m);
    }
  }
  SECTION("coth branches away from the asymptote") {
    for (int i = 0; i < 2000; ++i) {
      const double m = draw.capacity();
      const double k = draw.rate();
      const LogisticParams p(m, k, i % 2 == 0 ? draw.above_p0(m) : draw.negative_p0(m));
      const double tau0 = *classify(p).tau0;
      const double t = draw.uniform(-20.0 / k, 20.0 / k);
      if (std::abs(t - tau0) < 0.01 / k) continue;
      const double reference = eval_standard(p, t);
      REQUIRE(std::abs(eval_coth(p, t) - reference) <= 1e-9 * std::max(m, std::abs(reference)));
    }
  }
}

TEST_CASE("ratio, log-linearity and symmetry properties", "[model][property]") {
  Draw draw(7);
  for (int i = 0; i < 2000; ++i) {
    const double m = draw.capacity();
    const double k = draw.rate();
    const double p0 = i % 3 == 0 ? draw.interior_p0(m) : (i % 3 == 1 ? draw.above_p0(m) : draw.negative_p0(m));
    const LogisticParams p(m, k, p0);
    const double tau0 = *classify(p).tau0;
    const double t = draw.uniform(-20.0 / k, 20.0 / k);
    if (std::abs(t - tau0) < 0.01 / k) continue;

    const double value = eval(p, t);
    if (value != 0.0) {
      // Relative to M, or to |P| past the asymptote where P itself is large.
      const double scale = std::max(m, std::abs(value));
      REQUIRE(std::abs(ratio(p, t) * value - (m - value)) <= 1e-9 * scale);
    }

    // Three collinear points on log|R| with slope -k.
    const double t1 = draw.uniform(-10.0 / k, 10.0 / k);
    const double t2 = t1 + draw.uniform(0.5, 5.0) / k;
    const double t3 = t2 + draw.uniform(0.5, 5.0) / k;
    const double l1 = std::log(std::abs(ratio(p, t1)));
    const double l2 = std::log(std::abs(ratio(p, t2)));
    const double l3 = std::log(std::abs(ratio(p, t3)));
    REQUIRE((l2 - l1) / (t2 - t1) == Approx(-k).epsilon(1e-12));
    REQUIRE((l3 - l2) / (t3 - t2) == Approx(-k).epsilon(1e-12));
  }

  for (int i = 0; i < 2000; ++i) {
    const double m = draw.capacity();
    const double k = draw.rate();
    const LogisticParams p(m, k, draw.interior_p0(m));
    const double tau0 = *classify(p).tau0;
    const double tau = draw.uniform(-30.0 / k, 30.0 / k);
    REQUIRE(std::abs(eval(p, tau0 + tau) + eval(p, tau0 - tau) - m) <= 1e-9 * m);
  }
}

TEST_CASE("closed form satisfies the differential equation", "[model][property]") {
  Draw draw(99);
  for (int i = 0; i < 2000; ++i) {
    const double m = draw.capacity();
    const double k = draw.rate();
    const double p0 = i % 3 == 0 ? draw.interior_p0(m) : (i % 3 == 1 ? draw.above_p0(m) : draw.negative_p0(m));
    const LogisticParams p(m, k, p0);
    const double tau0 = *classify(p).tau0;
    const double t = draw.uniform(-20.0 / k, 20.0 / k);
    // Keep |k (t - tau0) / 2| >= 1 so the coth arches stay within a few M.
    if (std::abs(t - tau0) < 2.0 / k) continue;
    const double h = 1e-5 / k;
    const double derivative = (eval(p, t + h) - eval(p, t - h)) / (2.0 * h);
    REQUIRE(std::abs(derivative - growth_rate(p, eval(p, t))) <= 1e-6 * m * k);
  }
}

TEST_CASE("monotone bounds on the two physical branches", "[model][property]") {
  Draw draw(5);
  for (int i = 0; i < 300; ++i) {
    const double m = draw.capacity();
    const double k = draw.rate();
    const LogisticParams interior(m, k, draw.interior_p0(m));
    const LogisticParams above(m, k, draw.above_p0(m));
    double last_interior = -1.0;
    double last_above = INFINITY;
    for (int j = 0; j <= 200; ++j) {
      const double t = static_cast<double>(j) * 0.05 / k;
      const double pi = eval(interior, t);
      const double pa = eval(above, t);
      REQUIRE(pi > 0.0);
      REQUIRE(pi < m);
      REQUIRE(pi > last_interior);
      REQUIRE(pa > m);
      REQUIRE(pa < last_above);
      last_interior = pi;
      last_above = pa;
    }
  }
}

TEST_CASE("completed-square identity", "[model][property]") {
  Draw draw(3);
  for (int i = 0; i < 5000; ++i) {
    const double m = draw.capacity();
    const LogisticParams p(m, draw.rate(), 1.0);
    const double population = draw.uniform(-2.0 * m, 3.0 * m);
    const double direct = growth_rate(p, population);
    const double square = growth_rate_completed_square(p, population);
    const double scale = std::max(std::abs(direct), m * p.rate() / 4.0);
    REQUIRE(std::abs(direct - square) <= 1e-12 * scale);
  }
}

TEST_CASE("frozen branches are fixed points", "[model][frozen]") {
  const LogisticParams zero(10.0, 0.7, 0.0);
  const LogisticParams full(10.0, 0.7, 10.0);
  for (const double t : {-100.0, 0.0, 0.1, 100.0}) {
    CHECK(eval(zero, t) == 0.0);
    CHECK(eval(full, t) == 10.0);
  }
  CHECK(growth_rate(zero, eval(zero, 3.0)) == 0.0);
  CHECK(growth_rate(full, eval(full, 3.0)) == 0.0);
}

TEST_CASE("Trajectory keeps samples ordered and off the asymptote", "[model][trajectory]") {
  Trajectory traj(kNegative);
  REQUIRE(traj.singular_time().has_value());
  CHECK(*traj.singular_time() == Approx(kTau0Negative).epsilon(1e-15));
  traj.append(0.0, -5.0);
  traj.append(1.0, eval(kNegative, 1.0));
  CHECK(kind_of([&] { traj.append(1.0, 0.0); }) == ErrorKind::InvalidData);
  CHECK(kind_of([&] { traj.append(*traj.singular_time(), 0.0); }) == ErrorKind::SingularInput);
  CHECK(traj.samples().size() == 2);
  CHECK_FALSE(Trajectory(kFigure1).singular_time().has_value());
}
