#include <doctest.h>

#include <cmath>

#include "xoscc/errors.hpp"
#include "xoscc/infotools.hpp"

using namespace xoscc;

namespace {

constexpr double kH025 = 0.8112781244591328;

JointDistribution bit(double p1, const char* name = "B") {
  JointDistribution jd({name});
  jd.add({0}, 1.0 - p1);
  jd.add({1}, p1);
  return jd;
}

JointDistribution noisy_channel() {
  JointDistribution jd({"X", "Y"});
  for (int x = 0; x < 2; ++x) {
    for (int n = 0; n < 2; ++n) jd.add({x, x ^ n}, 0.5 * (n ? 0.25 : 0.75));
  }
  return jd;
}

}  // namespace

TEST_CASE("entropy") {
  CHECK(entropy(bit(0.5), {"B"}) == doctest::Approx(1.0));
  CHECK(entropy(bit(1.0), {"B"}) == doctest::Approx(0.0));
  CHECK(binary_entropy(0.25) == doctest::Approx(kH025).epsilon(1e-12));
  CHECK(entropy(bit(0.25), {"B"}) == doctest::Approx(kH025).epsilon(1e-12));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
}

TEST_CASE("mutual information") {
  JointDistribution copy({"X", "Y"});
  copy.add({0, 0}, 0.5);
  copy.add({1, 1}, 0.5);
  CHECK(mutual_info(copy, {"X"}, {"Y"}) == doctest::Approx(1.0));
  JointDistribution indep({"X", "Y"});
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 3; ++y) indep.add({x, y}, (x ? 0.3 : 0.7) / 3.0);
  }
  CHECK(std::abs(mutual_info(indep, {"X"}, {"Y"})) < 1e-12);
  CHECK(mutual_info(noisy_channel(), {"X"}, {"Y"}) == doctest::Approx(1.0 - kH025).epsilon(1e-12));
}

TEST_CASE("conditional terms and chain rule") {
  const auto jd = random_joint({"A", "B", "C"}, {3, 4, 2}, 11);
  const double h_abc = entropy(jd, {"A", "B", "C"});
  const double chain = entropy(jd, {"A"}) + entropy(jd, {"B"}, {"A"}) + entropy(jd, {"C"}, {"A", "B"});
  CHECK(std::abs(h_abc - chain) < 1e-9);
  const double mi = mutual_info(jd, {"A"}, {"B", "C"});
  const double split = mutual_info(jd, {"A"}, {"B"}) + mutual_info(jd, {"A"}, {"C"}, {"B"});
  CHECK(std::abs(mi - split) < 1e-9);
  CHECK(mutual_info(jd, {"A"}, {"C"}, {"B"}) >= -1e-12);
}

TEST_CASE("kl and tvd") {
  const auto p = bit(0.5);
  const auto q = bit(0.75);
  CHECK(kl(p, p) == doctest::Approx(0.0));
  CHECK(tvd(p, p) == doctest::Approx(0.0));
  CHECK(tvd(p, q) == doctest::Approx(0.25));
  CHECK(kl(p, q) == doctest::Approx(0.2075187496394219).epsilon(1e-12));
  const auto pin = pinsker_check(p, q);
  CHECK(pin.ok);
  CHECK(pin.bound == doctest::Approx(std::sqrt(0.2075187496394219 / 2)));
  CHECK(tvd(bit(0.0), bit(1.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(kl(bit(0.5), bit(1.0)), DivergenceInfinite);
}

TEST_CASE("fano") {
  JointDistribution copy({"A", "B"});
  copy.add({0, 0}, 0.5);
  copy.add({1, 1}, 0.5);
  const auto perfect = fano_check(copy, {"A"}, "B", map_predictor(copy, {"A"}, "B"));
  CHECK(perfect.ok);
  CHECK(perfect.error_rate == doctest::Approx(0.0));
  CHECK(perfect.conditional_entropy == doctest::Approx(0.0));

  JointDistribution indep({"A", "B"});
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) indep.add({a, b}, 0.25);
  }
  const auto coin = fano_check(indep, {"A"}, "B", map_predictor(indep, {"A"}, "B"));
  CHECK(coin.ok);
  CHECK(coin.error_rate == doctest::Approx(0.5));
  CHECK(coin.bound == doctest::Approx(1.0));

  const auto channel = noisy_channel();
  const auto noisy = fano_check(channel, {"Y"}, "X", map_predictor(channel, {"Y"}, "X"));
  CHECK(noisy.ok);
  CHECK(noisy.error_rate == doctest::Approx(0.25));
  CHECK(noisy.conditional_entropy == doctest::Approx(kH025).epsilon(1e-12));
  CHECK(noisy.bound == doctest::Approx(kH025).epsilon(1e-12));
}

TEST_CASE("joint distribution bookkeeping") {
  JointDistribution jd({"X", "Y"});
  jd.add({0, 1}, 2.0);
  jd.add({1, 1}, 2.0);
  CHECK_THROWS_AS(jd.validate(), InvalidArgument);
  jd.normalize();
  CHECK_NOTHROW(jd.validate());
  CHECK(jd.probability({0, 1}) == doctest::Approx(0.5));
  CHECK(jd.probability({0, 0}) == 0.0);
  CHECK(jd.marginal({"Y"}).probability({1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(jd.axis("Z"), InvalidArgument);
  CHECK_THROWS_AS(jd.add({0}, 1.0), DimensionMismatch);
  JointDistribution zero({"X"});
  CHECK_THROWS_AS(zero.normalize(), InvalidArgument);
}

TEST_CASE("random joints are valid") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto jd = random_joint({"A", "B", "C"}, {4, 4, 4}, seed, seed % 2 == 1);
    CHECK_NOTHROW(jd.validate(1e-9));
    CHECK(jd.table().size() <= 64);
  }
}
