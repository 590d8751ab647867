#include <catch2/catch_amalgamated.hpp>

#include "cerx/rng.hpp"

using namespace cerx;

TEST_CASE("identical seeds reproduce identical draws") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a.uniform() == b.uniform());
    REQUIRE(a.normal() == b.normal());
  }
}

TEST_CASE("derive_seed separates streams") {
  const auto s1 = derive_seed(7, stream::kInit);
  const auto s2 = derive_seed(7, stream::kTrain);
  const auto s3 = derive_seed(8, stream::kInit);
  REQUIRE(s1 != s2);
  REQUIRE(s1 != s3);
  REQUIRE(derive_seed(7, stream::kInit) == s1);
  REQUIRE(derive_seed(7, stream::kLevelFit, 2, 3) != derive_seed(7, stream::kLevelFit, 3, 2));
}

TEST_CASE("normal and exponential moments") {
  Rng rng(123);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  REQUIRE(std::abs(sum / n) < 0.02);
  REQUIRE(std::abs(sq / n - 1.0) < 0.03);

  double esum = 0.0;
  for (int i = 0; i < n; ++i) esum += rng.exponential(2.5);
  REQUIRE(esum / n == Catch::Approx(2.5).margin(0.05));
}

TEST_CASE("uniform_index stays in range and covers values") {
  Rng rng(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) ++counts[rng.uniform_index(7)];
  for (int c : counts) REQUIRE(c > 800);
}

TEST_CASE("student t has symmetric median and heavy tails") {
  Rng rng(99);
  const int n = 100000;
  std::vector<double> draws(n);
  for (auto& d : draws) d = rng.student_t(3);
  std::sort(draws.begin(), draws.end());
  REQUIRE(std::abs(draws[n / 2]) < 0.02);
  // t(3) exceeds 4 noticeably more often than a standard normal does
  const auto above = std::count_if(draws.begin(), draws.end(), [](double v) { return v > 4.0; });
  REQUIRE(above > n * 0.005 * 0.5);
}
