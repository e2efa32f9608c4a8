#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <udw/sweep.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

TEST_CASE("parallel rows land in their own slots") {
  const std::size_t n = 200;
  std::vector<double> serial(n), parallel(n);
  auto fill = [](std::vector<double>& out) {
    return [&out](std::size_t i) {
      out[i] = std::sin(0.1 * static_cast<double>(i));
    };
  };
  udw::run_rows_serial(n, fill(serial));
  for (int jobs : {1, 2, 8}) {
    std::fill(parallel.begin(), parallel.end(), -1.0);
    udw::run_rows(n, jobs, fill(parallel));
    CHECK(parallel == serial);  // bitwise, not approximate
  }
}

TEST_CASE("empty and single-row grids") {
  int calls = 0;
  udw::run_rows(0, 4, [&](std::size_t) { ++calls; });
  CHECK(calls == 0);
  udw::run_rows(1, 4, [&](std::size_t i) { calls += static_cast<int>(i) + 1; });
  CHECK(calls == 1);
}

TEST_CASE("worker exceptions resurface with their type") {
  auto boom = [](std::size_t i) {
    if (i == 3) throw std::invalid_argument("row 3");
  };
  CHECK_THROWS_AS(udw::run_rows(8, 4, boom), std::invalid_argument);
  CHECK_THROWS_AS(udw::run_rows(8, 1, boom), std::invalid_argument);
}

TEST_CASE("max_jobs reports at least one lane") {
  CHECK(udw::max_jobs() >= 1);
}
