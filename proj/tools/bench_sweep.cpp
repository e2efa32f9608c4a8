// Benchmarks the parallel row runner against the serial reference on the
// ground-state recovery workload and checks the outputs are bit-identical.

#include <CLI11.hpp>

#include <udw/recovery.hpp>
#include <udw/sweep.hpp>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

namespace {

struct Row {
  double p;
  double diff;
  double bound;
};

std::vector<Row> compute(std::size_t rows, int jobs) {
  std::vector<Row> out(rows);
  const double lo = 0.5 + 1e-6;
  const double step = rows > 1 ? (1.0 - lo) / static_cast<double>(rows - 1) : 0.0;
  auto body = [&](std::size_t i) {
    const double p = i + 1 == rows ? 1.0 : lo + step * static_cast<double>(i);
    const auto r = udw::recovery_gap_ground({p});
    out[i] = {r[0].p, r[0].entropy_diff, r[0].bound};
  };
  if (jobs <= 1) {
    udw::run_rows_serial(rows, body);
  } else {
    udw::run_rows(rows, jobs, body);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel row-runner benchmark"};
  std::size_t rows = 512;
  int reps = 3;
  app.add_option("--rows", rows, "grid rows per run")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  app.add_option("--reps", reps, "repetitions per variant")
      ->check(CLI::Range(1, 1000));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const int jobs = udw::max_jobs();
  double best_serial = 0.0, best_parallel = 0.0;
  std::vector<Row> serial, parallel;
  for (int rep = 0; rep < reps; ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    serial = compute(rows, 1);
    const double ts = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    parallel = compute(rows, jobs);
    const double tp = seconds_since(t0);
    if (rep == 0 || ts < best_serial) best_serial = ts;
    if (rep == 0 || tp < best_parallel) best_parallel = tp;
    std::printf("rep %d: serial %.3fs  parallel(%d) %.3fs\n", rep + 1, ts,
                jobs, tp);
  }

  if (serial.size() != parallel.size() ||
      std::memcmp(serial.data(), parallel.data(),
                  serial.size() * sizeof(Row)) != 0) {
    std::fprintf(stderr, "mismatch: parallel rows differ from serial rows\n");
    return 1;
  }
  std::printf("rows %zu  best serial %.3fs  best parallel %.3fs  speedup %.2fx"
              "  results identical\n",
              rows, best_serial, best_parallel,
              best_parallel > 0.0 ? best_serial / best_parallel : 0.0);
  return 0;
}
