// Times the Monte Carlo sweep with the serial reference path against the
// OpenMP path and verifies both produce identical CSV output.

#include <algorithm>
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "svb/config.hpp"
#include "svb/sim.hpp"

namespace {

double seconds_now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

int main() {
  svb::SimulationSpec spec = svb::default_spec();
  spec.trials = 100;
  spec.snr_sweep_db = {1.0, 7.0, 13.0};

#ifndef _OPENMP
  std::printf("built without OpenMP: worker requests fall back to the serial path\n");
  const int hw_threads = 1;
#else
  const int hw_threads = omp_get_max_threads();
#endif

  std::printf("trial sweep: %zu SNR points x %d trials (hardware threads: %d)\n",
              spec.snr_sweep_db.size(), spec.trials, hw_threads);
  double t0 = seconds_now();
  const svb::SweepResult serial = svb::run_sweep(spec, 1);
  const double serial_s = seconds_now() - t0;
  std::printf("serial reference: %8.3f s\n", serial_s);

  // Exercise the parallel path even when the machine is small: team sizes are
  // forced, so correctness is compared either way and speedup reflects the
  // hardware honestly.
  std::string serial_csv = svb::sweep_to_csv(serial.rows);
  for (int threads = 2; threads <= std::max(4, hw_threads); threads *= 2) {
    t0 = seconds_now();
    const svb::SweepResult par = svb::run_sweep(spec, threads);
    const double par_s = seconds_now() - t0;
    const bool same = svb::sweep_to_csv(par.rows) == serial_csv;
    std::printf("%2d workers:       %8.3f s  speedup %5.2fx  output %s\n", threads, par_s,
                serial_s / par_s, same ? "identical" : "DIFFERS");
    if (!same) return 1;
  }
  return 0;
}
