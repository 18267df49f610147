// SPDX-License-Identifier: Apache-2.0
//
// Serial-reference vs OpenMP-kernel benchmark for the three parallel code
// paths.  Results must agree bit-for-bit; timings are medians of repeated
// runs.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "ofdma/channel.hpp"
#include "ofdma/config.hpp"
#include "ofdma/oracle.hpp"
#include "ofdma/repair.hpp"
#include "ofdma/rng.hpp"
#include "ofdma/scheduler.hpp"

using namespace ofdma;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  std::vector<double> samples;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

void print_row(const char* name, double serial_ms, double parallel_ms,
               bool equal) {
  std::printf("%-22s %10.2f %10.2f %8.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              equal ? "results equal" : "RESULTS DIFFER");
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", omp_get_max_threads());
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial[ms]", "omp[ms]",
              "speedup");

  // NNCF repair on a large grid.
  {
    ConfigOverrides ov;
    ov.num_users = 300;
    ov.num_subcarriers = 600;
    ov.seed = 11;
    const ScenarioConfig cfg = make_config(ov);
    const ChannelMatrix truth = generate_channel(cfg);
    const MaskedChannelMatrix masked =
        apply_mask(truth, 0.3, derive_seed(cfg.seed, kMaskStream));
    const NeighborWeights w = NeighborWeights::from_config(cfg);

    RepairResult serial_out, parallel_out;
    const double ts = time_ms(
        [&] { serial_out = nncf_repair_serial(masked, w, 50); }, 5);
    const double tp =
        time_ms([&] { parallel_out = nncf_repair(masked, w, 50); }, 5);
    print_row("nncf_repair 300x600",
              ts, tp,
              serial_out.repaired == parallel_out.repaired &&
                  serial_out.iterations_used == parallel_out.iterations_used);
  }

  // Max-EE grid search.
  {
    ConfigOverrides ov;
    ov.num_users = 16;
    ov.num_subcarriers = 128;
    ov.num_power_levels = 1024;
    ov.seed = 12;
    const ScenarioConfig cfg = make_config(ov);
    const ChannelMatrix g = generate_channel(cfg);

    MaxEeResult serial_out, parallel_out;
    const double ts =
        time_ms([&] { serial_out = solve_max_ee_serial(g, cfg); }, 5);
    const double tp = time_ms([&] { parallel_out = solve_max_ee(g, cfg); }, 5);
    print_row("solve_max_ee L=1024", ts, tp,
              serial_out.chosen_level == parallel_out.chosen_level &&
                  serial_out.chosen_ee == parallel_out.chosen_ee &&
                  serial_out.best.allocation == parallel_out.best.allocation);
  }

  // Brute-force assignment enumeration (3^11 = 177147 instances).
  {
    ConfigOverrides ov;
    ov.num_users = 3;
    ov.num_subcarriers = 11;
    ov.seed = 13;
    const ScenarioConfig cfg = make_config(ov);
    const ChannelMatrix g = generate_channel(cfg);

    OracleResult serial_out, parallel_out;
    const double ts = time_ms(
        [&] { serial_out = brute_force_p1_serial(g, cfg, 20.0); }, 3);
    const double tp =
        time_ms([&] { parallel_out = brute_force_p1(g, cfg, 20.0); }, 3);
    print_row("brute_force_p1 3^11", ts, tp,
              serial_out.best_value == parallel_out.best_value &&
                  serial_out.best_assignment == parallel_out.best_assignment);
  }

  return 0;
}
