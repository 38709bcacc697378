// Compares the serial reference path against the OpenMP kernels on the
// two hot loops: frontier expansion of the zero-sum-free search and the
// randomized extraction campaign.

#include <chrono>
#include <functional>
#include <iostream>

#include "zs/constants.hpp"
#include "zs/extractor.hpp"

namespace {

double run_ms(const std::function<void()>& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const int workers = argc > 1 ? std::atoi(argv[1]) : zs::resolve_workers(0);
  const zs::GroupTable G = zs::GroupTable::heisenberg(3);
  const auto& auts = G.automorphisms();

  // grow a frontier deep enough to be interesting
  std::vector<std::vector<zs::Sequence>> levels{{zs::Sequence(G)}};
  for (int l = 0; l < 4; ++l)
    levels.push_back(
        zs::expand_zero_sum_free_level(G, auts, levels.back(), workers, zs::kDefaultStateBudget));
  std::cout << "frontier: " << levels.back().size() << " representatives at length "
            << levels.size() - 1 << "\n";

  std::vector<zs::Sequence> serial_out, parallel_out;
  const double serial_ms = run_ms([&] {
    serial_out =
        zs::expand_zero_sum_free_level(G, auts, levels.back(), 1, zs::kDefaultStateBudget);
  });
  const double parallel_ms = run_ms([&] {
    parallel_out = zs::expand_zero_sum_free_level(G, auts, levels.back(), workers,
                                                  zs::kDefaultStateBudget);
  });
  const bool agree = serial_out.size() == parallel_out.size() &&
                     std::equal(serial_out.begin(), serial_out.end(), parallel_out.begin());
  std::cout << "level expansion: serial " << serial_ms << " ms, " << workers << " workers "
            << parallel_ms << " ms, speedup " << serial_ms / parallel_ms
            << (agree ? " (outputs agree)" : " (OUTPUT MISMATCH)") << "\n";
  if (!agree) return 1;

  constexpr std::uint64_t kTrials = 500;
  zs::FuzzStats fs_serial, fs_parallel;
  const double fuzz_serial_ms =
      run_ms([&] { fs_serial = zs::fuzz_extract27(G, "uniform", kTrials, 42, 1); });
  const double fuzz_parallel_ms =
      run_ms([&] { fs_parallel = zs::fuzz_extract27(G, "uniform", kTrials, 42, workers); });
  const bool fuzz_agree = fs_serial.to_records() == fs_parallel.to_records();
  std::cout << "fuzz campaign (" << kTrials << " trials): serial " << fuzz_serial_ms << " ms, "
            << workers << " workers " << fuzz_parallel_ms << " ms, speedup "
            << fuzz_serial_ms / fuzz_parallel_ms
            << (fuzz_agree ? " (records identical)" : " (RECORD MISMATCH)") << "\n";
  return fuzz_agree ? 0 : 1;
}
