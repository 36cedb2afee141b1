#ifndef UNILAT_SRC_PARALLEL_HPP
#define UNILAT_SRC_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace unilat::detail {

// Runs fn(rep) for rep in [0, reps), strided over workers. Callers write
// results into rep-indexed slots, so the merged output is identical for any
// worker count. On failure the surviving exception is the one with the lowest
// replicate index among workers that recorded one.
template <typename Fn>
void parallel_reps(std::uint64_t reps, int workers, Fn&& fn) {
  if (workers < 1) workers = 1;
  if (workers == 1 || reps < 2) {
    for (std::uint64_t r = 0; r < reps; ++r) fn(r);
    return;
  }
  struct Failure {
    std::uint64_t rep = UINT64_MAX;
    std::exception_ptr err = nullptr;
  };
  std::vector<Failure> fails(static_cast<std::size_t>(workers));
  std::atomic<bool> bail{false};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::uint64_t r = static_cast<std::uint64_t>(w); r < reps;
           r += static_cast<std::uint64_t>(workers)) {
        if (bail.load(std::memory_order_relaxed)) return;
        try {
          fn(r);
        } catch (...) {
          fails[w] = {r, std::current_exception()};
          bail.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  const Failure* first = nullptr;
  for (const auto& f : fails)
    if (f.err && (!first || f.rep < first->rep)) first = &f;
  if (first) std::rethrow_exception(first->err);
}

}  // namespace unilat::detail

#endif
