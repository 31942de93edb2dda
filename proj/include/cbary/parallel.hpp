#pragma once

// Deterministic reductions over measure atoms.
//
// Exec::parallel splits [0, n) into fixed chunks of kChunkSize atoms, reduces
// each chunk serially (chunks run concurrently under OpenMP) and then combines
// the partials in chunk order. The result therefore does not depend on the
// number of threads. Exec::serial is the plain left-to-right reference loop;
// it agrees with the parallel path to rounding, and bit-for-bit when n fits
// in a single chunk.

#include "cbary/types.hpp"

#include <algorithm>
#include <vector>

namespace cbary {

enum class Exec { serial, parallel };

inline constexpr Index kChunkSize = 4096;

template <typename Acc, typename MakeZero, typename Body>
Acc chunked_reduce(Index n, MakeZero&& zero, Body&& body, Exec exec) {
  if (exec == Exec::serial) {
    Acc acc = zero();
    body(acc, Index{0}, n);
    return acc;
  }
  const Index chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Acc> partial(static_cast<std::size_t>(chunks), zero());
#pragma omp parallel for schedule(static) if (chunks > 1)
  for (Index c = 0; c < chunks; ++c) {
    body(partial[static_cast<std::size_t>(c)], c * kChunkSize, std::min(n, (c + 1) * kChunkSize));
  }
  Acc acc = zero();
  for (const Acc& p : partial) acc += p;
  return acc;
}

}  // namespace cbary
