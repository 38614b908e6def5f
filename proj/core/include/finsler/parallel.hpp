// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace finsler {

/// Worker count used by grid sweeps. 0 means "not set": fall back to the
/// FINSLER_THREADS environment variable, then to hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, count). Work is split in contiguous chunks;
/// the first exception thrown (lowest index) is rethrown after all workers
/// join. Callers write results into slot i, so reductions done afterwards in
/// index order are independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Convenience: results[i] = f(i).
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace finsler
