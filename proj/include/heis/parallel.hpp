#ifndef HEIS_PARALLEL_HPP
#define HEIS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace heis {

// Process-wide worker count used by parallel_for (default: hardware).
void set_thread_count(int k);
int thread_count();

// Static-chunked parallel loop.  fn(i) must write only to slot i of whatever
// output it fills, so results are bit-identical for any thread count; callers
// reduce serially afterwards.
void parallel_for(size_t count, const std::function<void(size_t)>& fn);

}  // namespace heis

#endif
