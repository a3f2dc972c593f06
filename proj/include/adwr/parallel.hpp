#pragma once

#include <functional>

namespace adwr
{
/// Worker count used by parallel_for; 1 means run inline.
void set_num_threads(int n);
int  num_threads();

/// Calls fn(i) for i in [begin, end) on contiguous blocks. Callers write
/// results to per-index slots and reduce afterwards, so output does not
/// depend on the thread count.
void parallel_for(int begin, int end, const std::function<void(int)> &fn);

} // namespace adwr
