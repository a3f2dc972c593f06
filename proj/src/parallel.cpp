#include <adwr/parallel.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace adwr
{
namespace
{
std::atomic<int> n_threads{1};
}

void
set_num_threads(int n)
{
  n_threads = std::max(1, n);
}

int
num_threads()
{
  return n_threads;
}

void
parallel_for(int begin, int end, const std::function<void(int)> &fn)
{
  const int n = end - begin;
  const int t = std::min(num_threads(), std::max(1, n / 64));
  if (t <= 1)
    {
      for (int i = begin; i < end; ++i)
        fn(i);
      return;
    }
  std::exception_ptr       err;
  std::mutex               err_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w)
    {
      const int lo = begin + static_cast<int>(static_cast<long>(n) * w / t);
      const int hi = begin + static_cast<int>(static_cast<long>(n) * (w + 1) / t);
      pool.emplace_back([&, lo, hi] {
        try
          {
            for (int i = lo; i < hi; ++i)
              fn(i);
          }
        catch (...)
          {
            std::lock_guard<std::mutex> g(err_mutex);
            if (!err)
              err = std::current_exception();
          }
      });
    }
  for (auto &th : pool)
    th.join();
  if (err)
    std::rethrow_exception(err);
}

} // namespace adwr
