#include "rlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rlab {

namespace {
std::atomic<int> g_default{0};
}

void set_default_workers(int workers) { g_default = workers > 0 ? workers : 0; }

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (int d = g_default.load(); d > 0) return d;
  if (const char* env = std::getenv("RESIDUE_LAB_WORKERS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? static_cast<int>(h) : 1;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  int w = resolve_workers(workers);
  if (w <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  int n = static_cast<int>(std::min<std::size_t>(count, w));
  for (int t = 1; t < n; ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace rlab
