#include "secidx/subsets.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>

#include <omp.h>

namespace secidx::subsets {

namespace {

std::atomic<Execution> g_default{Execution::Parallel};

// Captures the first exception thrown inside a parallel region so it can be
// rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <typename F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
};

std::optional<SensorSet> find_first_serial(std::size_t n, std::size_t k, const Predicate& pred) {
  SensorSet s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i + 1;
  do {
    if (pred(s)) return s;
  } while (next_combination(s, n));
  return std::nullopt;
}

std::optional<SensorSet> find_first_parallel(std::size_t n, std::size_t k, const Predicate& pred) {
  const std::uint64_t total = binomial(n, k);
  const std::uint64_t chunk =
      std::max<std::uint64_t>(64, 8 * static_cast<std::uint64_t>(omp_get_max_threads()));
  constexpr std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
  ExceptionSlot slot;
  for (std::uint64_t lo = 0; lo < total; lo += chunk) {
    const std::int64_t hi = static_cast<std::int64_t>(std::min(total, lo + chunk));
    std::uint64_t best = none;
#pragma omp parallel for schedule(dynamic) reduction(min : best)
    for (std::int64_t r = static_cast<std::int64_t>(lo); r < hi; ++r) {
      const auto rank = static_cast<std::uint64_t>(r);
      if (rank >= best) continue;
      slot.run([&] {
        if (pred(unrank(n, k, rank))) best = std::min(best, rank);
      });
    }
    slot.rethrow();
    if (best != none) return unrank(n, k, best);
  }
  return std::nullopt;
}

std::vector<SensorSet> find_all_serial(std::size_t n, std::size_t k, const Predicate& pred) {
  std::vector<SensorSet> out;
  SensorSet s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i + 1;
  do {
    if (pred(s)) out.push_back(s);
  } while (next_combination(s, n));
  return out;
}

std::vector<SensorSet> find_all_parallel(std::size_t n, std::size_t k, const Predicate& pred) {
  const std::uint64_t total = binomial(n, k);
  std::vector<char> hit(total, 0);
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(total); ++r) {
    slot.run([&] { hit[static_cast<std::size_t>(r)] = pred(unrank(n, k, static_cast<std::uint64_t>(r))) ? 1 : 0; });
  }
  slot.rethrow();
  std::vector<SensorSet> out;
  for (std::uint64_t r = 0; r < total; ++r) {
    if (hit[r]) out.push_back(unrank(n, k, r));
  }
  return out;
}

}  // namespace

Execution default_execution() { return g_default.load(); }

void set_default_execution(Execution exec) { g_default.store(exec); }

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

SensorSet unrank(std::size_t n, std::size_t k, std::uint64_t rank) {
  SensorSet out;
  out.reserve(k);
  std::size_t next = 1;
  for (std::size_t slot = 0; slot < k; ++slot) {
    // Skip candidates whose block of subsets lies entirely before `rank`.
    for (;; ++next) {
      const std::uint64_t block = binomial(n - next, k - slot - 1);
      if (rank < block) break;
      rank -= block;
    }
    out.push_back(next++);
  }
  return out;
}

bool next_combination(SensorSet& subset, std::size_t n) {
  const std::size_t k = subset.size();
  for (std::size_t i = k; i-- > 0;) {
    if (subset[i] < n - (k - 1 - i)) {
      ++subset[i];
      for (std::size_t j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
      return true;
    }
  }
  return false;
}

SensorSet complement(const SensorSet& subset, std::size_t n) {
  SensorSet out;
  std::size_t pos = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (pos < subset.size() && subset[pos] == i) {
      ++pos;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

std::optional<SensorSet> find_first(std::size_t n, std::size_t k, const Predicate& pred, Execution exec) {
  if (k > n) return std::nullopt;
  return exec == Execution::Serial ? find_first_serial(n, k, pred) : find_first_parallel(n, k, pred);
}

std::vector<SensorSet> find_all(std::size_t n, std::size_t k, const Predicate& pred, Execution exec) {
  if (k > n) return {};
  return exec == Execution::Serial ? find_all_serial(n, k, pred) : find_all_parallel(n, k, pred);
}

}  // namespace secidx::subsets
