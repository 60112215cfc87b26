#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

namespace bk {

enum class Execution { Serial, Parallel };

// Applies fn to 0..count-1 and returns the results in index order, so the
// output never depends on the schedule. The first exception (by index) is
// rethrown after the loop.
template <class Fn>
auto batch_map(std::size_t count, Fn fn, Execution exec = Execution::Parallel) {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
  if (exec == Execution::Serial) {
    for (long long i = 0; i < n; ++i) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace bk
