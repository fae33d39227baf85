#pragma once

#include <cstddef>
#include <functional>

namespace archpursuit {

/// Worker thread cap: hardware concurrency, lowered by ARCHPURSUIT_THREADS.
std::size_t max_threads() noexcept;

/// Calls fn(i) for i in [0, count) on up to max_threads() threads. Work items
/// must be independent; the first exception thrown is rethrown after all
/// threads join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace archpursuit
