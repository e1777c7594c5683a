#pragma once

#include <cstddef>
#include <functional>

namespace symcap {

/// Caps the number of worker threads used by library map-reduce loops (0 = hardware default).
void set_thread_limit(unsigned threads);
unsigned thread_limit();

/// Calls `body(begin, end, chunk_index)` for consecutive fixed-size chunks of [0, n).
///
/// Chunk boundaries depend only on `n` and `chunk`, never on the worker count, so reductions that
/// combine per-chunk partials in chunk order are bit-identical for any thread limit.
void for_each_chunk(std::size_t n, std::size_t chunk,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace symcap
