#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace homsa {

// Number of workers to use: explicit request, else HOMSA_THREADS, else
// hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

// Splits [0, total) into at most `threads` contiguous chunks and runs
// body(chunk_index, begin, end) on each, joining before returning.
// Exceptions thrown by workers are rethrown on the calling thread.
void parallel_chunks(std::uint64_t total, unsigned threads,
                     const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& body);

} // namespace homsa
