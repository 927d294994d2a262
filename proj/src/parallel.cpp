#include "homsa/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>

namespace homsa {

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HOMSA_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_chunks(std::uint64_t total, unsigned threads,
                     const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& body) {
    threads = std::max(1u, threads);
    if (total == 0) return;
    std::uint64_t n_chunks = std::min<std::uint64_t>(threads, total);
    if (n_chunks == 1) {
        body(0, 0, total);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_chunks);
    std::uint64_t per = total / n_chunks, extra = total % n_chunks;
    std::uint64_t begin = 0;
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        std::uint64_t len = per + (c < extra ? 1 : 0);
        std::uint64_t end = begin + len;
        pool.emplace_back([&, c, begin, end] {
            try {
                body(static_cast<unsigned>(c), begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace homsa
