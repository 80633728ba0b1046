/*
 * Copyright 2026 The cbsamp authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cbsamp {

struct ParallelOptions {
    unsigned workers = 1;
};

/**
 * @brief Deterministic block-parallel reduction over item indices [0, n_items).
 *
 * Items are grouped into fixed-size blocks; workers claim whole blocks and
 * compute a partial Stats per block (sequentially within the block); partials
 * are folded in block order on the calling thread. Because the block layout
 * and the fold order depend only on (n_items, block_size), the result is
 * bit-identical for any worker count, including workers == 1.
 *
 * Stats must be default-constructible and provide merge(const Stats&).
 * BlockFn is invoked as fn(first_index, last_index, Stats&).
 */
template <class Stats, class BlockFn>
Stats run_blocks(std::uint64_t n_items, std::uint64_t block_size, const ParallelOptions& opts,
                 BlockFn&& fn) {
    if (block_size == 0) block_size = 1;
    const std::uint64_t n_blocks = (n_items + block_size - 1) / block_size;
    std::vector<Stats> partials(static_cast<std::size_t>(n_blocks));

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(opts.workers > 0 ? opts.workers : 1, n_blocks ? n_blocks : 1));

    if (workers <= 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b) {
            const std::uint64_t lo = b * block_size;
            const std::uint64_t hi = std::min(n_items, lo + block_size);
            fn(lo, hi, partials[static_cast<std::size_t>(b)]);
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto body = [&]() {
            try {
                for (;;) {
                    const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
                    if (b >= n_blocks) return;
                    const std::uint64_t lo = b * block_size;
                    const std::uint64_t hi = std::min(n_items, lo + block_size);
                    fn(lo, hi, partials[static_cast<std::size_t>(b)]);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    Stats total;
    for (auto& p : partials) total.merge(p);
    return total;
}

}  // namespace cbsamp
