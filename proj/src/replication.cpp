#include "semicross/replication.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace semicross {

void RunningStats::add(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void RunningStats::merge(const RunningStats& other) noexcept {
    if (other.count == 0) return;
    if (count == 0) {
        *this = other;
        return;
    }
    const double n1 = static_cast<double>(count);
    const double n2 = static_cast<double>(other.count);
    const double n = n1 + n2;
    const double delta = other.mean - mean;
    mean += delta * (n2 / n);
    m2 += other.m2 + delta * delta * (n1 * n2 / n);
    count += other.count;
}

double RunningStats::variance() const noexcept {
    return count < 2 ? 0.0 : std::max(0.0, m2 / static_cast<double>(count - 1));
}

double RunningStats::std_error_of_mean() const noexcept {
    return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
}

unsigned default_workers() {
    if (const char* env = std::getenv("SEMICROSS_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

RunningStats replicate(std::uint64_t m, std::uint64_t seed, unsigned workers,
                       const std::function<double(Philox4x32&)>& fn) {
    const std::uint64_t blocks = (m + kReplicationBlock - 1) / kReplicationBlock;
    std::vector<RunningStats> partial(blocks);
    auto run_block = [&](std::uint64_t b) {
        const std::uint64_t end = std::min(m, (b + 1) * kReplicationBlock);
        RunningStats s;
        for (std::uint64_t k = b * kReplicationBlock; k < end; ++k) {
            Philox4x32 rng(seed, k);
            s.add(fn(rng));
        }
        partial[b] = s;
    };

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(blocks, 1))));
    if (workers == 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = blocks;
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    RunningStats total;
    for (const auto& s : partial) total.merge(s);
    return total;
}

}  // namespace semicross
