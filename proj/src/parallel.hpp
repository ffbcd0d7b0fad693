#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace irs::detail
{
    inline unsigned resolve_workers(unsigned requested)
    {
        if (requested != 0)
            return requested;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1u : hw;
    }

    // Calls body(i) for i in [0, count) over contiguous static chunks. The first exception
    // thrown by any worker is rethrown on the calling thread.
    template <class Body>
    void parallel_for(std::size_t count, unsigned workers, Body &&body)
    {
        const std::size_t n_workers = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1));
        if (n_workers <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }

        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            pool.reserve(n_workers);
            const std::size_t chunk = (count + n_workers - 1) / n_workers;
            for (std::size_t w = 0; w < n_workers; ++w)
            {
                const std::size_t begin = w * chunk;
                const std::size_t end = std::min(count, begin + chunk);
                if (begin >= end)
                    break;
                pool.emplace_back([&, begin, end] {
                    try
                    {
                        for (std::size_t i = begin; i < end; ++i)
                            body(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                });
            }
        }
        if (failure)
            std::rethrow_exception(failure);
    }

    // Pairwise (cascade) summation; the grouping depends only on the length.
    inline double pairwise_sum(std::span<const double> values)
    {
        if (values.size() <= 16)
        {
            double s = 0.0;
            for (double v : values)
                s += v;
            return s;
        }
        const std::size_t half = values.size() / 2;
        return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
    }

} // namespace irs::detail
