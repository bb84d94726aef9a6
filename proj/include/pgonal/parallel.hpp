#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pgonal {

/// Applies f to every input, optionally across worker threads. Results are
/// returned in input order regardless of worker count, so callers that
/// serialize the output stay deterministic.
template <typename In, typename Out, typename F>
std::vector<Out> parallel_map(const std::vector<In>& inputs, F f, int jobs) {
    std::vector<Out> results(inputs.size());
    if (inputs.empty()) return results;
    if (jobs <= 1 || inputs.size() == 1) {
        for (size_t i = 0; i < inputs.size(); ++i) results[i] = f(inputs[i]);
        return results;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= inputs.size()) return;
            try {
                results[i] = f(inputs[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    int count = std::min<int>(jobs, static_cast<int>(inputs.size()));
    for (int t = 0; t < count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

} // namespace pgonal
