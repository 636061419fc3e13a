#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

namespace suborbit {

/// Serial is the reference path; Parallel must give identical results.
enum class Execution { Serial, Parallel };

/// Evaluates fn(0), ..., fn(count - 1) and returns the results in index
/// order. Under Parallel the calls are spread over OpenMP threads; each call
/// must depend only on its index, so the output never depends on scheduling.
/// The first exception (lowest index) is rethrown after the loop.
template <class Fn>
auto map_indexed(std::size_t count, Execution execution, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    using Result = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<Result> out(count);
    if (execution == Execution::Serial) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(count);
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace suborbit
