#pragma once

#include <exception>
#include <vector>

namespace mcipdg::detail {

/// Runs body(0..count-1), in parallel when asked. An exception thrown by any
/// index is rethrown after the loop; the lowest failing index wins so the
/// reported error does not depend on the thread count.
template <class Body>
void run_indexed(int count, bool parallel, Body&& body)
{
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    auto guarded = [&](int i) {
        try {
            body(i);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int i = 0; i < count; ++i) guarded(i);
    } else {
        for (int i = 0; i < count; ++i) guarded(i);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace mcipdg::detail
