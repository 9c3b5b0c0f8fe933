#pragma once
// FFTW plan creation/destruction is not thread-safe; execution on distinct
// plans is. Every planner call in this project holds this mutex.

#include <mutex>

namespace fkpp {
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace fkpp
