#include "phlab/parallel.hpp"

#include <algorithm>

namespace phlab {

namespace {
int g_worker_threads = 0;  // 0 = not set yet
}

void set_worker_threads(int n) { g_worker_threads = std::max(1, n); }

int worker_threads() {
    if (g_worker_threads == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        g_worker_threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    return g_worker_threads;
}

}  // namespace phlab
