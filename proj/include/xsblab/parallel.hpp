#pragma once

// Static-partition parallel loop. Each index is processed exactly once and
// writes only its own output slot, so results do not depend on the worker
// count. The count comes from XSBLAB_WORKERS (default: hardware threads).

#include <cstddef>
#include <functional>

namespace xsb {

int worker_count();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace xsb
