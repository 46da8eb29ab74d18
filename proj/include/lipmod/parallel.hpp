#pragma once

namespace lipmod {

// Applies the LIPMOD_THREADS environment cap to the OpenMP runtime.
// A no-op when OpenMP is not compiled in or the variable is unset.
void apply_thread_cap_from_env();

int max_threads();

}  // namespace lipmod
