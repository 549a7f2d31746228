#ifndef MMID_PARALLEL_HPP
#define MMID_PARALLEL_HPP

namespace mmid {

// Applies the MMID_THREADS environment cap (if set) to the OpenMP runtime.
// No-op in serial builds or when the variable is unset/invalid.
void apply_thread_cap_from_env();

// Caps the OpenMP worker count explicitly (values < 1 are ignored).
void set_max_threads(int n);

int max_threads();

}  // namespace mmid

#endif
