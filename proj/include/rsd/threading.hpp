#ifndef RSD_THREADING_HPP
#define RSD_THREADING_HPP

namespace rsd::threading {

// Runtime switch between the OpenMP kernel paths and the serial reference
// paths. Both must produce bitwise identical results; the switch exists so
// tests and benchmarks can compare them.
bool enabled();
void set_enabled(bool on);

// Number of worker threads the OpenMP paths will use (1 when disabled or
// when built without OpenMP).
int worker_count();
void set_worker_count(int n);

}  // namespace rsd::threading

#endif
