#pragma once

namespace cubeslice {

/// Which implementation of a data-parallel kernel to run. The serial path
/// is the reference; the parallel path must reproduce it bit for bit.
enum class Execution { serial, parallel };

/// Set the OpenMP thread count used by Execution::parallel kernels.
/// n <= 0 leaves the runtime default.
void set_num_threads(int n);
int max_threads();

}  // namespace cubeslice
