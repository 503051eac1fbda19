#pragma once

namespace ncalg {

/// Selects the serial reference path or the OpenMP path of a kernel. Both
/// produce identical results.
enum class Execution { Serial, Parallel };

/// Applies NCALG_THREADS (if set to a positive integer) to the OpenMP runtime.
/// Returns the resulting maximum thread count.
int configure_threads_from_env();

}  // namespace ncalg
