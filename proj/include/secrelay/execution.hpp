#pragma once

namespace secrelay {

/// Kernels run under OpenMP by default; Serial keeps a single-threaded
/// reference path that must produce bitwise identical results.
enum class ExecutionMode { Serial, Parallel };

}  // namespace secrelay
