#pragma once

namespace odist {

/// Kernels with a data-parallel loop take this; Serial is the reference
/// path the parallel one is tested against. Results are identical.
enum class Execution { Serial, Parallel };

}  // namespace odist
