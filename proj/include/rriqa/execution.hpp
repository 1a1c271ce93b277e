#pragma once

#include <cstddef>

namespace rriqa {

/// Selects the serial reference loop or the OpenMP kernel.
///
/// Reductions in the parallel kernels are summed over fixed 4096-element
/// chunks in chunk order, so their results do not depend on the thread
/// count. They may differ from the serial loop in the last bits.
enum class Execution { serial, parallel };

/// Rows per partial sum in the chunked reductions.
inline constexpr std::size_t kReductionChunk = 4096;

}  // namespace rriqa
