#pragma once

namespace hugetest {

// Exact accumulator for transport objectives and weight enumerators.
__extension__ typedef __int128 Int128;

}  // namespace hugetest
