#pragma once

#include "shimura/arith/bigint.hpp"

namespace shimura {

/// Kronecker symbol (a|n) with the standard extensions:
///   (a|2)  =  0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8;
///   (a|-1) = -1 for a < 0 and +1 otherwise;
///   (a|n) is completely multiplicative in n.
/// n = 0 is rejected with std::domain_error rather than extended.
int kronecker(const BigInt& a, const BigInt& n);

inline int kronecker(long a, long n) { return kronecker(BigInt(a), BigInt(n)); }

}  // namespace shimura
