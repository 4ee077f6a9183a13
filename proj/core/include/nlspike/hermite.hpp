#pragma once

namespace nlspike {

inline constexpr int kMaxHermiteOrder = 30;

/// Probabilists' Hermite polynomial He_k(x) from the three-term recurrence
/// He_{k+1} = x He_k - k He_{k-1}, He_0 = 1, He_1 = x.
/// Throws std::domain_error when k is negative or above kMaxHermiteOrder.
double hermite_polynomial(int k, double x);

}  // namespace nlspike
