#pragma once

#include <vector>

namespace suborbit {

bool is_prime(long long n);
/// Smallest prime strictly greater than n.
long long next_prime(long long n);
std::vector<int> primes_up_to(int limit);

}  // namespace suborbit
