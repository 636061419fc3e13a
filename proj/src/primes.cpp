#include "suborbit/primes.hpp"

namespace suborbit {

bool is_prime(long long n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (long long d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

long long next_prime(long long n) {
    long long c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

std::vector<int> primes_up_to(int limit) {
    std::vector<int> out;
    if (limit < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (long long n = 2; n <= limit; ++n) {
        if (composite[static_cast<std::size_t>(n)]) continue;
        out.push_back(static_cast<int>(n));
        for (long long k = n * n; k <= limit; k += n) composite[static_cast<std::size_t>(k)] = true;
    }
    return out;
}

}  // namespace suborbit
