#pragma once

#include <stdexcept>

namespace motifcc {

inline bool is_prime(long v) {
  if (v < 2) return false;
  if (v % 2 == 0) return v == 2;
  for (long d = 3; d * d <= v; d += 2)
    if (v % d == 0) return false;
  return true;
}

// Arithmetic on GF(q), q prime, elements represented as ints in [0, q).
struct PrimeField {
  int q;

  explicit PrimeField(int q_) : q(q_) {
    if (!is_prime(q)) throw std::domain_error("PrimeField: q must be prime");
  }

  int add(int a, int b) const {
    const int s = a + b;
    return s >= q ? s - q : s;
  }
  int sub(int a, int b) const {
    const int s = a - b;
    return s < 0 ? s + q : s;
  }
  int neg(int a) const { return a == 0 ? 0 : q - a; }
  int mul(int a, int b) const {
    return static_cast<int>(static_cast<long long>(a) * b % q);
  }
  int pow(int a, long long e) const {
    int base = a, acc = 1;
    while (e > 0) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }
  int inv(int a) const {
    if (a == 0) throw std::domain_error("PrimeField::inv: zero has no inverse");
    return pow(a, q - 2);  // Fermat
  }
};

}  // namespace motifcc
