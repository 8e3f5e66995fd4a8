#include "bvpair/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bvpair {

namespace {

// Arbitrary-length fixed point number N / 2^p with N < 2^p, stored as 64-bit
// limbs (little endian). Only the operations needed for digit extraction.
struct FixedPoint {
  std::vector<std::uint64_t> limbs;
  int p = 0;

  // N <- 3N; returns floor(3N / 2^p) and keeps the remainder.
  int triple() {
    unsigned __int128 carry = 0;
    for (auto& limb : limbs) {
      const unsigned __int128 v = static_cast<unsigned __int128>(limb) * 3u + carry;
      limb = static_cast<std::uint64_t>(v);
      carry = v >> 64;
    }
    // Bits at positions >= p hold the new ternary digit.
    const int word = p / 64;
    const int bit = p % 64;
    std::uint64_t high = limbs[word] >> bit;
    if (bit > 0) high |= static_cast<std::uint64_t>(carry) << (64 - bit);
    limbs[word] &= bit == 0 ? 0 : ((std::uint64_t{1} << bit) - 1);
    const int digit = static_cast<int>(high);
    return digit;
  }

  bool zero() const {
    return std::all_of(limbs.begin(), limbs.end(), [](std::uint64_t v) { return v == 0; });
  }
};

double scan(auto&& next_digit, auto&& is_zero, int precision) {
  double result = 0.0;
  double scale = 0.5;
  for (int k = 0; k < precision; ++k) {
    if (is_zero()) break;
    const int d = next_digit();
    if (d == 1) return result + scale;
    if (d == 2) result += scale;
    scale *= 0.5;
  }
  return result;
}

}  // namespace

double cantor_cdf(double x, int precision) {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  int exp2 = 0;
  const double m = std::frexp(x, &exp2);  // x = m 2^exp2, m in [0.5, 1)
  const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
  const int p = 53 - exp2;  // x = mant / 2^p
  if (p <= 124) {
    unsigned __int128 n = mant;
    const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << p) - 1;
    return scan(
        [&] {
          n *= 3;
          const int d = static_cast<int>(n >> p);
          n &= mask;
          return d;
        },
        [&] { return n == 0; }, precision);
  }
  FixedPoint fp;
  fp.p = p;
  fp.limbs.assign(static_cast<std::size_t>(p / 64 + 1), 0);
  fp.limbs[0] = mant;
  return scan([&] { return fp.triple(); }, [&] { return fp.zero(); }, precision);
}

double cantor_cdf_rational(std::uint64_t num, std::uint64_t den, int precision) {
  if (num == 0) return 0.0;
  if (num >= den) return 1.0;
  unsigned __int128 n = num;
  return scan(
      [&] {
        n *= 3;
        const int d = static_cast<int>(n / den);
        n %= den;
        return d;
      },
      [&] { return n == 0; }, precision);
}

double CantorComponent::mass(double a, double b) const {
  if (b <= a) return 0.0;
  return cdf(b) - cdf(a);
}

}  // namespace bvpair
