#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cutset {

// Minimal unsigned big integer: enough for type counts and quantizer
// cardinality products, which overflow 64 bits already at desk scale.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  BigUint(std::uint64_t v) {  // NOLINT: implicit by design
    limbs_.clear();
    if (v == 0) limbs_.push_back(0);
    while (v > 0) {
      limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
      v /= kBase;
    }
  }

  BigUint& operator*=(std::uint64_t m) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    while (carry > 0) {
      limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
      carry /= kBase;
    }
    return *this;
  }

  BigUint& operator+=(const BigUint& o) {
    std::uint64_t carry = 0;
    std::size_t n = std::max(limbs_.size(), o.limbs_.size());
    limbs_.resize(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t cur = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
      limbs_[i] = static_cast<std::uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    return *this;
  }

  BigUint& divide_exact(std::uint64_t d) {
    if (d == 0) throw std::invalid_argument("BigUint: division by zero");
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      std::uint64_t cur = rem * kBase + limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur / d);
      rem = cur % d;
    }
    if (rem != 0) throw std::logic_error("BigUint: division was not exact");
    trim();
    return *this;
  }

  bool operator<=(const BigUint& o) const {
    if (limbs_.size() != o.limbs_.size()) return limbs_.size() < o.limbs_.size();
    for (std::size_t i = limbs_.size(); i-- > 0;)
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i];
    return true;
  }
  bool operator==(const BigUint& o) const { return limbs_ == o.limbs_; }

  bool fits_u64() const {
    BigUint max64(UINT64_MAX);
    return *this <= max64;
  }

  std::uint64_t to_u64() const {
    std::uint64_t v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
    return v;
  }

  double to_double() const {
    double v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
    return v;
  }

  std::string to_string() const {
    std::string s = std::to_string(limbs_.back());
    for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
      std::string part = std::to_string(limbs_[i]);
      s += std::string(9 - part.size(), '0') + part;
    }
    return s;
  }

  static BigUint pow(std::uint64_t base, unsigned exp) {
    BigUint r(1);
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
  }

  // C(n, k) built by exact incremental division
  static BigUint binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return BigUint(0);
    if (k > n - k) k = n - k;
    BigUint r(1);
    for (std::uint64_t i = 1; i <= k; ++i) {
      r *= (n - k + i);
      r.divide_exact(i);
    }
    return r;
  }

 private:
  static constexpr std::uint64_t kBase = 1000000000ULL;
  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }
  std::vector<std::uint32_t> limbs_;  // little-endian base-1e9
};

}  // namespace cutset
