#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"

namespace jamison {

enum class sequence_kind { integer, real };

inline const char* to_string(sequence_kind k) { return k == sequence_kind::integer ? "integer" : "real"; }

/// Strictly increasing index sequence starting at 1.
class index_sequence {
 public:
  index_sequence() = default;

  explicit index_sequence(std::vector<double> terms, sequence_kind kind = sequence_kind::integer)
      : terms_(std::move(terms)), kind_(kind) {
    if (terms_.empty()) throw error(errc::invalid_sequence, "empty sequence");
    if (terms_.front() != 1.0) throw error(errc::invalid_sequence, "first term must equal 1");
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const double t = terms_[k];
      if (!std::isfinite(t) || t < 1.0)
        throw error(errc::invalid_sequence, "term " + std::to_string(k) + " is not >= 1");
      if (k > 0 && !(t > terms_[k - 1]))
        throw error(errc::invalid_sequence, "terms must be strictly increasing");
      if (kind_ == sequence_kind::integer && (t != std::floor(t) || t > 9007199254740992.0))
        throw error(errc::invalid_sequence, "integer sequence has non-integral term");
    }
  }

  static index_sequence integers(std::int64_t n) {
    std::vector<double> t;
    for (std::int64_t k = 1; k <= n; ++k) t.push_back(static_cast<double>(k));
    return index_sequence(std::move(t));
  }

  /// 1, 2, 6, 24, ... through count terms (0! = 1! merged).
  static index_sequence factorials(int count) {
    std::vector<double> t;
    double f = 1.0;
    for (int k = 1; static_cast<int>(t.size()) < count; ++k) {
      f *= k;
      t.push_back(f);
    }
    return index_sequence(std::move(t));
  }

  /// 1, 2, 4, ..., 2^exponent.
  static index_sequence powers_of_two(int exponent) {
    std::vector<double> t;
    for (int k = 0; k <= exponent; ++k) t.push_back(std::ldexp(1.0, k));
    return index_sequence(std::move(t));
  }

  std::size_t size() const noexcept { return terms_.size(); }
  double operator[](std::size_t k) const { return terms_[k]; }
  const std::vector<double>& terms() const noexcept { return terms_; }
  sequence_kind kind() const noexcept { return kind_; }
  bool is_integer() const noexcept { return kind_ == sequence_kind::integer; }

  index_sequence head(std::size_t K) const {
    if (K > size()) throw error(errc::horizon_exceeds_sequence, "horizon beyond sequence length");
    return index_sequence(std::vector<double>(terms_.begin(), terms_.begin() + K), kind_);
  }

  /// floor(t_k) for every term (not deduplicated).
  std::vector<double> integer_parts() const {
    std::vector<double> n;
    n.reserve(terms_.size());
    for (double t : terms_) n.push_back(std::floor(t));
    return n;
  }

  friend bool operator==(const index_sequence&, const index_sequence&) = default;

 private:
  std::vector<double> terms_{1.0};
  sequence_kind kind_ = sequence_kind::integer;
};

inline void check_horizon(const index_sequence& seq, std::size_t K) {
  if (K > seq.size())
    throw error(errc::horizon_exceeds_sequence,
                "horizon " + std::to_string(K) + " exceeds length " + std::to_string(seq.size()));
}

}  // namespace jamison
