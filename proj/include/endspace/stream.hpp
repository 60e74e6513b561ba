#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace endspace {

/// Eventually periodic sequence of naturals: prefix, then period repeated.
///
/// Always stored canonically (primitive period, shortest prefix), so two
/// streams denote the same sequence iff they compare equal.
class Stream {
 public:
  Stream() : period_{0} {}
  Stream(std::vector<std::uint64_t> prefix, std::vector<std::uint64_t> period);

  const std::vector<std::uint64_t>& prefix() const { return prefix_; }
  const std::vector<std::uint64_t>& period() const { return period_; }

  std::uint64_t at(std::uint64_t i) const;
  std::vector<std::uint64_t> take(std::uint64_t n) const;
  /// Largest element occurring anywhere in the stream.
  std::uint64_t max_element() const;

  /// Index of the first difference; nullopt when the streams are equal.
  static std::optional<std::uint64_t> first_difference(const Stream& a, const Stream& b);
  /// True iff `word` is an initial segment of the stream.
  bool has_prefix(const std::vector<std::uint64_t>& word) const;
  /// The stream with `word` prepended.
  Stream prepend(const std::vector<std::uint64_t>& word) const;

  bool operator==(const Stream&) const = default;
  bool operator<(const Stream& o) const;

  std::string to_string() const;

 private:
  std::vector<std::uint64_t> prefix_;
  std::vector<std::uint64_t> period_;
};

}  // namespace endspace
