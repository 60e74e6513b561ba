#include "endspace/stream.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "endspace/error.hpp"

namespace endspace {

Stream::Stream(std::vector<std::uint64_t> prefix, std::vector<std::uint64_t> period)
    : prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.empty()) throw Error(ErrorCode::InvalidHighRay, "stream period must be nonempty");
  const std::size_t n = period_.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = period_[i] == period_[i - p];
    if (ok) {
      period_.resize(p);
      break;
    }
  }
  while (!prefix_.empty() && prefix_.back() == period_.back()) {
    prefix_.pop_back();
    std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
  }
}

std::uint64_t Stream::at(std::uint64_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  return period_[(i - prefix_.size()) % period_.size()];
}

std::vector<std::uint64_t> Stream::take(std::uint64_t n) const {
  std::vector<std::uint64_t> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(at(i));
  return out;
}

std::uint64_t Stream::max_element() const {
  std::uint64_t m = *std::max_element(period_.begin(), period_.end());
  for (auto v : prefix_) m = std::max(m, v);
  return m;
}

std::optional<std::uint64_t> Stream::first_difference(const Stream& a, const Stream& b) {
  if (a == b) return std::nullopt;
  const std::uint64_t span = std::max(a.prefix_.size(), b.prefix_.size()) +
                             std::lcm<std::uint64_t>(a.period_.size(), b.period_.size());
  for (std::uint64_t i = 0; i < span; ++i)
    if (a.at(i) != b.at(i)) return i;
  // Unreachable for canonical streams.
  return span;
}

bool Stream::has_prefix(const std::vector<std::uint64_t>& word) const {
  for (std::size_t i = 0; i < word.size(); ++i)
    if (at(i) != word[i]) return false;
  return true;
}

Stream Stream::prepend(const std::vector<std::uint64_t>& word) const {
  std::vector<std::uint64_t> p = word;
  p.insert(p.end(), prefix_.begin(), prefix_.end());
  return Stream(std::move(p), period_);
}

bool Stream::operator<(const Stream& o) const {
  auto d = first_difference(*this, o);
  return d && at(*d) < o.at(*d);
}

std::string Stream::to_string() const {
  auto join = [](const std::vector<std::uint64_t>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
  };
  if (prefix_.empty()) return "period(" + join(period_) + ")";
  return "prefix(" + join(prefix_) + ";period(" + join(period_) + "))";
}

}  // namespace endspace
