#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace endspace {

using Json = nlohmann::ordered_json;

/// JSON-lines check report. Every record carries "check" and "ok".
class Report {
 public:
  void add(Json rec);
  void check(const std::string& name, bool ok, Json detail = Json::object());
  void merge(const Report& other);

  std::size_t size() const { return records_.size(); }
  std::size_t failures() const { return failures_; }
  bool ok() const { return failures_ == 0; }
  const std::vector<Json>& records() const { return records_; }
  std::string jsonl() const;

 private:
  std::vector<Json> records_;
  std::size_t failures_ = 0;
};

}  // namespace endspace
