#include "endspace/report.hpp"

namespace endspace {

void Report::add(Json rec) {
  if (!rec.contains("ok")) rec["ok"] = true;
  if (!rec["ok"].get<bool>()) ++failures_;
  records_.push_back(std::move(rec));
}

void Report::check(const std::string& name, bool ok, Json detail) {
  Json rec;
  rec["check"] = name;
  rec["ok"] = ok;
  for (auto& [k, v] : detail.items()) rec[k] = v;
  add(std::move(rec));
}

void Report::merge(const Report& other) {
  for (const Json& r : other.records_) add(r);
}

std::string Report::jsonl() const {
  std::string out;
  for (const Json& r : records_) out += r.dump() + "\n";
  return out;
}

}  // namespace endspace
