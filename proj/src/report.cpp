#include "revcurv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace revcurv {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::less_equal: return "<=";
    case Relation::greater_equal: return ">=";
    case Relation::less: return "<";
    case Relation::greater: return ">";
  }
  return "?";
}

CheckRecord& VerificationReport::check(std::string id, std::string description,
                                       std::string property, double measured,
                                       Relation relation, double threshold, std::string note) {
  bool ok = false;
  switch (relation) {
    case Relation::less_equal: ok = measured <= threshold; break;
    case Relation::greater_equal: ok = measured >= threshold; break;
    case Relation::less: ok = measured < threshold; break;
    case Relation::greater: ok = measured > threshold; break;
  }
  return add({std::move(id), std::move(description), std::move(property), measured, relation,
              threshold, ok && !std::isnan(measured), std::move(note)});
}

CheckRecord& VerificationReport::add(CheckRecord record) {
  records_.push_back(std::move(record));
  return records_.back();
}

void VerificationReport::append(const VerificationReport& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  for (const auto& [k, v] : other.config_) config_.emplace(k, v);
}

const CheckRecord* VerificationReport::find(std::string_view id) const {
  auto it = std::find_if(records_.begin(), records_.end(),
                         [&](const CheckRecord& r) { return r.id == id; });
  return it == records_.end() ? nullptr : &*it;
}

std::size_t VerificationReport::passed_count() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const CheckRecord& r) { return r.passed; }));
}

void VerificationReport::write(std::ostream& os) const {
  os << "[report]\n" << "version=" << kToolVersion << '\n';
  for (const auto& [k, v] : config_) os << "config." << k << '=' << v << '\n';
  for (const auto& r : records_) {
    os << "\n[check]\n"
       << "id=" << r.id << '\n'
       << "description=" << r.description << '\n'
       << "property=" << r.property << '\n'
       << "measured=" << format_number(r.measured) << '\n'
       << "relation=" << to_string(r.relation) << '\n'
       << "threshold=" << format_number(r.threshold) << '\n'
       << "status=" << (r.passed ? "pass" : "fail") << '\n';
    if (!r.note.empty()) os << "note=" << r.note << '\n';
  }
  os << "\n[summary]\n"
     << "checks=" << records_.size() << '\n'
     << "passed=" << passed_count() << '\n'
     << "failed=" << failed_count() << '\n'
     << "overall=" << (passed() ? "pass" : "fail") << '\n';
}

std::string VerificationReport::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace revcurv
