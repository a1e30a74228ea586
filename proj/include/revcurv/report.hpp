#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace revcurv {

inline constexpr std::string_view kToolVersion = "revcurv 1.0.0";

/// Decimal text with 17 significant digits; round-trips doubles exactly.
std::string format_number(double value);

enum class Relation { less_equal, greater_equal, less, greater };

std::string_view to_string(Relation relation);

/// One verified property: `measured relation threshold` must hold.
struct CheckRecord {
  std::string id;
  std::string description;
  std::string property;
  double measured = 0;
  Relation relation = Relation::less_equal;
  double threshold = 0;
  bool passed = false;
  std::string note;
};

class VerificationReport {
 public:
  /// Appends a record whose pass flag is computed from the relation.
  /// NaN measurements always fail.
  CheckRecord& check(std::string id, std::string description, std::string property,
                     double measured, Relation relation, double threshold,
                     std::string note = {});

  /// Appends a record with an externally decided verdict.
  CheckRecord& add(CheckRecord record);

  void append(const VerificationReport& other);

  void set_config(std::string key, std::string value) { config_[std::move(key)] = std::move(value); }

  const std::vector<CheckRecord>& records() const { return records_; }
  const CheckRecord* find(std::string_view id) const;
  std::size_t passed_count() const;
  std::size_t failed_count() const { return records_.size() - passed_count(); }
  bool passed() const { return failed_count() == 0; }

  /// key=value text, one [check] block per record, preceded by the config echo
  /// and followed by the summary.
  void write(std::ostream& os) const;
  std::string str() const;

 private:
  std::vector<CheckRecord> records_;
  std::map<std::string, std::string> config_;
};

}  // namespace revcurv
