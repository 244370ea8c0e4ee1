// Uniform pass/fail reporting for the numeric identity checks.
#pragma once

#include <string>
#include <vector>

namespace qlevy {

struct CheckEntry {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool informational = false;  // reported but not part of the verdict
};

class Report {
 public:
  void add(const std::string& name, double residual, double tol);
  void add_flag(const std::string& name, bool pass);
  void add_info(const std::string& name, double residual, double tol);

  bool pass() const;
  double max_residual() const;
  const std::vector<CheckEntry>& entries() const { return entries_; }
  const CheckEntry* find(const std::string& name) const;

 private:
  std::vector<CheckEntry> entries_;
};

}  // namespace qlevy
