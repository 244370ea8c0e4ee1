#include "qlevy/report.hpp"

#include <algorithm>

namespace qlevy {

void Report::add(const std::string& name, double residual, double tol) {
  entries_.push_back({name, residual, tol, residual <= tol, false});
}

void Report::add_flag(const std::string& name, bool pass) {
  entries_.push_back({name, pass ? 0.0 : 1.0, 0.0, pass, false});
}

void Report::add_info(const std::string& name, double residual, double tol) {
  entries_.push_back({name, residual, tol, residual <= tol, true});
}

bool Report::pass() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const CheckEntry& e) {
    return e.pass || e.informational;
  });
}

double Report::max_residual() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, e.residual);
  return m;
}

const CheckEntry* Report::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace qlevy
