#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "maxshape/common.hpp"

namespace maxshape {

using Json = nlohmann::json;

/// Least-squares fit of log(value) against log(t).
struct SlopeFit {
  std::vector<double> ts;
  std::vector<double> values;
  double slope = 0.0;
  double fit_residual = 0.0;  // max |log-fit deviation|
};

SlopeFit fit_loglog(const std::vector<double>& ts, const std::vector<double>& values);

/// Machine-readable results plus human CSV tables. Deterministic by
/// construction: no timestamps, sorted JSON keys.
class Report {
 public:
  Json& data() { return data_; }
  const Json& data() const { return data_; }

  void add_slope(const std::string& name, const SlopeFit& fit, const std::string& criterion);
  void add_table(const std::string& name, const std::string& csv);
  void add_check(const std::string& name, bool passed, double value, double threshold,
                 const std::string& criterion);

  bool all_passed() const;
  std::vector<std::string> failures() const;

  /// Writes <out_dir>/report.json and <out_dir>/tables/<name>.csv.
  void write(const std::string& out_dir) const;

 private:
  Json data_ = Json::object();
  std::map<std::string, std::string> tables_;
};

}  // namespace maxshape
