#include "maxshape/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "maxshape/errors.hpp"

namespace maxshape {

SlopeFit fit_loglog(const std::vector<double>& ts, const std::vector<double>& values) {
  SlopeFit f;
  f.ts = ts;
  f.values = values;
  std::size_t n = ts.size();
  if (n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(ts[i]);
    ly[i] = std::log(std::max(values[i], 1e-300));
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double denom = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < n; ++i)
    f.fit_residual = std::max(f.fit_residual, std::abs(ly[i] - (f.slope * lx[i] + intercept)));
  return f;
}

void Report::add_slope(const std::string& name, const SlopeFit& fit, const std::string& criterion) {
  Json j;
  j["slope"] = fit.slope;
  j["fit_residual"] = fit.fit_residual;
  j["t_grid"] = fit.ts;
  j["values"] = fit.values;
  j["criterion"] = criterion;
  data_["slopes"][name] = j;
}

void Report::add_table(const std::string& name, const std::string& csv) { tables_[name] = csv; }

void Report::add_check(const std::string& name, bool passed, double value, double threshold,
                       const std::string& criterion) {
  Json j;
  j["passed"] = passed;
  j["value"] = value;
  j["threshold"] = threshold;
  j["criterion"] = criterion;
  data_["checks"][name] = j;
}

bool Report::all_passed() const {
  if (!data_.contains("checks")) return true;
  for (const auto& [k, v] : data_["checks"].items())
    if (!v["passed"].get<bool>()) return false;
  return true;
}

std::vector<std::string> Report::failures() const {
  std::vector<std::string> out;
  if (!data_.contains("checks")) return out;
  for (const auto& [k, v] : data_["checks"].items())
    if (!v["passed"].get<bool>()) out.push_back(k);
  return out;
}

void Report::write(const std::string& out_dir) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  fs::create_directories(fs::path(out_dir) / "tables", ec);
  std::ofstream js(fs::path(out_dir) / "report.json");
  if (!js) throw Error(ErrorCode::IoError, "cannot write report.json under " + out_dir);
  js << data_.dump(2) << "\n";
  for (const auto& [name, csv] : tables_) {
    std::ofstream cs(fs::path(out_dir) / "tables" / (name + ".csv"));
    if (!cs) throw Error(ErrorCode::IoError, "cannot write table " + name);
    cs << csv;
  }
}

}  // namespace maxshape
