#include "codedtof/model.hpp"

#include <cmath>
#include <unordered_set>

namespace codedtof {

std::vector<std::string> validate_config(const CameraConfig& c) {
  std::vector<std::string> v;
  if (!(c.f_m_mhz > 0.0)) v.push_back("f_m_mhz must be positive");
  if (!(c.f_r_mhz > 0.0)) v.push_back("f_r_mhz must be positive");
  if (c.f_m_mhz > 0.0 && c.f_r_mhz > 0.0) {
    const double ratio = c.f_m_mhz / c.f_r_mhz;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::round(ratio) ||
        std::round(ratio) < 1.0) {
      v.push_back("f_m/f_r not integer: code length must be a whole number"
                  " of chips");
    }
  }
  if (c.n_steps < 1) v.push_back("n_steps must be at least 1");
  if (!(c.fwhm_ns > 0.0)) v.push_back("fwhm_ns must be positive");
  if (c.m < 2) v.push_back("m must be at least 2");
  if (c.n_deg < 1) v.push_back("n_deg must be at least 1");
  if (c.n_deg > c.m && c.m >= 1) v.push_back("n_deg exceeds m");
  return v;
}

DerivedGrid derive_grid(const CameraConfig& c) {
  if (c.f_m_mhz > 0.0 && c.f_r_mhz > 0.0) {
    const double ratio = c.f_m_mhz / c.f_r_mhz;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::round(ratio) ||
        std::round(ratio) < 1.0) {
      throw NonIntegerCodeLength("f_m/f_r = " + std::to_string(ratio) +
                                 " is not an integer code length");
    }
  }
  const auto violations = validate_config(c);
  if (!violations.empty()) {
    std::string msg = "invalid config:";
    for (const auto& s : violations) msg += " [" + s + "]";
    throw ConfigError(msg);
  }
  DerivedGrid g;
  g.n = static_cast<int>(std::llround(c.f_m_mhz / c.f_r_mhz));
  g.n_samples = g.n * c.n_steps;
  g.chip_ns = 1000.0 / c.f_m_mhz;
  g.dt_ns = g.chip_ns / c.n_steps;
  g.period_ns = 1000.0 / c.f_r_mhz;
  g.gamma_sr = c.n_steps;
  g.sigma_ns = c.fwhm_ns / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  return g;
}

std::vector<int> BinaryCodeMatrix::column_support(int c) const {
  std::vector<int> s;
  for (int r = 0; r < rows; ++r)
    if (at(r, c)) s.push_back(r);
  return s;
}

std::vector<int> BinaryCodeMatrix::row_sums() const {
  std::vector<int> s(rows, 0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) s[r] += at(r, c);
  return s;
}

std::vector<int> BinaryCodeMatrix::col_sums() const {
  std::vector<int> s(cols, 0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) s[c] += at(r, c);
  return s;
}

void SceneResponse::validate() const {
  std::unordered_set<int> seen;
  for (const auto& [idx, amp] : targets) {
    if (idx < 0 || idx >= n_samples)
      throw ConfigError("scene target index " + std::to_string(idx) +
                        " outside [0, " + std::to_string(n_samples) + ")");
    if (!seen.insert(idx).second)
      throw ConfigError("duplicate scene target index " + std::to_string(idx));
    if (!(amp > 0.0))
      throw ConfigError("scene target amplitude must be positive");
  }
}

}  // namespace codedtof
