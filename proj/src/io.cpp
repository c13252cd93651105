#include "codedtof/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "codedtof/version.hpp"
#include "json.hpp"

namespace codedtof::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << bytes;
  if (!out) throw IoError("short write to " + path.string());
}

ordered_json parse(const std::filesystem::path& path) {
  try {
    return ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace

CameraConfig load_config(const std::filesystem::path& path) {
  const auto j = parse(path);
  CameraConfig c;
  try {
    c.f_m_mhz = j.at("f_m_mhz").get<double>();
    c.f_r_mhz = j.at("f_r_mhz").get<double>();
    c.n_steps = j.at("n_steps").get<int>();
    c.fwhm_ns = j.at("fwhm_ns").get<double>();
    c.m = j.at("m").get<int>();
    c.n_deg = j.at("n_deg").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return c;
}

void save_config(const CameraConfig& c, const std::filesystem::path& path) {
  ordered_json j;
  j["f_m_mhz"] = c.f_m_mhz;
  j["f_r_mhz"] = c.f_r_mhz;
  j["n_steps"] = c.n_steps;
  j["fwhm_ns"] = c.fwhm_ns;
  j["m"] = c.m;
  j["n_deg"] = c.n_deg;
  write_file(path, j.dump(2) + "\n");
}

SensingMatrix load_matrix(const std::filesystem::path& path, double dt_ns) {
  const auto j = parse(path);
  SensingMatrix a;
  try {
    a.rows = j.at("rows").get<int>();
    a.cols = j.at("cols").get<int>();
    a.data = j.at("data").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("matrix " + path.string() + ": " + e.what());
  }
  if (a.rows < 1 || a.cols < 1 ||
      a.data.size() != size_t(a.rows) * size_t(a.cols))
    throw IoError("matrix " + path.string() + ": data length " +
                  std::to_string(a.data.size()) + " does not match " +
                  std::to_string(a.rows) + "x" + std::to_string(a.cols));
  a.dt_ns = dt_ns;
  return a;
}

void save_matrix(const SensingMatrix& a, const std::filesystem::path& path) {
  ordered_json j;
  j["rows"] = a.rows;
  j["cols"] = a.cols;
  j["data"] = a.data;
  write_file(path, j.dump() + "\n");
}

ShiftVector load_shifts(const std::filesystem::path& path) {
  const auto j = parse(path);
  try {
    return j.get<ShiftVector>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("shifts " + path.string() + ": " + e.what());
  }
}

void save_shifts(const ShiftVector& shifts,
                 const std::filesystem::path& path) {
  write_file(path, ordered_json(shifts).dump() + "\n");
}

BinaryCodeMatrix load_codes(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  BinaryCodeMatrix c;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (c.rows == 0) {
      c.cols = static_cast<int>(line.size());
    } else if (static_cast<int>(line.size()) != c.cols) {
      throw IoError("codes " + path.string() + ": ragged row lengths");
    }
    for (char ch : line) {
      if (ch != '0' && ch != '1')
        throw IoError("codes " + path.string() + ": entries must be 0 or 1");
      c.data.push_back(ch == '1' ? 1 : 0);
    }
    ++c.rows;
  }
  if (c.rows == 0) throw IoError("codes " + path.string() + ": empty file");
  return c;
}

void save_codes(const BinaryCodeMatrix& codes,
                const std::filesystem::path& path) {
  std::string out;
  out.reserve(size_t(codes.rows) * (codes.cols + 1));
  for (int r = 0; r < codes.rows; ++r) {
    for (int c = 0; c < codes.cols; ++c)
      out.push_back(codes.at(r, c) ? '1' : '0');
    out.push_back('\n');
  }
  write_file(path, out);
}

namespace {

std::string fmt_double(double v) {
  ordered_json j = v;  // shortest round-trip representation
  return j.dump();
}

}  // namespace

void save_trajectory_csv(const ShiftResult& result,
                         const std::filesystem::path& path) {
  std::string out = "row,chosen_offset,objective\n";
  for (const auto& step : result.trajectory) {
    out += std::to_string(step.row) + "," + std::to_string(step.offset) + "," +
           fmt_double(step.objective) + "\n";
  }
  write_file(path, out);
}

void save_gcomb_trace_csv(const std::vector<GCombTraceRow>& trace,
                          const std::filesystem::path& path) {
  std::string out = "column_index,combination,rejected_count,objective\n";
  for (const auto& row : trace) {
    std::string comb;
    for (size_t i = 0; i < row.combination.size(); ++i) {
      if (i) comb += " ";
      comb += std::to_string(row.combination[i]);
    }
    out += std::to_string(row.column_index) + "," + comb + "," +
           std::to_string(row.rejected_count) + "," +
           fmt_double(row.objective) + "\n";
  }
  write_file(path, out);
}

void save_histogram_csv(const Histogram& hist,
                        const std::filesystem::path& path) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (int b = 0; b < hist.n_bins; ++b) {
    out += fmt_double(hist.bin_lo(b)) + "," + fmt_double(hist.bin_hi(b)) +
           "," + std::to_string(hist.counts[b]) + "\n";
  }
  write_file(path, out);
}

void save_sweep_csv(const SweepResult& sweep,
                    const std::filesystem::path& path) {
  std::string out = "eta,n,realization,mu\n";
  for (const auto& pt : sweep.points) {
    out += fmt_double(pt.eta) + "," + std::to_string(pt.n) + "," +
           std::to_string(pt.realization) + "," + fmt_double(pt.mu) + "\n";
  }
  write_file(path, out);
}

void save_trials_csv(const TrialStats& stats,
                     const std::filesystem::path& path) {
  std::string out = "snr_db,trial,k,exact_support,delay_err_ns,depth_err_m\n";
  for (const auto& r : stats.records) {
    const std::string snr = std::isinf(r.snr_db)
                                ? (r.snr_db > 0 ? "inf" : "-inf")
                                : fmt_double(r.snr_db);
    out += snr + "," + std::to_string(r.trial) + "," + std::to_string(r.k) +
           "," + (r.exact_support ? "1" : "0") + "," +
           fmt_double(r.delay_err_ns) + "," + fmt_double(r.depth_err_m) + "\n";
  }
  write_file(path, out);
}

void save_kernel_csv(const Kernel& kernel, const std::filesystem::path& path) {
  std::string out = "index,t_ns,value\n";
  const int n = static_cast<int>(kernel.samples.size());
  for (int i = 0; i < n; ++i) {
    // Signed circular time: indices past the midpoint wrap to negative lags.
    const double t = (i <= n / 2 ? i : i - n) * kernel.dt_ns;
    out += std::to_string(i) + "," + fmt_double(t) + "," +
           fmt_double(kernel.samples[i]) + "\n";
  }
  write_file(path, out);
}

std::string digest_file(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

void save_manifest(const RunManifest& m, const std::filesystem::path& path) {
  ordered_json j;
  j["version"] = m.version.empty() ? std::string(kVersion) : m.version;
  j["command"] = m.command;
  if (!m.config_json.empty())
    j["config"] = ordered_json::parse(m.config_json);
  j["seed"] = m.seed;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["timings_ms"] = m.timings_ms;
  write_file(path, j.dump(2) + "\n");
}

}  // namespace codedtof::io
