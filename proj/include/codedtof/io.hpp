#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "codedtof/analysis.hpp"
#include "codedtof/codegen.hpp"
#include "codedtof/model.hpp"
#include "codedtof/recovery.hpp"
#include "codedtof/shifts.hpp"

namespace codedtof::io {

// --- JSON documents -------------------------------------------------------

CameraConfig load_config(const std::filesystem::path& path);
void save_config(const CameraConfig& config, const std::filesystem::path& path);

// {"rows": int, "cols": int, "data": [row-major numbers]}
SensingMatrix load_matrix(const std::filesystem::path& path, double dt_ns = 0.0);
void save_matrix(const SensingMatrix& a, const std::filesystem::path& path);

ShiftVector load_shifts(const std::filesystem::path& path);
void save_shifts(const ShiftVector& shifts, const std::filesystem::path& path);

// --- Code text format: one 0/1 string per row -----------------------------

BinaryCodeMatrix load_codes(const std::filesystem::path& path);
void save_codes(const BinaryCodeMatrix& codes,
                const std::filesystem::path& path);

// --- CSV exports -----------------------------------------------------------

void save_trajectory_csv(const ShiftResult& result,
                         const std::filesystem::path& path);
void save_gcomb_trace_csv(const std::vector<GCombTraceRow>& trace,
                          const std::filesystem::path& path);
void save_histogram_csv(const Histogram& hist,
                        const std::filesystem::path& path);
void save_sweep_csv(const SweepResult& sweep,
                    const std::filesystem::path& path);
void save_trials_csv(const TrialStats& stats,
                     const std::filesystem::path& path);
void save_kernel_csv(const Kernel& kernel, const std::filesystem::path& path);

// --- Run manifest ----------------------------------------------------------

// Non-cryptographic content digest (64-bit FNV-1a over the file bytes,
// lower-case hex). Used to make reruns comparable, not to authenticate.
std::string digest_file(const std::filesystem::path& path);

struct RunManifest {
  std::string version;
  std::string command;
  std::string config_json;  // resolved config document, empty if none
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;   // path -> digest
  std::map<std::string, std::string> outputs;  // path -> digest
  std::map<std::string, std::int64_t> timings_ms;
};

void save_manifest(const RunManifest& manifest,
                   const std::filesystem::path& path);

}  // namespace codedtof::io
