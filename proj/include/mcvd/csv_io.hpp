#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mcvd/engine.hpp"

namespace mcvd {

/// Shortest-safe decimal form: 17 significant digits, round-trips exactly.
std::string format_double(double value);

/// Key/value pairs echoed on the first line of every data file as
/// "# key=value key=value ...".
using FileMetadata = std::map<std::string, std::string>;

FileMetadata config_metadata(const SimulationConfig& cfg);

/// Streams hit rows to disk with a fixed column order. Throws IoError.
class HitsWriter {
 public:
  HitsWriter(const std::filesystem::path& path, const FileMetadata& meta);
  void write(const HitRecord& hit);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

inline constexpr const char* kHitsHeader =
    "molecule_id,step,time_s,x_um,y_um,r_um,theta_rad,in_region";
inline constexpr const char* kTimeseriesHeader =
    "time_s,cum_hits_full,cum_hits_region,analytic_full,analytic_region";

void write_hits_csv(const std::filesystem::path& path, const FileMetadata& meta,
                    std::span<const HitRecord> hits);

void write_timeseries_csv(const std::filesystem::path& path, const FileMetadata& meta,
                          const SimulationResult& result);

struct HitsFile {
  FileMetadata meta;
  std::vector<HitRecord> hits;
};

/// Reads a hits file written by write_hits_csv. Throws IoError on a missing
/// file and ConfigError on malformed content.
HitsFile read_hits_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mcvd
