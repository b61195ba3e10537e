#include "mcvd/csv_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "mcvd/channel.hpp"
#include "mcvd/errors.hpp"

namespace mcvd {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

FileMetadata config_metadata(const SimulationConfig& cfg) {
  return {
      {"D", format_double(cfg.diffusion)},
      {"dt", format_double(cfg.dt)},
      {"rv", format_double(cfg.rv)},
      {"d", format_double(cfg.distance)},
      {"n_tx", std::to_string(cfg.n_tx)},
      {"duration_s", format_double(cfg.duration)},
      {"strategy", std::string(to_string(cfg.strategy))},
      {"region", describe_region(cfg.region)},
      {"seed", std::to_string(cfg.seed)},
      {"max_bounces", std::to_string(cfg.max_bounces)},
  };
}

namespace {

std::string metadata_line(const FileMetadata& meta) {
  std::string line = "#";
  for (const auto& [key, value] : meta) line += " " + key + "=" + value;
  return line;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

HitsWriter::HitsWriter(const std::filesystem::path& path, const FileMetadata& meta)
    : path_(path), out_(open_for_write(path)) {
  out_ << metadata_line(meta) << '\n' << kHitsHeader << '\n';
}

void HitsWriter::write(const HitRecord& h) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%" PRIu64 ",%" PRIu64 ",%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                h.molecule_id, h.step, h.time, h.x, h.y, h.r, h.theta, h.in_region ? 1 : 0);
  out_ << buf;
}

void HitsWriter::close() {
  finish(out_, path_);
  out_.close();
}

void write_hits_csv(const std::filesystem::path& path, const FileMetadata& meta,
                    std::span<const HitRecord> hits) {
  HitsWriter writer(path, meta);
  for (const auto& h : hits) writer.write(h);
  writer.close();
}

void write_timeseries_csv(const std::filesystem::path& path, const FileMetadata& meta,
                          const SimulationResult& result) {
  const auto& cfg = result.config;
  const double n = static_cast<double>(cfg.n_tx);
  const double phi = coverage_fraction(cfg.region, cfg.rv);
  std::ofstream out = open_for_write(path);
  out << metadata_line(meta) << '\n' << kTimeseriesHeader << '\n';
  char buf[256];
  for (const auto& p : result.cumulative) {
    std::snprintf(buf, sizeof buf, "%.17g,%" PRIu64 ",%" PRIu64 ",%.17g,%.17g\n", p.time, p.full,
                  p.region, analytic_fhit(p.time, n, cfg.distance, cfg.diffusion, 1.0),
                  analytic_fhit(p.time, n, cfg.distance, cfg.diffusion, phi));
    out << buf;
  }
  finish(out, path);
}

namespace {

[[noreturn]] void bad_line(const std::filesystem::path& path, std::size_t line, const std::string& why) {
  throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

HitsFile read_hits_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  HitsFile file;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string token;
      while (is >> token) {
        const auto eq = token.find('=');
        if (eq != std::string::npos) file.meta[token.substr(0, eq)] = token.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      if (line != kHitsHeader) bad_line(path, line_no, "unexpected header row");
      header_seen = true;
      continue;
    }
    HitRecord h;
    int in_region = 0;
    int consumed = 0;
    const int fields = std::sscanf(line.c_str(), "%" SCNu64 ",%" SCNu64 ",%lf,%lf,%lf,%lf,%lf,%d%n",
                                   &h.molecule_id, &h.step, &h.time, &h.x, &h.y, &h.r, &h.theta,
                                   &in_region, &consumed);
    if (fields != 8 || static_cast<std::size_t>(consumed) != line.size())
      bad_line(path, line_no, "expected 8 comma-separated fields");
    h.in_region = in_region != 0;
    file.hits.push_back(h);
  }
  if (!header_seen) bad_line(path, line_no, "missing header row");
  return file;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_for_write(path);
  out << text;
  finish(out, path);
}

}  // namespace mcvd
