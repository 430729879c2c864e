#include <openssl/sha.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "plab/errors.hpp"
#include "plab/lab.hpp"
#include "plab/parallel.hpp"

namespace plab::lab {

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + p.string());
  f << text;
  if (!f) throw ArgumentError("write failed for " + p.string());
}

}  // namespace

std::string render_csv(const std::vector<ReportRow>& rows) {
  std::string out = kCsvHeader;
  for (const auto& r : rows) {
    out += r.experiment + ',' + number(r.x) + ',' + r.params + ',' + r.metric + ',' + number(r.value) + ',';
    if (r.bound) out += number(*r.bound);
    out += '\n';
  }
  return out;
}

std::string content_hash(const std::string& bytes) {
  const std::string blob = "blob " + std::to_string(bytes.size()) + '\0' + bytes;
  unsigned char md[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), md);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (const unsigned char c : md) {
    s += hex[c >> 4];
    s += hex[c & 15];
  }
  return s;
}

RunOutput run(const nlohmann::json& config, const std::optional<std::filesystem::path>& out_override) {
  const ExperimentConfig cfg = ExperimentConfig::from_json(config);
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out;
  out.rows = run_experiment(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path dir = out_override ? *out_override : std::filesystem::path(cfg.output);
  std::filesystem::create_directories(dir);
  out.csv = dir / "report.csv";
  out.summary = dir / "summary.json";
  const std::string csv = render_csv(out.rows);
  write_file(out.csv, csv);

  nlohmann::json timings = nlohmann::json::array();
  for (const auto& r : out.rows) {
    timings.push_back({{"metric", r.metric}, {"x", r.x}, {"params", r.params}, {"wall_seconds", r.wall_seconds}});
  }
  const nlohmann::json summary{
      {"format", "progression-lab summary v1"},
      {"experiment", cfg.id},
      {"kind", cfg.kind},
      {"config", config},
      {"config_hash", content_hash(config.dump())},
      {"report_hash", content_hash(csv)},
      {"rows", out.rows.size()},
      {"workers", worker_count()},
      {"wall_seconds", wall},
      {"row_timings", timings},
      {"finished_utc", utc_now()},
  };
  write_file(out.summary, summary.dump(2) + "\n");
  return out;
}

}  // namespace plab::lab
