#include "kodaira/kodaira.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Flags {
  std::int64_t max_degree = 0;
  std::int64_t stride = 0;
  std::string format;
  std::string export_path;
  std::string out_path;
  unsigned jobs = 1;
  bool timestamps = false;
  bool unclamped = false;
};

kd_options options_of(const Flags& f) {
  kd_options o;
  kd_options_init(&o);
  o.max_degree = f.max_degree;
  o.stride = f.stride;
  o.unclamped = f.unclamped;
  o.timestamps = f.timestamps;
  o.jobs = f.jobs;
  return o;
}

kd_format format_of(const std::string& s, int file_format) {
  if (s == "text") return KD_FORMAT_TEXT;
  if (s == "csv") return KD_FORMAT_CSV;
  if (s == "json") return KD_FORMAT_JSON;
  if (file_format >= 0) return static_cast<kd_format>(file_format);
  return KD_FORMAT_JSON;
}

bool use_color(const Flags& f) {
  return f.out_path.empty() && std::getenv("NO_COLOR") == nullptr && isatty(fileno(stdout));
}

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) std::cerr << "kodaira: cannot write " << path << "\n";
  return static_cast<bool>(out);
}

int emit(kd_result* res, kd_format fmt, const Flags& f) {
  const int status = kd_result_status(res);
  const std::string text = kd_result_render(res, fmt, fmt == KD_FORMAT_TEXT && use_color(f));
  bool ok = write_text(f.out_path, text);
  if (!f.export_path.empty()) ok = write_text(f.export_path, kd_result_polytopes(res)) && ok;
  kd_result_free(res);
  if (!ok) return KD_INPUT_ERROR;
  return status;
}

int run_single(const std::string& path, const char* expected_kind, const Flags& f) {
  kd_instance* inst = nullptr;
  if (kd_instance_load(path.c_str(), &inst) != KD_OK) {
    const std::string msg = kd_last_error();
    std::cerr << "kodaira: " << msg << "\n";
    kd_result* res = nullptr;
    kd_result_from_error(msg.c_str(), &res);
    return emit(res, format_of(f.format, -1), f);
  }
  const kd_format fmt = format_of(f.format, kd_instance_format(inst));
  if (std::string(kd_instance_kind(inst)) != expected_kind) {
    const std::string msg = path + ": expected kind '" + expected_kind + "', found '" + kd_instance_kind(inst) + "'";
    kd_instance_free(inst);
    std::cerr << "kodaira: " << msg << "\n";
    kd_result* res = nullptr;
    kd_result_from_error(msg.c_str(), &res);
    return emit(res, fmt, f);
  }
  const kd_options o = options_of(f);
  kd_result* res = nullptr;
  const kd_status s = kd_run(inst, &o, &res);
  kd_instance_free(inst);
  if (!res) {
    std::cerr << "kodaira: " << kd_last_error() << "\n";
    return s;
  }
  if (s != KD_OK && s != KD_VERDICT_FAILED) std::cerr << "kodaira: " << kd_last_error() << "\n";
  return emit(res, fmt, f);
}

struct FileOutcome {
  std::string file;
  std::string id;
  std::string kind;
  int exit_code = 0;
  std::string error;
  Json max_degree;
};

FileOutcome run_suite_file(const fs::path& p, const kd_options& o) {
  FileOutcome r;
  r.file = p.filename().string();
  kd_instance* inst = nullptr;
  if (kd_instance_load(p.string().c_str(), &inst) != KD_OK) {
    r.exit_code = KD_INPUT_ERROR;
    r.error = kd_last_error();
    return r;
  }
  r.id = kd_instance_id(inst);
  r.kind = kd_instance_kind(inst);
  kd_result* res = nullptr;
  const kd_status s = kd_run(inst, &o, &res);
  kd_instance_free(inst);
  r.exit_code = s;
  if (res) {
    const Json report = Json::parse(kd_result_render(res, KD_FORMAT_JSON, 0));
    r.max_degree = report.value("max_degree", Json(nullptr));
    if (report.contains("error")) r.error = report["error"].get<std::string>();
    kd_result_free(res);
  } else {
    r.error = kd_last_error();
  }
  return r;
}

int verify_suite(const std::string& dir, const Flags& f) {
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) {
    std::cerr << "kodaira: cannot read directory " << dir << ": " << ec.message() << "\n";
    return KD_INPUT_ERROR;
  }
  std::vector<fs::path> files;
  for (; it != fs::directory_iterator(); it.increment(ec)) {
    if (ec) {
      std::cerr << "kodaira: cannot read directory " << dir << ": " << ec.message() << "\n";
      return KD_INPUT_ERROR;
    }
    if (it->is_regular_file() && it->path().extension() == ".json") files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());

  // Instances run in parallel across files; inside a file they stay serial.
  kd_options o = options_of(f);
  o.jobs = 1;
  std::vector<FileOutcome> outcomes(files.size());
  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(f.jobs, files.size()));
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < files.size(); i += jobs) outcomes[i] = run_suite_file(files[i], o);
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }

  Json summary;
  summary["schema_version"] = kd_schema_version();
  summary["directory"] = dir;
  summary["max_degree"] = f.max_degree > 0 ? Json(f.max_degree) : Json("per file");
  summary["unclamped"] = f.unclamped;
  std::size_t passed = 0;
  Json rows = Json::array();
  for (const auto& r : outcomes) {
    passed += r.exit_code == KD_OK;
    rows.push_back({{"file", r.file},
                    {"id", r.id},
                    {"kind", r.kind},
                    {"exit_code", r.exit_code},
                    {"passed", r.exit_code == KD_OK},
                    {"max_degree", r.max_degree},
                    {"error", r.error}});
  }
  Json warnings = Json::array();
  if (files.empty()) {
    warnings.push_back("no instance files in " + dir);
    std::cerr << "kodaira: warning: no instance files in " << dir << "\n";
  }
  summary["ran"] = outcomes.size();
  summary["passed"] = passed;
  summary["failed"] = outcomes.size() - passed;
  summary["warnings"] = warnings;
  summary["files"] = rows;
  if (f.timestamps) {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    summary["generated_at"] = buf;
  }

  std::string text;
  const kd_format fmt = format_of(f.format, -1);
  if (fmt == KD_FORMAT_JSON) {
    text = summary.dump(2) + "\n";
  } else if (fmt == KD_FORMAT_CSV) {
    text = "file,id,kind,exit_code,passed\n";
    for (const auto& r : outcomes)
      text += r.file + "," + r.id + "," + r.kind + "," + std::to_string(r.exit_code) + "," +
              (r.exit_code == KD_OK ? "true" : "false") + "\n";
  } else {
    const bool color = use_color(f);
    for (const auto& r : outcomes) {
      std::string mark = r.exit_code == KD_OK ? "PASS" : "FAIL";
      if (color) mark = (r.exit_code == KD_OK ? "\033[32m" : "\033[31m") + mark + "\033[0m";
      text += mark + " " + r.file + " (exit " + std::to_string(r.exit_code) + ")";
      if (!r.error.empty()) text += ": " + r.error;
      text += "\n";
    }
    text += "ran " + std::to_string(outcomes.size()) + ", passed " + std::to_string(passed) + ", failed " +
            std::to_string(outcomes.size() - passed) + "\n";
  }
  if (!write_text(f.out_path, text)) return KD_INPUT_ERROR;
  return passed == outcomes.size() ? KD_OK : KD_VERDICT_FAILED;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kodaira-type dimensions on toric varieties, curves and fibrations"};
  app.set_version_flag("--version", kd_version());
  app.require_subcommand(1);

  Flags f;
  app.add_option("--max-degree", f.max_degree, "Degree bound K (default 24, or the file's options)")
      ->check(CLI::PositiveNumber);
  app.add_option("--stride", f.stride, "Check kappa_sigma on degrees divisible by a")->check(CLI::PositiveNumber);
  app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--export-polytope", f.export_path, "Write polytope vertex lists (nOFF) to PATH");
  app.add_option("--out", f.out_path, "Write the report to PATH instead of stdout");
  app.add_option("--jobs", f.jobs, "Parallel instances")->check(CLI::Range(1u, 256u));
  app.add_flag("--timestamps", f.timestamps, "Include the generation time in reports");
  app.add_flag("--unclamped", f.unclamped)->group("");

  std::string file;
  auto* semigroup = app.add_subcommand("semigroup", "Regularization, Okounkov body and growth law");
  semigroup->add_option("file", file, "Instance file")->required();
  auto* kappa = app.add_subcommand("kappa", "Kodaira-type dimensions of a toric divisor with metric");
  kappa->add_option("file", file, "Instance file")->required();
  auto* fibration = app.add_subcommand("fibration", "Verdicts on a fiber space");
  fibration->add_option("file", file, "Instance file")->required();
  auto* multiplier = app.add_subcommand("multiplier", "Multiplier coefficient scan");
  multiplier->add_option("file", file, "Instance file")->required();
  std::string dir;
  auto* suite = app.add_subcommand("verify-suite", "Run every instance file in a directory");
  suite->add_option("directory", dir, "Directory of instance files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : KD_INPUT_ERROR;
  }

  if (semigroup->parsed()) return run_single(file, "semigroup", f);
  if (kappa->parsed()) return run_single(file, "toric_kappa", f);
  if (fibration->parsed()) return run_single(file, "fibration", f);
  if (multiplier->parsed()) return run_single(file, "multiplier_scan", f);
  return verify_suite(dir, f);
}
