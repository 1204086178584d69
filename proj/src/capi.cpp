#include "kodaira/kodaira.h"

#include "kodaira/instance.hpp"

#include <fstream>
#include <map>
#include <new>
#include <sstream>

using namespace kodaira;

struct kd_instance {
  InstanceFile file;
};

struct kd_result {
  RunResult run;
  std::map<std::pair<int, int>, std::string> rendered;
  std::optional<std::string> polytopes;
};

namespace {

thread_local std::string last_error;

kd_status fail(kd_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <class F>
kd_status guarded(F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    return fail(KD_INPUT_ERROR, e.what());
  } catch (const DegenerateError& e) {
    return fail(KD_DEGENERATE, e.what());
  } catch (const CrossCheckError& e) {
    return fail(KD_CROSS_CHECK, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KD_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(KD_INTERNAL_ERROR, e.what());
  }
}

}  // namespace

extern "C" {

const char* kd_version(void) { return "0.1.0"; }

const char* kd_schema_version(void) { return kSchemaVersion; }

void kd_options_init(kd_options* opts) {
  if (!opts) return;
  *opts = kd_options{0, 0, 0, 0, 1};
}

const char* kd_last_error(void) { return last_error.c_str(); }

kd_status kd_instance_parse(const char* text, size_t len, kd_instance** out) {
  if (!text || !out) return fail(KD_INPUT_ERROR, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto inst = std::make_unique<kd_instance>();
    inst->file = parse_instance(std::string(text, len));
    *out = inst.release();
    return KD_OK;
  });
}

kd_status kd_instance_load(const char* path, kd_instance** out) {
  if (!path || !out) return fail(KD_INPUT_ERROR, "null argument");
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(KD_INPUT_ERROR, std::string("cannot read ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const kd_status s = kd_instance_parse(text.data(), text.size(), out);
  if (s != KD_OK) last_error = std::string(path) + ": " + last_error;
  return s;
}

void kd_instance_free(kd_instance* inst) { delete inst; }

const char* kd_instance_id(const kd_instance* inst) { return inst ? inst->file.id.c_str() : ""; }

const char* kd_instance_kind(const kd_instance* inst) { return inst ? inst->file.kind.c_str() : ""; }

int kd_instance_format(const kd_instance* inst) {
  if (!inst || !inst->file.options.format) return -1;
  switch (*inst->file.options.format) {
    case Format::text: return KD_FORMAT_TEXT;
    case Format::json: return KD_FORMAT_JSON;
    case Format::csv: return KD_FORMAT_CSV;
  }
  return -1;
}

kd_status kd_run(const kd_instance* inst, const kd_options* opts, kd_result** out) {
  if (!inst || !out) return fail(KD_INPUT_ERROR, "null argument");
  *out = nullptr;
  kd_options o;
  kd_options_init(&o);
  if (opts) o = *opts;
  if (o.max_degree < 0) return fail(KD_INPUT_ERROR, "degree bound must be positive");
  if (o.stride < 0) return fail(KD_INPUT_ERROR, "stride must be positive");
  return guarded([&] {
    RunSettings s;
    if (o.max_degree > 0) s.max_degree = o.max_degree;
    if (o.stride > 0) s.stride = o.stride;
    s.unclamped = o.unclamped != 0;
    s.timestamps = o.timestamps != 0;
    s.jobs = o.jobs ? o.jobs : 1;
    auto res = std::make_unique<kd_result>();
    res->run = run_instance(inst->file, s);
    const auto status = static_cast<kd_status>(res->run.exit_code);
    if (res->run.report.contains("error")) last_error = res->run.report["error"].get<std::string>();
    *out = res.release();
    return status;
  });
}

kd_status kd_result_from_error(const char* message, kd_result** out) {
  if (!out) return fail(KD_INPUT_ERROR, "null argument");
  return guarded([&] {
    auto res = std::make_unique<kd_result>();
    res->run = input_failure(message ? message : "");
    *out = res.release();
    return KD_INPUT_ERROR;
  });
}

kd_status kd_result_status(const kd_result* res) {
  return res ? static_cast<kd_status>(res->run.exit_code) : KD_INPUT_ERROR;
}

const char* kd_result_render(kd_result* res, kd_format format, int color) {
  if (!res) return "";
  const auto key = std::make_pair(static_cast<int>(format), color ? 1 : 0);
  auto it = res->rendered.find(key);
  if (it == res->rendered.end()) {
    Format f = Format::json;
    if (format == KD_FORMAT_TEXT) f = Format::text;
    if (format == KD_FORMAT_CSV) f = Format::csv;
    it = res->rendered.emplace(key, render(res->run, f, color != 0)).first;
  }
  return it->second.c_str();
}

const char* kd_result_polytopes(kd_result* res) {
  if (!res) return "";
  if (!res->polytopes) res->polytopes = export_polytopes(res->run);
  return res->polytopes->c_str();
}

void kd_result_free(kd_result* res) { delete res; }

}  // extern "C"
