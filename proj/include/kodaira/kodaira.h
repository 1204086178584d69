#ifndef KODAIRA_KODAIRA_H
#define KODAIRA_KODAIRA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the command-line tool. */
typedef enum kd_status {
  KD_OK = 0,
  KD_VERDICT_FAILED = 1,
  KD_INPUT_ERROR = 2,
  KD_DEGENERATE = 3,
  KD_CROSS_CHECK = 4,
  KD_INTERNAL_ERROR = 5
} kd_status;

typedef enum kd_format { KD_FORMAT_TEXT = 0, KD_FORMAT_JSON = 1, KD_FORMAT_CSV = 2 } kd_format;

typedef struct kd_instance kd_instance;
typedef struct kd_result kd_result;

/* Zero means "take the value from the instance file". */
typedef struct kd_options {
  int64_t max_degree;
  int64_t stride;
  int unclamped; /* test hook: drop the clamp of the multiplier coefficients */
  int timestamps;
  unsigned jobs;
} kd_options;

const char* kd_version(void);
const char* kd_schema_version(void);
void kd_options_init(kd_options* opts);

/* Message of the last failing call on this thread. */
const char* kd_last_error(void);

kd_status kd_instance_parse(const char* text, size_t len, kd_instance** out);
kd_status kd_instance_load(const char* path, kd_instance** out);
void kd_instance_free(kd_instance* inst);
const char* kd_instance_id(const kd_instance* inst);
const char* kd_instance_kind(const kd_instance* inst);
/* Format requested by the file, or -1. */
int kd_instance_format(const kd_instance* inst);

/* Always produces a result unless the arguments are invalid; the return
   value equals kd_result_status of that result. */
kd_status kd_run(const kd_instance* inst, const kd_options* opts, kd_result** out);
/* Result describing a file that could not be parsed. */
kd_status kd_result_from_error(const char* message, kd_result** out);
kd_status kd_result_status(const kd_result* res);
/* Owned by the result. */
const char* kd_result_render(kd_result* res, kd_format format, int color);
const char* kd_result_polytopes(kd_result* res);
void kd_result_free(kd_result* res);

#ifdef __cplusplus
}
#endif

#endif
