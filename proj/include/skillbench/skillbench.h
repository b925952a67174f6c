/*
 * C interface to the skillbench inference and benchmark engine.
 *
 * Objects are opaque handles created by sb_*_create/sb_*_load and released
 * with the matching sb_*_destroy. Every fallible call returns an sb_status;
 * on failure sb_last_error() describes the problem for the calling thread
 * until the next failing call on that thread.
 */
#ifndef SKILLBENCH_H
#define SKILLBENCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SKILLBENCH_BUILD)
#    define SB_API __declspec(dllexport)
#  else
#    define SB_API __declspec(dllimport)
#  endif
#else
#  define SB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sb_status {
  SB_OK = 0,
  SB_ERR_ARGUMENT = 1,
  SB_ERR_BOUNDS = 2,
  SB_ERR_DATA = 3,
  SB_ERR_PARSE = 4,
  SB_ERR_CONFIG = 5,
  SB_ERR_IO = 6,
  SB_ERR_MISSING_BACKEND = 7,
  SB_ERR_BACKEND_LOAD = 8,
  SB_ERR_SHAPE_MISMATCH = 9,
  SB_ERR_UNSUPPORTED_OPERATOR = 10,
  SB_ERR_BACKEND_FAILURE = 11,
  SB_ERR_DOMAIN = 12,
  SB_ERR_INTERNAL = 13,
  /* The command ran but some frames failed. */
  SB_ERR_PARTIAL = 14
} sb_status;

SB_API const char* sb_version(void);
SB_API const char* sb_status_string(sb_status status);
SB_API const char* sb_last_error(void);

/* Process exit code for a status: 0 ok, 1 partial, 2 user/config, 3 backend/environment. */
SB_API int sb_exit_code(sb_status status);

/* ---- rasters ------------------------------------------------------------ */

typedef struct sb_frame sb_frame;

typedef struct sb_region {
  int x0, y0; /* inclusive */
  int x1, y1; /* exclusive */
} sb_region;

/* Copies width*height*3 bytes of row-major RGB. */
SB_API sb_status sb_frame_create(int width, int height, const uint8_t* rgb, sb_frame** out);
SB_API sb_status sb_frame_load(const char* path, sb_frame** out);
SB_API sb_status sb_frame_save_png(const sb_frame* frame, const char* path);
SB_API void sb_frame_destroy(sb_frame* frame);

SB_API int sb_frame_width(const sb_frame* frame);
SB_API int sb_frame_height(const sb_frame* frame);
SB_API const uint8_t* sb_frame_pixels(const sb_frame* frame);

SB_API sb_status sb_frame_crop(const sb_frame* frame, sb_region region, sb_frame** out);
SB_API sb_status sb_frame_resize(const sb_frame* frame, int width, int height, sb_frame** out);

/* Colormapped render of width*height relative depth values. */
SB_API sb_status sb_render_depth(int width, int height, const double* values, sb_frame** out);

/* ---- foreground selection ----------------------------------------------- */

typedef struct sb_detection {
  double x0, y0, x1, y1;
  double confidence;
} sb_detection;

typedef struct sb_selection_config {
  double conf_weight;
  double area_weight;
  double min_area_fraction;
  double fallback_scale;
  double enlarge_max;
  double enlarge_min;
  double detector_conf_threshold;
} sb_selection_config;

typedef struct sb_selection_outcome {
  sb_region region;
  int detected;        /* 0 when the center-crop fallback was used */
  double score;        /* valid when detected */
  int64_t chosen;      /* index of the winning detection, -1 on fallback */
} sb_selection_outcome;

SB_API void sb_selection_config_default(sb_selection_config* cfg);

SB_API sb_status sb_score_detection(const sb_detection* detection, int frame_w, int frame_h,
                                    const sb_selection_config* cfg, double* out);
SB_API sb_status sb_select_primary(const sb_detection* detections, size_t count, int frame_w,
                                   int frame_h, const sb_selection_config* cfg,
                                   sb_selection_outcome* out);
SB_API sb_status sb_fallback_center_crop(int frame_w, int frame_h, const sb_selection_config* cfg,
                                         sb_region* out);
SB_API sb_status sb_enlarge_box(sb_region box, int frame_w, int frame_h,
                                const sb_selection_config* cfg, sb_region* out);

/* ---- metrics ------------------------------------------------------------ */

SB_API sb_status sb_compute_waitt(double accuracy, double inference_time_s, double alpha,
                                  double gamma, double* out);

/* ---- configuration and commands ----------------------------------------- */

typedef struct sb_config sb_config;

/* A config holding the default constants and no backends. */
SB_API sb_status sb_config_create(sb_config** out);
/* Parses a JSON config file; relative paths resolve against its directory. */
SB_API sb_status sb_config_load(const char* path, sb_config** out);
SB_API void sb_config_destroy(sb_config* config);

SB_API sb_status sb_config_set_approach(sb_config* config, const char* approach);
SB_API sb_status sb_config_set_manifest(sb_config* config, const char* path);
SB_API sb_status sb_config_set_output_dir(sb_config* config, const char* path);
SB_API sb_status sb_config_set_workers(sb_config* config, int workers);
SB_API sb_status sb_config_set_fail_fast(sb_config* config, int enabled);
SB_API sb_status sb_config_use_mock_backends(sb_config* config);
SB_API sb_status sb_config_set_supplied_accuracy(sb_config* config, double accuracy);

/* JSON snapshot of the effective config. Release with sb_string_free. */
SB_API sb_status sb_config_snapshot(const sb_config* config, char** out);
SB_API void sb_string_free(char* s);

typedef struct sb_run_summary {
  size_t frames;   /* frames processed successfully */
  size_t failures; /* per-frame failures */
  int exit_code;
} sb_run_summary;

/* Runs "classify", "eval", "bench", "extract-patches" or "render-depth".
 * `out` may be NULL. Returns SB_ERR_PARTIAL when some frames failed. */
SB_API sb_status sb_run_command(const sb_config* config, const char* command, sb_run_summary* out);

/* Reads SKILLBENCH_LOG_LEVEL. */
SB_API void sb_init_logging(void);

#ifdef __cplusplus
}
#endif

#endif /* SKILLBENCH_H */
