#ifndef SPIKEINFO_H
#define SPIKEINFO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SPK_TASK_FREQUENCY 0

#define SPK_TASK_AMPLITUDE 1

typedef enum {
  SPK_STATUS_OK = 0,
  SPK_STATUS_NULL_POINTER = 1,
  SPK_STATUS_INVALID_PARAMETER = 2,
  SPK_STATUS_DEGENERATE_INPUT = 3,
  SPK_STATUS_DATA_ERROR = 4,
  SPK_STATUS_FORMAT_ERROR = 5,
  SPK_STATUS_IO_ERROR = 6,
  SPK_STATUS_BUFFER_SIZE = 7,
  SPK_STATUS_PANIC = 8,
} SpkStatus;

// Cochleagram handle.
typedef struct SpkCochleagram SpkCochleagram;

// Evaluation result handle.
typedef struct SpkResult SpkResult;

// Spike matrix handle.
typedef struct SpkSpikes SpkSpikes;

// Scalar part of an evaluation result.
typedef struct {
  double efficiency;
  double spike_density;
  double coding_power_bits;
  double entropy_bits;
  double shuffle_error;
  int64_t argmax_delay_frames;
} SpkSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *spk_version(void);

// Message for the most recent failure on this thread, or an empty string.
// The pointer stays valid until the next call into this library on the same thread.
const char *spk_last_error(void);

// Computes the stimulus and cochleagram of trial 0 for `seed`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
SpkStatus spk_cochleagram_generate(uint32_t task,
                                   double duration_s,
                                   uint64_t seed,
                                   SpkCochleagram **out);

// Reads a cochleagram from the binary cache format.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
SpkStatus spk_cochleagram_read(const char *path, SpkCochleagram **out);

// Writes a cochleagram in the binary cache format.
//
// # Safety
// `handle` must be a live cochleagram handle and `path` a NUL-terminated string.
SpkStatus spk_cochleagram_write(const SpkCochleagram *handle, const char *path);

// Number of channels, or 0 for a null handle.
//
// # Safety
// `handle` must be null or a live cochleagram handle.
size_t spk_cochleagram_channels(const SpkCochleagram *handle);

// Number of frames, or 0 for a null handle.
//
// # Safety
// `handle` must be null or a live cochleagram handle.
size_t spk_cochleagram_frames(const SpkCochleagram *handle);

// Copies one channel into `buf`, which must hold exactly `frames` values.
//
// # Safety
// `handle` must be live and `buf` must point to `len` writable floats.
SpkStatus spk_cochleagram_copy_row(const SpkCochleagram *handle,
                                   size_t channel,
                                   float *buf,
                                   size_t len);

// # Safety
// `handle` must be null or a handle not yet freed.
void spk_cochleagram_free(SpkCochleagram *handle);

// Encodes every channel with `encoder`, given as JSON or as e.g. `lif(tau=2,theta=1.3)`.
//
// # Safety
// `handle` must be live, `encoder` NUL-terminated and `out` writable.
SpkStatus spk_encode(const SpkCochleagram *handle,
                     const char *encoder,
                     uint64_t seed,
                     SpkSpikes **out);

// Encodes a single signal of `n` values into `out` (`n` entries of -1, 0 or +1).
//
// # Safety
// `z` must point to `n` readable doubles and `out` to `n` writable bytes.
SpkStatus spk_encode_signal(const double *z,
                            size_t n,
                            const char *encoder,
                            uint64_t seed,
                            int8_t *out);

// # Safety
// `handle` must be null or a live spike handle.
size_t spk_spikes_channels(const SpkSpikes *handle);

// # Safety
// `handle` must be null or a live spike handle.
size_t spk_spikes_frames(const SpkSpikes *handle);

// Mean absolute spike value over all channels and frames.
//
// # Safety
// `handle` must be live and `out` writable.
SpkStatus spk_spikes_density(const SpkSpikes *handle, double *out);

// Copies the row-major spike values; `len` must equal channels x frames.
//
// # Safety
// `handle` must be live and `buf` must point to `len` writable bytes.
SpkStatus spk_spikes_copy(const SpkSpikes *handle, int8_t *buf, size_t len);

// # Safety
// `handle` must be null or a handle not yet freed.
void spk_spikes_free(SpkSpikes *handle);

// Runs the full pipeline for trial 0 of `seed`.
//
// # Safety
// `encoder` must be NUL-terminated and `out` writable.
SpkStatus spk_evaluate(uint32_t task,
                       double duration_s,
                       uint64_t seed,
                       const char *encoder,
                       SpkResult **out);

// # Safety
// `handle` must be live and `out` writable.
SpkStatus spk_result_summary(const SpkResult *handle, SpkSummary *out);

// Number of delays in the MI curve, or 0 for a null handle.
//
// # Safety
// `handle` must be null or a live result handle.
size_t spk_result_curve_len(const SpkResult *handle);

// Copies the curve's delays (frames) and bias-corrected MI (bits).
//
// # Safety
// `handle` must be live; `delays` and `mi_bits` must each hold `len` writable values.
SpkStatus spk_result_copy_curve(const SpkResult *handle,
                                int64_t *delays,
                                double *mi_bits,
                                size_t len);

// # Safety
// `handle` must be null or a handle not yet freed.
void spk_result_free(SpkResult *handle);

// Plug-in mutual information in bits between two aligned symbol sequences.
//
// # Safety
// `x` and `w` must each point to `n` readable values; `out` must be writable.
SpkStatus spk_plugin_mi(const uint32_t *x, const uint32_t *w, size_t n, double *out);

// Derives the seed of a named stream, as used for trials and encoders.
//
// # Safety
// `tag` must be NUL-terminated.
uint64_t spk_derive_seed(uint64_t seed, const char *tag);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPIKEINFO_H */
