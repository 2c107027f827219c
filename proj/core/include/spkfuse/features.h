// spkfuse/features.h

// Copyright 2026  The spkfuse Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKFUSE_FEATURES_H_
#define SPKFUSE_FEATURES_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spkfuse/matrix.h"
#include "spkfuse/trial_io.h"

namespace spkfuse {

/// Mono PCM audio normalized to [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 16000;
};

struct FeatureConfig {
  int sample_rate = 16000;
  std::size_t win_length = 400;  // 25 ms at 16 kHz
  std::size_t hop_length = 160;  // 10 ms at 16 kHz
  std::size_t nfft = 512;
  std::size_t n_mels = 64;
  double f_min = 20.0;
  double f_max = 7600.0;
  double log_floor = 1e-10;
};

/// T x n_mels log filterbank energies.
struct FeatureMatrix {
  Matrix frames;
  double frame_shift = 0.01;  // seconds
  std::size_t n_mels() const noexcept { return frames.cols(); }
  std::size_t num_frames() const noexcept { return frames.rows(); }
};

/// w[n] = 0.54 - 0.46 cos(2 pi n / (N - 1)).
std::vector<double> hamming_window(std::size_t n);

/// Number of full frames: floor((len - win) / hop) + 1.
std::size_t num_frames(std::size_t num_samples, std::size_t win,
                       std::size_t hop);

/// Frame t covers samples [t * hop, t * hop + win).
std::vector<std::vector<double>> frame_signal(const AudioSignal &sig,
                                              std::size_t win = 400,
                                              std::size_t hop = 160);

/// |DFT_k|^2 of the zero-padded frame for k = 0 .. nfft/2.
std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::size_t nfft);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// n_mels x (nfft/2 + 1) triangular filters. Filter m rises from edge m to
/// its peak at edge m+1 and falls to edge m+2, where the n_mels + 2 edges
/// are equally spaced on the mel scale between f_min and f_max.
Matrix mel_filterbank_matrix(std::size_t n_mels, std::size_t nfft,
                             int sample_rate, double f_min, double f_max);

FeatureMatrix log_mel(const AudioSignal &sig,
                      const FeatureConfig &config = {});

/// Reads a RIFF/WAVE file holding 16-bit PCM mono audio.
AudioSignal read_wav(const std::string &path);
AudioSignal parse_wav(std::string_view bytes);

/// Encodes samples as 16-bit PCM mono (values clipped to [-1, 1)).
std::string encode_wav(const AudioSignal &sig);

/// Converts features to the embedding layout: one vector per frame, all
/// stored under `id`.
void append_features(EmbeddingSet &out, const std::string &id,
                     const FeatureMatrix &features);

}  // namespace spkfuse

#endif  // SPKFUSE_FEATURES_H_
