// features.cc

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

#include "spkfuse/features.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>

#include "spkfuse/error.h"

namespace spkfuse {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>> &a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Twiddles are evaluated directly rather than by repeated
        // multiplication, which drifts for large transforms.
        const std::complex<double> w =
            std::polar(1.0, ang * static_cast<double>(k));
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

std::uint32_t get_u32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + i]))
         << (8 * i);
  return v;
}

std::uint16_t get_u16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(b[at]) |
      (static_cast<unsigned char>(b[at + 1]) << 8));
}

void put_u32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void put_u16(std::string &out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

std::vector<double> hamming_window(std::size_t n) {
  if (n < 2)
    throw Error(ErrorKind::kInvalidArgument,
                "hamming window needs at least 2 samples");
  std::vector<double> w(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi *
                                  static_cast<double>(i) / denom);
  return w;
}

std::size_t num_frames(std::size_t num_samples, std::size_t win,
                       std::size_t hop) {
  if (win == 0 || hop == 0)
    throw Error(ErrorKind::kInvalidArgument, "window and hop must be positive");
  if (num_samples < win)
    throw Error(ErrorKind::kInvalidArgument,
                "signal of " + std::to_string(num_samples) +
                    " samples is shorter than one window of " +
                    std::to_string(win));
  return (num_samples - win) / hop + 1;
}

std::vector<std::vector<double>> frame_signal(const AudioSignal &sig,
                                              std::size_t win,
                                              std::size_t hop) {
  const std::size_t t = num_frames(sig.samples.size(), win, hop);
  std::vector<std::vector<double>> frames;
  frames.reserve(t);
  for (std::size_t i = 0; i < t; ++i) {
    auto first = sig.samples.begin() + static_cast<std::ptrdiff_t>(i * hop);
    frames.emplace_back(first, first + static_cast<std::ptrdiff_t>(win));
  }
  return frames;
}

std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::size_t nfft) {
  if (!is_power_of_two(nfft))
    throw Error(ErrorKind::kInvalidArgument, "nfft must be a power of two");
  if (nfft < frame.size())
    throw Error(ErrorKind::kInvalidArgument,
                "nfft " + std::to_string(nfft) + " smaller than frame length " +
                    std::to_string(frame.size()));
  std::vector<std::complex<double>> buf(nfft);
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  fft(buf);
  std::vector<double> out(nfft / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(buf[k]);
  return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Matrix mel_filterbank_matrix(std::size_t n_mels, std::size_t nfft,
                             int sample_rate, double f_min, double f_max) {
  if (n_mels == 0)
    throw Error(ErrorKind::kInvalidArgument, "n_mels must be positive");
  if (!is_power_of_two(nfft))
    throw Error(ErrorKind::kInvalidArgument, "nfft must be a power of two");
  if (sample_rate <= 0)
    throw Error(ErrorKind::kInvalidArgument, "sample rate must be positive");
  if (!(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0))
    throw Error(ErrorKind::kInvalidArgument,
                "need 0 <= f_min < f_max <= sample_rate / 2");

  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(n_mels + 1));

  const std::size_t bins = nfft / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) /
                        static_cast<double>(nfft);
  Matrix fb(n_mels, bins);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], peak = edges[m + 1], hi = edges[m + 2];
    bool any = false;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = bin_hz * static_cast<double>(k);
      double w = 0.0;
      if (f > lo && f <= peak)
        w = (f - lo) / (peak - lo);
      else if (f > peak && f < hi)
        w = (hi - f) / (hi - peak);
      fb(m, k) = w;
      any = any || w > 0.0;
    }
    if (!any)
      throw Error(ErrorKind::kInvalidArgument,
                  "mel filter " + std::to_string(m) +
                      " has no FFT bin inside it; increase nfft or reduce "
                      "n_mels");
  }
  return fb;
}

FeatureMatrix log_mel(const AudioSignal &sig, const FeatureConfig &config) {
  if (sig.sample_rate != config.sample_rate)
    throw Error(ErrorKind::kInvalidArgument,
                "sample rate " + std::to_string(sig.sample_rate) +
                    " Hz, expected " + std::to_string(config.sample_rate));
  for (double x : sig.samples)
    if (!std::isfinite(x) || x < -1.0 || x > 1.0)
      throw Error(ErrorKind::kNumerical,
                  "audio samples must be finite and within [-1, 1]");
  if (!(config.log_floor > 0.0))
    throw Error(ErrorKind::kInvalidArgument, "log floor must be positive");

  const std::vector<double> window = hamming_window(config.win_length);
  const Matrix fb = mel_filterbank_matrix(config.n_mels, config.nfft,
                                          config.sample_rate, config.f_min,
                                          config.f_max);
  const auto frames = frame_signal(sig, config.win_length, config.hop_length);

  FeatureMatrix out;
  out.frame_shift = static_cast<double>(config.hop_length) /
                    static_cast<double>(config.sample_rate);
  out.frames = Matrix(frames.size(), config.n_mels);
  std::vector<double> windowed(config.win_length);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    for (std::size_t i = 0; i < windowed.size(); ++i)
      windowed[i] = frames[t][i] * window[i];
    const std::vector<double> power = power_spectrum(windowed, config.nfft);
    for (std::size_t m = 0; m < config.n_mels; ++m) {
      double energy = 0.0;
      auto filt = fb.row(m);
      for (std::size_t k = 0; k < power.size(); ++k)
        energy += filt[k] * power[k];
      out.frames(t, m) = std::log(energy + config.log_floor);
    }
  }
  return out;
}

AudioSignal parse_wav(std::string_view b) {
  if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE")
    throw ParseError(0, "not a RIFF/WAVE file");
  std::size_t pos = 12;
  bool have_fmt = false;
  int sample_rate = 0;
  while (pos + 8 <= b.size()) {
    std::string_view id = b.substr(pos, 4);
    std::uint32_t size = get_u32(b, pos + 4);
    std::size_t body = pos + 8;
    if (size > b.size() - body)
      throw ParseError(0, "truncated WAV chunk '" + std::string(id) + "'");
    if (id == "fmt ") {
      if (size < 16) throw ParseError(0, "WAV fmt chunk too short");
      const std::uint16_t tag = get_u16(b, body);
      const std::uint16_t channels = get_u16(b, body + 2);
      sample_rate = static_cast<int>(get_u32(b, body + 4));
      const std::uint16_t bits = get_u16(b, body + 14);
      if (tag != 1) throw ParseError(0, "WAV is not PCM");
      if (channels != 1)
        throw ParseError(0, "WAV has " + std::to_string(channels) +
                                " channels; only mono is supported");
      if (bits != 16)
        throw ParseError(0, "WAV has " + std::to_string(bits) +
                                "-bit samples; only 16-bit is supported");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw ParseError(0, "WAV data chunk before fmt chunk");
      AudioSignal sig;
      sig.sample_rate = sample_rate;
      sig.samples.resize(size / 2);
      for (std::size_t i = 0; i < sig.samples.size(); ++i) {
        const auto s = static_cast<std::int16_t>(get_u16(b, body + 2 * i));
        sig.samples[i] = static_cast<double>(s) / 32768.0;
      }
      return sig;
    }
    pos = body + size + (size & 1);
  }
  throw ParseError(0, "WAV has no data chunk");
}

AudioSignal read_wav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_wav(ss.str());
  } catch (const ParseError &e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

std::string encode_wav(const AudioSignal &sig) {
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(sig.samples.size() * 2);
  std::string out = "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(sig.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sig.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (double x : sig.samples) {
    double scaled = std::round(x * 32768.0);
    scaled = std::clamp(scaled, -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

void append_features(EmbeddingSet &out, const std::string &id,
                     const FeatureMatrix &features) {
  for (std::size_t t = 0; t < features.num_frames(); ++t) {
    auto row = features.frames.row(t);
    out.add(id, EmbeddingSet::Vector(row.begin(), row.end()));
  }
}

}  // namespace spkfuse
