// Copyright (c) 2026 The adadurian Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADADURIAN_SIGNAL_HPP_
#define ADADURIAN_SIGNAL_HPP_

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "adadurian/error.hpp"
#include "adadurian/tensor.hpp"

namespace adadurian {

struct SignalConfig {
  int sample_rate = 24000;
  int win_length = 1080;  // 45 ms
  int hop_length = 240;   // 10 ms
  int fft_size = 2048;
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 12000.0;
  double log_floor = 1e-5;

  void validate() const {
    if (win_length > fft_size) throw ConfigError("win_length > fft_size");
    if (hop_length > win_length) throw ConfigError("hop_length > win_length");
    if (n_mels < 1) throw ConfigError("n_mels < 1");
    if (!(fmin < fmax) || fmax > sample_rate / 2.0)
      throw ConfigError("need fmin < fmax <= sample_rate/2");
    if (log_floor <= 0.0) throw ConfigError("log_floor must be positive");
  }

  int n_bins() const { return fft_size / 2 + 1; }

  bool operator==(const SignalConfig&) const = default;
};

struct Waveform {
  std::vector<double> samples;
  int sample_rate = 24000;
};

// Log-mel frames, T x n_mels. Stored as float32 to match the on-disk format.
struct MelSpectrogram {
  Matrix<float> frames;
  SignalConfig config;

  std::size_t n_frames() const { return frames.rows; }
};

// ---- WAV (RIFF, 16-bit PCM, mono) ------------------------------------------

namespace detail {

inline void put_u32(std::string& s, std::uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline void put_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace detail

inline void write_wav(const std::string& path, const Waveform& wave) {
  const std::size_t n = wave.samples.size();
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  detail::put_u32(out, static_cast<std::uint32_t>(36 + 2 * n));
  out += "WAVE";
  out += "fmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);  // PCM
  detail::put_u16(out, 1);  // mono
  detail::put_u32(out, static_cast<std::uint32_t>(wave.sample_rate));
  detail::put_u32(out, static_cast<std::uint32_t>(wave.sample_rate * 2));
  detail::put_u16(out, 2);   // block align
  detail::put_u16(out, 16);  // bits per sample
  out += "data";
  detail::put_u32(out, static_cast<std::uint32_t>(2 * n));
  for (double s : wave.samples) {
    double c = s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s);
    auto q = static_cast<std::int16_t>(std::lrint(c * 32767.0));
    detail::put_u16(out, static_cast<std::uint16_t>(q));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for write: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path);
}

inline Waveform read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  if (buf.size() < 44 || buf.compare(0, 4, "RIFF") != 0 || buf.compare(8, 4, "WAVE") != 0)
    throw ParseError("not a RIFF/WAVE file: " + path);

  Waveform wave;
  std::size_t pos = 12;
  bool have_fmt = false, have_data = false;
  while (pos + 8 <= buf.size()) {
    std::string id = buf.substr(pos, 4);
    std::uint32_t sz = detail::get_u32(p + pos + 4);
    pos += 8;
    if (pos + sz > buf.size()) throw ParseError("truncated chunk in " + path);
    if (id == "fmt ") {
      if (sz < 16) throw ParseError("bad fmt chunk in " + path);
      std::uint16_t format = detail::get_u16(p + pos);
      std::uint16_t channels = detail::get_u16(p + pos + 2);
      std::uint16_t bits = detail::get_u16(p + pos + 14);
      if (format != 1 || channels != 1 || bits != 16)
        throw ParseError("expected 16-bit PCM mono: " + path);
      wave.sample_rate = static_cast<int>(detail::get_u32(p + pos + 4));
      have_fmt = true;
    } else if (id == "data") {
      wave.samples.resize(sz / 2);
      for (std::size_t i = 0; i < wave.samples.size(); ++i) {
        auto v = static_cast<std::int16_t>(detail::get_u16(p + pos + 2 * i));
        wave.samples[i] = static_cast<double>(v) / 32767.0;
      }
      have_data = true;
    }
    pos += sz + (sz & 1);
  }
  if (!have_fmt || !have_data) throw ParseError("missing fmt/data chunk: " + path);
  return wave;
}

// ---- mel file (magic ADMEL1, u32 T, u32 n_mels, float32 row-major) ---------

inline void write_mel(const std::string& path, const MelSpectrogram& mel) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for write: " + path);
  f.write("ADMEL1", 6);
  std::uint32_t t = static_cast<std::uint32_t>(mel.frames.rows);
  std::uint32_t m = static_cast<std::uint32_t>(mel.frames.cols);
  f.write(reinterpret_cast<const char*>(&t), 4);
  f.write(reinterpret_cast<const char*>(&m), 4);
  f.write(reinterpret_cast<const char*>(mel.frames.data.data()),
          static_cast<std::streamsize>(mel.frames.data.size() * sizeof(float)));
  if (!f) throw IoError("write failed: " + path);
}

inline MelSpectrogram read_mel(const std::string& path, const SignalConfig& cfg) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  char magic[6];
  f.read(magic, 6);
  if (!f || std::memcmp(magic, "ADMEL1", 6) != 0)
    throw ParseError("bad mel magic: " + path);
  std::uint32_t t = 0, m = 0;
  f.read(reinterpret_cast<char*>(&t), 4);
  f.read(reinterpret_cast<char*>(&m), 4);
  if (!f) throw ParseError("truncated mel header: " + path);
  MelSpectrogram mel;
  mel.config = cfg;
  mel.frames = Matrix<float>(t, m);
  f.read(reinterpret_cast<char*>(mel.frames.data.data()),
         static_cast<std::streamsize>(mel.frames.data.size() * sizeof(float)));
  if (!f) throw ParseError("truncated mel payload: " + path);
  return mel;
}

// Frame count from the header only; used by manifest validation.
inline std::uint32_t read_mel_frame_count(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  char magic[6];
  f.read(magic, 6);
  if (!f || std::memcmp(magic, "ADMEL1", 6) != 0)
    throw ParseError("bad mel magic: " + path);
  std::uint32_t t = 0;
  f.read(reinterpret_cast<char*>(&t), 4);
  if (!f) throw ParseError("truncated mel header: " + path);
  return t;
}

}  // namespace adadurian

#endif  // ADADURIAN_SIGNAL_HPP_
