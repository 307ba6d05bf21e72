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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "adadurian/dsp.hpp"
#include "adadurian/signal.hpp"

using namespace adadurian;

namespace {

Waveform sine_wave(double freq_hz, double seconds, int sample_rate = 24000,
                   double amp = 0.5) {
  Waveform w;
  w.sample_rate = sample_rate;
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * M_PI * freq_hz * i / sample_rate);
  return w;
}

std::size_t argmax_row(const Matrix<double>& m, std::size_t row) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < m.cols; ++k)
    if (m.at(row, k) > m.at(row, best)) best = k;
  return best;
}

}  // namespace

TEST_CASE("stft: zero waveform gives the all-zero 11x1025 matrix") {
  SignalConfig cfg;
  Waveform w;
  w.samples.assign(2400, 0.0);
  auto mag = dsp::stft_magnitude(w, cfg);
  REQUIRE(mag.rows == 11);
  REQUIRE(mag.cols == 1025);
  for (double v : mag.data) REQUIRE(v == 0.0);
}

TEST_CASE("stft: frame count law T = floor(len/hop) + 1") {
  SignalConfig cfg;
  for (std::size_t len : {0ul, 1ul, 239ul, 240ul, 241ul, 2400ul, 2639ul, 10007ul}) {
    Waveform w;
    w.samples.assign(len, 0.0);
    auto mag = dsp::stft_magnitude(w, cfg);
    REQUIRE(mag.rows == len / 240 + 1);
  }
}

TEST_CASE("stft: 1 kHz tone peaks at the closed-form bin in interior frames") {
  SignalConfig cfg;
  auto w = sine_wave(1000.0, 1.0);
  auto mag = dsp::stft_magnitude(w, cfg);
  // 1000 * 2048 / 24000 = 85.33 -> nearest bin 85.
  for (std::size_t t = 3; t + 3 < mag.rows; ++t) REQUIRE(argmax_row(mag, t) == 85);
}

TEST_CASE("stft: sample-rate mismatch is an error") {
  SignalConfig cfg;
  Waveform w;
  w.sample_rate = 16000;
  w.samples.assign(1600, 0.0);
  REQUIRE_THROWS_AS(dsp::stft_magnitude(w, cfg), ConfigError);
}

TEST_CASE("mel filterbank: shape, positive row sums, increasing centers") {
  SignalConfig cfg;
  auto fb = dsp::mel_filterbank(cfg);
  REQUIRE(fb.rows == 80);
  REQUIRE(fb.cols == 1025);
  std::size_t prev_peak = 0;
  for (std::size_t m = 0; m < fb.rows; ++m) {
    double sum = 0.0;
    std::size_t peak = 0;
    for (std::size_t k = 0; k < fb.cols; ++k) {
      REQUIRE(fb.at(m, k) >= 0.0);
      sum += fb.at(m, k);
      if (fb.at(m, k) > fb.at(m, peak)) peak = k;
    }
    REQUIRE(sum > 0.0);
    if (m > 0) REQUIRE(peak >= prev_peak);
    prev_peak = peak;
  }
  REQUIRE(argmax_row(fb, 79) > argmax_row(fb, 0));
}

TEST_CASE("wave_to_mel: silence hits the log floor exactly") {
  SignalConfig cfg;
  Waveform w;
  w.samples.assign(2400, 0.0);
  auto mel = dsp::wave_to_mel(w, cfg);
  REQUIRE(mel.n_frames() == 11);
  const float floor_val = static_cast<float>(std::log(1e-5));
  for (float v : mel.frames.data) REQUIRE(v == floor_val);
}

TEST_CASE("wave_to_mel: doubling amplitude shifts above-floor entries by log 2") {
  SignalConfig cfg;
  auto w1 = sine_wave(880.0, 0.2, 24000, 0.3);
  auto w2 = w1;
  for (double& v : w2.samples) v *= 2.0;
  auto m1 = dsp::wave_to_mel(w1, cfg);
  auto m2 = dsp::wave_to_mel(w2, cfg);
  const float floor_val = static_cast<float>(std::log(1e-5));
  const float margin = 1.0f;  // stay clear of the clamp on both sides
  for (std::size_t i = 0; i < m1.frames.size(); ++i) {
    if (m1.frames.data[i] > floor_val + margin) {
      REQUIRE_THAT(static_cast<double>(m2.frames.data[i] - m1.frames.data[i]),
                   Catch::Matchers::WithinAbs(std::log(2.0), 1e-4));
    }
  }
}

TEST_CASE("wave_to_mel: invariant to trailing zero padding within a hop") {
  SignalConfig cfg;
  auto w = sine_wave(700.0, 0.1);  // 2400 samples, hop-aligned
  REQUIRE(w.samples.size() % 240 == 0);
  auto base = dsp::wave_to_mel(w, cfg);
  for (std::size_t pad : {1ul, 100ul, 239ul}) {
    auto padded = w;
    padded.samples.insert(padded.samples.end(), pad, 0.0);
    auto mel = dsp::wave_to_mel(padded, cfg);
    REQUIRE(mel.n_frames() == base.n_frames());
    REQUIRE(mel.frames.data == base.frames.data);
  }
}

TEST_CASE("mel_to_linear: silence mel stays at floor-level energy") {
  SignalConfig cfg;
  MelSpectrogram mel;
  mel.config = cfg;
  mel.frames = Matrix<float>(4, 80);
  mel.frames.fill(static_cast<float>(std::log(1e-5)));
  auto lin = dsp::mel_to_linear(mel);
  REQUIRE(lin.rows == 4);
  REQUIRE(lin.cols == 1025);
  for (double v : lin.data) {
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1e-4);
  }
}

TEST_CASE("mel_to_linear: pure tone magnitude recovers the bin within 2") {
  SignalConfig cfg;
  auto w = sine_wave(2500.0, 0.3);
  auto mel = dsp::wave_to_mel(w, cfg);
  auto lin = dsp::mel_to_linear(mel);
  const auto true_bin = static_cast<std::ptrdiff_t>(std::lround(2500.0 * 2048 / 24000));
  for (std::size_t t = 3; t + 3 < lin.rows; ++t) {
    auto peak = static_cast<std::ptrdiff_t>(argmax_row(lin, t));
    REQUIRE(std::abs(peak - true_bin) <= 2);
  }
}

TEST_CASE("mel_to_linear: filterbank round trip error <= 0.15 on smooth mels") {
  SignalConfig cfg;
  auto fb = dsp::mel_filterbank(cfg);
  Rng rng(42);
  MelSpectrogram mel;
  mel.config = cfg;
  mel.frames = Matrix<float>(16, 80);
  // Smooth random mel: a few random bumps over a quiet floor.
  for (std::size_t t = 0; t < 16; ++t) {
    std::vector<double> row(80, std::log(1e-3));
    for (int b = 0; b < 4; ++b) {
      const double center = rng.uniform(5.0, 75.0);
      const double height = rng.uniform(1.0, 4.0);
      const double width = rng.uniform(3.0, 10.0);
      for (int m = 0; m < 80; ++m)
        row[static_cast<std::size_t>(m)] +=
            height * std::exp(-0.5 * std::pow((m - center) / width, 2.0));
    }
    for (int m = 0; m < 80; ++m)
      mel.frames.at(t, static_cast<std::size_t>(m)) = static_cast<float>(row[static_cast<std::size_t>(m)]);
  }
  auto lin = dsp::mel_to_linear(mel);
  for (std::size_t t = 0; t < 16; ++t) {
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; m < 80; ++m) {
      const double target = std::exp(static_cast<double>(mel.frames.at(t, m)));
      const double got = dot(fb.row(m), lin.row(t), lin.cols);
      num += (got - target) * (got - target);
      den += target * target;
    }
    REQUIRE(std::sqrt(num / den) <= 0.15);
  }
}

TEST_CASE("griffin_lim: zero magnitude reconstructs the zero waveform") {
  SignalConfig cfg;
  Matrix<double> mag(9, 1025);
  auto w = dsp::griffin_lim(mag, cfg, 5, 1);
  REQUIRE(w.samples.size() == 8 * 240);
  for (double v : w.samples) REQUIRE(v == 0.0);
}

TEST_CASE("griffin_lim: 440 Hz tone magnitude correlation >= 0.99 after 60 iters") {
  SignalConfig cfg;
  auto target_wave = sine_wave(440.0, 0.5);
  auto target_mag = dsp::stft_magnitude(target_wave, cfg);
  auto rec = dsp::griffin_lim(target_mag, cfg, 60, 7);
  Waveform rec24;
  rec24.sample_rate = cfg.sample_rate;
  rec24.samples = rec.samples;
  auto rec_mag = dsp::stft_magnitude(rec24, cfg);
  REQUIRE(rec_mag.rows <= target_mag.rows);
  double num = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t t = 0; t < rec_mag.rows; ++t)
    for (std::size_t k = 0; k < rec_mag.cols; ++k) {
      num += rec_mag.at(t, k) * target_mag.at(t, k);
      na += rec_mag.at(t, k) * rec_mag.at(t, k);
      nb += target_mag.at(t, k) * target_mag.at(t, k);
    }
  REQUIRE(num / std::sqrt(na * nb) >= 0.99);
}

TEST_CASE("griffin_lim: consistency error is non-increasing and runs are seeded") {
  SignalConfig cfg;
  auto w = sine_wave(620.0, 0.25);
  auto mag = dsp::stft_magnitude(w, cfg);
  std::vector<double> errs;
  auto r1 = dsp::griffin_lim(mag, cfg, 30, 11, &errs);
  REQUIRE(errs.size() == 30);
  for (std::size_t i = 1; i < errs.size(); ++i)
    REQUIRE(errs[i] <= errs[i - 1] + 1e-9);

  auto r2 = dsp::griffin_lim(mag, cfg, 30, 11);
  REQUIRE(r1.samples == r2.samples);
  auto r3 = dsp::griffin_lim(mag, cfg, 30, 12);
  REQUIRE(r1.samples != r3.samples);
}

TEST_CASE("wav io: round trip preserves quantized samples") {
  Waveform w = sine_wave(330.0, 0.05);
  for (double& v : w.samples) v = std::lrint(v * 32767.0) / 32767.0;
  auto path = (std::filesystem::temp_directory_path() / "adadurian_wav_test.wav").string();
  write_wav(path, w);
  auto r = read_wav(path);
  REQUIRE(r.sample_rate == 24000);
  REQUIRE(r.samples.size() == w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    REQUIRE_THAT(r.samples[i], Catch::Matchers::WithinAbs(w.samples[i], 1e-9));
  std::filesystem::remove(path);
}

TEST_CASE("mel io: header probe and round trip") {
  SignalConfig cfg;
  MelSpectrogram mel;
  mel.config = cfg;
  mel.frames = Matrix<float>(7, 80);
  Rng rng(3);
  for (auto& v : mel.frames.data) v = static_cast<float>(rng.normal());
  auto path = (std::filesystem::temp_directory_path() / "adadurian_mel_test.mel").string();
  write_mel(path, mel);
  REQUIRE(read_mel_frame_count(path) == 7);
  auto r = read_mel(path, cfg);
  REQUIRE(r.frames.rows == 7);
  REQUIRE(r.frames.data == mel.frames.data);
  std::filesystem::remove(path);
}
