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

#ifndef ADADURIAN_DSP_HPP_
#define ADADURIAN_DSP_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "adadurian/error.hpp"
#include "adadurian/fft.hpp"
#include "adadurian/rng.hpp"
#include "adadurian/signal.hpp"
#include "adadurian/tensor.hpp"

namespace adadurian {
namespace dsp {

namespace detail {

// Periodic Hann of win_length, centered in an fft_size buffer.
inline std::vector<double> padded_hann(const SignalConfig& cfg) {
  std::vector<double> w(cfg.fft_size, 0.0);
  const int off = (cfg.fft_size - cfg.win_length) / 2;
  for (int n = 0; n < cfg.win_length; ++n)
    w[off + n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / cfg.win_length);
  return w;
}

// Number of frames under center padding: floor(len / hop) + 1.
inline std::size_t frame_count(std::size_t len, const SignalConfig& cfg) {
  return len / static_cast<std::size_t>(cfg.hop_length) + 1;
}

// Center padding with zeros, fft_size/2 on each side. Zero padding keeps the
// spectrogram of a signal invariant under trailing-zero extension as long as
// no hop boundary is crossed.
inline std::vector<double> center_pad(const std::vector<double>& x, int fft_size) {
  std::vector<double> p(x.size() + fft_size, 0.0);
  std::copy(x.begin(), x.end(), p.begin() + fft_size / 2);
  return p;
}

// Complex STFT of an already padded signal covering n_frames frames.
inline std::vector<std::vector<std::complex<double>>> stft_padded(
    const std::vector<double>& padded, std::size_t n_frames, const SignalConfig& cfg,
    const std::vector<double>& window) {
  const std::size_t n_bins = static_cast<std::size_t>(cfg.n_bins());
  std::vector<std::vector<std::complex<double>>> frames(n_frames);
  std::vector<std::complex<double>> buf(cfg.fft_size);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const std::size_t start = t * static_cast<std::size_t>(cfg.hop_length);
    for (int n = 0; n < cfg.fft_size; ++n)
      buf[n] = {padded[start + n] * window[n], 0.0};
    fft_inplace(buf, false);
    frames[t].assign(buf.begin(), buf.begin() + n_bins);
  }
  return frames;
}

// Weighted overlap-add inverse of stft_padded. window_sq_sum must be the
// precomputed sum of squared windows at each padded sample; samples with no
// window coverage come out as zero.
inline std::vector<double> istft_padded(
    const std::vector<std::vector<std::complex<double>>>& frames, std::size_t padded_len,
    const SignalConfig& cfg, const std::vector<double>& window,
    const std::vector<double>& window_sq_sum) {
  std::vector<double> acc(padded_len, 0.0);
  std::vector<std::complex<double>> buf(cfg.fft_size);
  const std::size_t n_bins = static_cast<std::size_t>(cfg.n_bins());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    for (std::size_t k = 0; k < n_bins; ++k) buf[k] = frames[t][k];
    for (std::size_t k = 1; k + 1 < n_bins; ++k)
      buf[cfg.fft_size - k] = std::conj(frames[t][k]);
    fft_inplace(buf, true);
    const std::size_t start = t * static_cast<std::size_t>(cfg.hop_length);
    for (int n = 0; n < cfg.fft_size; ++n)
      acc[start + n] += buf[n].real() * window[n];
  }
  for (std::size_t n = 0; n < padded_len; ++n)
    acc[n] = window_sq_sum[n] > 1e-12 ? acc[n] / window_sq_sum[n] : 0.0;
  return acc;
}

inline std::vector<double> window_sq_sum(std::size_t padded_len, std::size_t n_frames,
                                         const SignalConfig& cfg,
                                         const std::vector<double>& window) {
  std::vector<double> den(padded_len, 0.0);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const std::size_t start = t * static_cast<std::size_t>(cfg.hop_length);
    for (int n = 0; n < cfg.fft_size; ++n)
      den[start + n] += window[n] * window[n];
  }
  return den;
}

}  // namespace detail

// STFT magnitude, T x (fft_size/2 + 1), T == floor(len/hop) + 1.
inline Matrix<double> stft_magnitude(const Waveform& wave, const SignalConfig& cfg) {
  cfg.validate();
  if (wave.sample_rate != cfg.sample_rate)
    throw ConfigError("waveform sample rate " + std::to_string(wave.sample_rate) +
                      " != config " + std::to_string(cfg.sample_rate));
  const std::size_t n_frames = detail::frame_count(wave.samples.size(), cfg);
  const auto window = detail::padded_hann(cfg);
  const auto padded = detail::center_pad(wave.samples, cfg.fft_size);
  const auto frames = detail::stft_padded(padded, n_frames, cfg, window);
  Matrix<double> mag(n_frames, static_cast<std::size_t>(cfg.n_bins()));
  for (std::size_t t = 0; t < n_frames; ++t)
    for (std::size_t k = 0; k < mag.cols; ++k) mag.at(t, k) = std::abs(frames[t][k]);
  return mag;
}

// Triangular mel filterbank, n_mels x (fft_size/2 + 1). Mel scale is the
// natural-log HTK variant, mel(f) = 1127 ln(1 + f/700); filters are not
// area-normalized.
inline Matrix<double> mel_filterbank(const SignalConfig& cfg) {
  cfg.validate();
  auto hz_to_mel = [](double f) { return 1127.0 * std::log1p(f / 700.0); };
  auto mel_to_hz = [](double m) { return 700.0 * std::expm1(m / 1127.0); };

  const int n_bins = cfg.n_bins();
  const double mel_lo = hz_to_mel(cfg.fmin);
  const double mel_hi = hz_to_mel(cfg.fmax);
  std::vector<double> edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i)
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));

  Matrix<double> fb(static_cast<std::size_t>(cfg.n_mels), static_cast<std::size_t>(n_bins));
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate / cfg.fft_size;
      double w = 0.0;
      if (f > lo && f < center)
        w = (f - lo) / (center - lo);
      else if (f >= center && f < hi)
        w = (hi - f) / (hi - center);
      fb.at(m, k) = std::max(0.0, w);
    }
  }
  return fb;
}

// Log-mel extraction: log(max(filterbank * magnitude, log_floor)).
inline MelSpectrogram wave_to_mel(const Waveform& wave, const SignalConfig& cfg) {
  const auto mag = stft_magnitude(wave, cfg);
  const auto fb = mel_filterbank(cfg);
  MelSpectrogram mel;
  mel.config = cfg;
  mel.frames = Matrix<float>(mag.rows, static_cast<std::size_t>(cfg.n_mels));
  for (std::size_t t = 0; t < mag.rows; ++t) {
    for (std::size_t m = 0; m < mel.frames.cols; ++m) {
      const double e = dot(fb.row(m), mag.row(t), mag.cols);
      mel.frames.at(t, m) = static_cast<float>(std::log(std::max(e, cfg.log_floor)));
    }
  }
  return mel;
}

namespace detail {

// Cholesky factorization of a symmetric positive definite matrix, in place
// (lower triangle).
inline Matrix<double> cholesky(Matrix<double> a) {
  const std::size_t n = a.rows;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a.at(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a.at(j, k) * a.at(j, k);
    if (d <= 0.0) throw Error("filterbank gram matrix not positive definite");
    a.at(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a.at(i, k) * a.at(j, k);
      a.at(i, j) = s / a.at(j, j);
    }
  }
  return a;
}

inline void cholesky_solve(const Matrix<double>& l, std::vector<double>& b) {
  const std::size_t n = l.rows;
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * b[k];
    b[i] = s / l.at(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l.at(k, i) * b[k];
    b[i] = s / l.at(i, i);
  }
}

}  // namespace detail

// Clipped least-squares pseudo-inverse of the filterbank applied to exp(mel):
// linear = max(0, Fb^T (Fb Fb^T)^{-1} exp(mel)).
inline Matrix<double> mel_to_linear(const MelSpectrogram& mel) {
  const SignalConfig& cfg = mel.config;
  cfg.validate();
  const auto fb = mel_filterbank(cfg);
  const std::size_t n_mels = fb.rows, n_bins = fb.cols;

  Matrix<double> gram(n_mels, n_mels);
  for (std::size_t i = 0; i < n_mels; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = dot(fb.row(i), fb.row(j), n_bins);
      gram.at(i, j) = v;
      gram.at(j, i) = v;
    }
  const auto chol = detail::cholesky(gram);

  Matrix<double> linear(mel.n_frames(), n_bins);
  std::vector<double> y(n_mels);
  for (std::size_t t = 0; t < mel.n_frames(); ++t) {
    for (std::size_t m = 0; m < n_mels; ++m)
      y[m] = std::exp(static_cast<double>(mel.frames.at(t, m)));
    detail::cholesky_solve(chol, y);
    double* out = linear.row(t);
    for (std::size_t m = 0; m < n_mels; ++m) axpy(y[m], fb.row(m), out, n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) out[k] = std::max(0.0, out[k]);
  }
  return linear;
}

// Griffin-Lim phase reconstruction. target_len < 0 picks (T-1)*hop, the
// shortest length whose frame count covers the given magnitude; a longer
// target replicates the final magnitude row. Output is peak-normalized to
// 0.95. consistency_errors, when given, receives the Frobenius distance
// between the target magnitude and |STFT(x)| after each iteration.
inline Waveform griffin_lim(const Matrix<double>& magnitude, const SignalConfig& cfg,
                            int n_iters, std::uint64_t seed,
                            std::vector<double>* consistency_errors = nullptr,
                            std::int64_t target_len = -1) {
  cfg.validate();
  for (double v : magnitude.data)
    if (v < 0.0) throw ConfigError("griffin_lim requires nonnegative magnitudes");

  Waveform out;
  out.sample_rate = cfg.sample_rate;
  if (magnitude.rows == 0) {
    if (target_len > 0) out.samples.assign(static_cast<std::size_t>(target_len), 0.0);
    return out;
  }
  const std::size_t hop = static_cast<std::size_t>(cfg.hop_length);
  const std::size_t len = target_len >= 0 ? static_cast<std::size_t>(target_len)
                                          : (magnitude.rows - 1) * hop;
  const std::size_t n_frames = detail::frame_count(len, cfg);
  const std::size_t n_bins = static_cast<std::size_t>(cfg.n_bins());
  if (magnitude.cols != n_bins) throw ShapeError("magnitude column count != fft bins");

  // Target magnitude over the frames actually reconstructed.
  Matrix<double> target(n_frames, n_bins);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const std::size_t src = std::min(t, magnitude.rows - 1);
    std::copy(magnitude.row(src), magnitude.row(src) + n_bins, target.row(t));
  }

  const auto window = detail::padded_hann(cfg);
  const std::size_t padded_len = len + static_cast<std::size_t>(cfg.fft_size);
  const auto den = detail::window_sq_sum(padded_len, n_frames, cfg, window);

  // Random initial phase.
  Rng rng(seed);
  std::vector<std::vector<std::complex<double>>> spec(n_frames);
  for (std::size_t t = 0; t < n_frames; ++t) {
    spec[t].resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double phi = rng.uniform(0.0, 2.0 * M_PI);
      spec[t][k] = std::polar(target.at(t, k), phi);
    }
  }

  auto x = detail::istft_padded(spec, padded_len, cfg, window, den);
  for (int it = 0; it < n_iters; ++it) {
    const auto s = detail::stft_padded(x, n_frames, cfg, window);
    double err = 0.0;
    for (std::size_t t = 0; t < n_frames; ++t)
      for (std::size_t k = 0; k < n_bins; ++k) {
        const double d = target.at(t, k) - std::abs(s[t][k]);
        err += d * d;
        const double a = std::abs(s[t][k]);
        spec[t][k] = a > 0.0 ? s[t][k] * (target.at(t, k) / a)
                             : std::complex<double>(target.at(t, k), 0.0);
      }
    if (consistency_errors) consistency_errors->push_back(std::sqrt(err));
    x = detail::istft_padded(spec, padded_len, cfg, window, den);
  }

  out.samples.assign(x.begin() + cfg.fft_size / 2, x.begin() + cfg.fft_size / 2 + len);
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double g = 0.95 / peak;
    for (double& v : out.samples) v *= g;
  }
  return out;
}

}  // namespace dsp
}  // namespace adadurian

#endif  // ADADURIAN_DSP_HPP_
