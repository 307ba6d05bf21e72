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

#ifndef ADADURIAN_SYNTH_CORPUS_HPP_
#define ADADURIAN_SYNTH_CORPUS_HPP_

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "adadurian/corpus.hpp"
#include "adadurian/dsp.hpp"
#include "adadurian/rng.hpp"
#include "adadurian/signal.hpp"

namespace adadurian {
namespace corpus {

// The full emotion palette; a SynthSpec uses the first n_emotions of it.
struct EmotionModifier {
  const char* name;
  double pitch_scale;
  double rate_scale;
};

inline constexpr EmotionModifier kEmotionTable[4] = {
    {"neutral", 1.00, 1.00},
    {"anger", 1.25, 1.15},
    {"happiness", 1.12, 1.08},
    {"sadness", 0.85, 0.90},
};

// Everything the generator needs; the seed pins every produced byte.
struct SynthSpec {
  int n_speakers = 2;
  int n_utterances_per_speaker = 50;
  int phone_inventory_size = 16;
  std::uint64_t seed = 7;
  int min_duration = 2;  // frames per phoneme
  int max_duration = 6;
  int min_phonemes = 3;  // phonemes per utterance
  int max_phonemes = 6;
  int n_tone_stress = 4;
  int n_languages = 2;
  int n_emotions = 1;            // leading subset of kEmotionTable
  double boundary_prob = 0.25;   // boundary token between adjacent phonemes
  double base_pitch_lo = 110.0;  // per-speaker base pitch range, Hz
  double base_pitch_hi = 280.0;
  double formant_lo = 600.0;  // phone formant band placement, Hz
  double formant_hi = 3400.0;
  double speaker_formant_jitter = 120.0;  // per-speaker formant offset, Hz
  SignalConfig signal;

  void validate() const {
    signal.validate();
    if (n_speakers < 1 || n_utterances_per_speaker < 1)
      throw ConfigError("need at least one speaker and one utterance");
    if (phone_inventory_size < 1) throw ConfigError("empty phone inventory");
    if (min_duration < 1 || max_duration < min_duration)
      throw ConfigError("bad duration range");
    if (min_phonemes < 1 || max_phonemes < min_phonemes)
      throw ConfigError("bad phoneme count range");
    if (n_emotions < 1 || n_emotions > 4) throw ConfigError("n_emotions must be 1..4");
    if (n_languages < 1 || n_tone_stress < 1) throw ConfigError("bad vocab sizes");
  }
};

namespace detail {

struct SpeakerTimbre {
  double base_pitch_hz;
  double formant_offset_hz;
  double attack_frac;   // amplitude envelope shape
  double release_frac;
};

// Renders one phoneme as three harmonics at the (emotion-scaled) speaker
// pitch plus a single formant band for the phone id, amplitude-windowed.
inline void render_phoneme(std::vector<double>& out, std::size_t start, std::size_t n,
                           double f0, double formant_hz, const SpeakerTimbre& timbre,
                           int sample_rate) {
  static const double kHarmonicAmp[3] = {0.5, 0.25, 0.125};
  const double attack = std::max<double>(1.0, timbre.attack_frac * static_cast<double>(n));
  const double release = std::max<double>(1.0, timbre.release_frac * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(start + i) / sample_rate;
    double v = 0.0;
    for (int h = 0; h < 3; ++h)
      v += kHarmonicAmp[h] * std::sin(2.0 * M_PI * f0 * (h + 1) * t);
    v += 0.35 * std::sin(2.0 * M_PI * formant_hz * t);
    double env = 1.0;
    const double di = static_cast<double>(i);
    if (di < attack) env = di / attack;
    const double tail = static_cast<double>(n - 1 - i);
    if (tail < release) env = std::min(env, tail / release);
    out[start + i] = 0.7 * env * v;
  }
}

}  // namespace detail

// Writes wavs/, mels/ and manifest.tsv (plus vocab sidecars) under out_dir.
// Ground-truth durations are exact: each phoneme occupies exactly
// duration * hop_length samples, and the saved mel is clipped to the
// scheduled frame total (the analysis window's tail frame is dropped).
inline Manifest make_synthetic_corpus(const SynthSpec& spec, const std::string& out_dir) {
  spec.validate();
  const auto root = std::filesystem::path(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(root / "wavs", ec);
  std::filesystem::create_directories(root / "mels", ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  Manifest m;
  m.signal = spec.signal;
  m.dir = root.string();
  m.vocabs.phones.names.push_back("B");
  for (int p = 0; p < spec.phone_inventory_size; ++p)
    m.vocabs.phones.names.push_back("p" + std::to_string(p + 1));
  m.vocabs.tone_stress.names.push_back("none");
  for (int t = 0; t < spec.n_tone_stress; ++t)
    m.vocabs.tone_stress.names.push_back("t" + std::to_string(t + 1));
  for (int l = 0; l < spec.n_languages; ++l)
    m.vocabs.languages.names.push_back("lang" + std::to_string(l));
  for (int s = 0; s < spec.n_speakers; ++s)
    m.vocabs.speakers.names.push_back("spk" + std::to_string(s));
  for (int e = 0; e < spec.n_emotions; ++e)
    m.vocabs.emotions.names.push_back(kEmotionTable[e].name);

  Rng rng(spec.seed);
  std::vector<detail::SpeakerTimbre> timbres;
  for (int s = 0; s < spec.n_speakers; ++s) {
    detail::SpeakerTimbre t;
    t.base_pitch_hz = rng.uniform(spec.base_pitch_lo, spec.base_pitch_hi);
    t.formant_offset_hz = rng.uniform(-spec.speaker_formant_jitter, spec.speaker_formant_jitter);
    t.attack_frac = rng.uniform(0.1, 0.3);
    t.release_frac = rng.uniform(0.1, 0.3);
    timbres.push_back(t);
  }

  const int hop = spec.signal.hop_length;
  for (int s = 0; s < spec.n_speakers; ++s) {
    for (int u = 0; u < spec.n_utterances_per_speaker; ++u) {
      Rng ur = rng.fork(static_cast<std::uint64_t>(s) * 1000003ULL + static_cast<std::uint64_t>(u));
      Utterance utt;
      utt.utt_id = "spk" + std::to_string(s) + "_utt" + std::to_string(u);
      utt.speaker_id = s;
      utt.emotion_id = spec.n_emotions > 1 ? u % spec.n_emotions : 0;
      const auto& emo = kEmotionTable[utt.emotion_id];

      const int primary_lang = static_cast<int>(ur.below(static_cast<std::uint64_t>(spec.n_languages)));
      const int n_ph = static_cast<int>(ur.range(spec.min_phonemes, spec.max_phonemes));
      for (int p = 0; p < n_ph; ++p) {
        if (p > 0 && ur.uniform() < spec.boundary_prob) {
          utt.tokens.push_back(LinguisticToken::boundary(primary_lang));
          utt.durations.push_back(0);
        }
        int lang = primary_lang;
        if (spec.n_languages > 1 && ur.uniform() < 0.2)
          lang = static_cast<int>(ur.below(static_cast<std::uint64_t>(spec.n_languages)));
        utt.tokens.push_back(LinguisticToken::phoneme(
            1 + static_cast<int>(ur.below(static_cast<std::uint64_t>(spec.phone_inventory_size))),
            1 + static_cast<int>(ur.below(static_cast<std::uint64_t>(spec.n_tone_stress))), lang));
        const int base = static_cast<int>(ur.range(spec.min_duration, spec.max_duration));
        const int dur = std::max(1, static_cast<int>(std::lround(base / emo.rate_scale)));
        utt.durations.push_back(dur);
      }

      const int total = utt.total_frames();
      Waveform wave;
      wave.sample_rate = spec.signal.sample_rate;
      wave.samples.assign(static_cast<std::size_t>(total) * hop, 0.0);
      std::size_t cursor = 0;
      for (std::size_t i = 0; i < utt.tokens.size(); ++i) {
        const auto& tok = utt.tokens[i];
        if (tok.is_boundary()) continue;
        const std::size_t n = static_cast<std::size_t>(utt.durations[i]) * hop;
        const double span = spec.formant_hi - spec.formant_lo;
        const double formant =
            spec.formant_lo +
            span * (tok.phone_id - 1) / std::max(1, spec.phone_inventory_size - 1) +
            timbres[static_cast<std::size_t>(s)].formant_offset_hz;
        detail::render_phoneme(wave.samples, cursor, n,
                               timbres[static_cast<std::size_t>(s)].base_pitch_hz * emo.pitch_scale,
                               formant, timbres[static_cast<std::size_t>(s)], wave.sample_rate);
        cursor += n;
      }

      // Quantize before feature extraction so the stored WAV and mel agree.
      for (double& v : wave.samples) {
        const double c = v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v);
        v = std::lrint(c * 32767.0) / 32767.0;
      }

      auto mel = dsp::wave_to_mel(wave, spec.signal);
      Matrix<float> clipped(static_cast<std::size_t>(total), mel.frames.cols);
      std::copy(mel.frames.data.begin(), mel.frames.data.begin() + clipped.size(),
                clipped.data.begin());
      mel.frames = std::move(clipped);

      utt.wave_path = "wavs/" + utt.utt_id + ".wav";
      utt.mel_path = "mels/" + utt.utt_id + ".mel";
      write_wav((root / utt.wave_path).string(), wave);
      write_mel((root / utt.mel_path).string(), mel);
      m.records.push_back(std::move(utt));
    }
  }

  save_manifest(m, (root / "manifest.tsv").string());
  validate_manifest(m);
  return m;
}

}  // namespace corpus
}  // namespace adadurian

#endif  // ADADURIAN_SYNTH_CORPUS_HPP_
