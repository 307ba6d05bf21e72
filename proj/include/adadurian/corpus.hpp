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

#ifndef ADADURIAN_CORPUS_HPP_
#define ADADURIAN_CORPUS_HPP_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adadurian/error.hpp"
#include "adadurian/signal.hpp"

#include "json.hpp"

namespace adadurian {
namespace corpus {

// Reserved indices: phone vocab slot 0 is the boundary symbol, tone/stress
// vocab slot 0 is "none".
constexpr int kBoundaryPhoneId = 0;
constexpr int kNoneToneId = 0;

struct LinguisticToken {
  enum class Kind { phoneme, prosodic_boundary };
  Kind kind = Kind::phoneme;
  int phone_id = 0;
  int tone_stress_id = 0;
  int language_id = 0;

  bool is_boundary() const { return kind == Kind::prosodic_boundary; }

  static LinguisticToken boundary(int language_id = 0) {
    return {Kind::prosodic_boundary, kBoundaryPhoneId, kNoneToneId, language_id};
  }
  static LinguisticToken phoneme(int phone, int tone, int lang) {
    return {Kind::phoneme, phone, tone, lang};
  }
};

struct Utterance {
  std::string utt_id;
  int speaker_id = 0;
  int emotion_id = 0;
  std::vector<LinguisticToken> tokens;
  std::vector<int> durations;  // frames per token; 0 exactly on boundaries
  std::string mel_path;
  std::string wave_path;  // optional; empty when absent

  int total_frames() const {
    int s = 0;
    for (int d : durations) s += d;
    return s;
  }
  std::size_t n_phonemes() const {
    std::size_t n = 0;
    for (const auto& t : tokens) n += !t.is_boundary();
    return n;
  }
};

struct Vocab {
  std::vector<std::string> names;

  int size() const { return static_cast<int>(names.size()); }
  bool contains(int id) const { return id >= 0 && id < size(); }
  const std::string& name(int id) const { return names.at(static_cast<std::size_t>(id)); }
  std::optional<int> find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (names[static_cast<std::size_t>(i)] == name) return i;
    return std::nullopt;
  }
};

struct Vocabs {
  Vocab phones;       // slot 0: "B"
  Vocab tone_stress;  // slot 0: "none"
  Vocab languages;
  Vocab speakers;
  Vocab emotions;
};

struct Manifest {
  std::vector<Utterance> records;
  Vocabs vocabs;
  SignalConfig signal;
  std::string dir;  // directory the manifest was loaded from; resolves paths

  std::string resolve(const std::string& path) const {
    if (dir.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(dir) / path).string();
  }

  std::set<int> speaker_ids() const {
    std::set<int> ids;
    for (const auto& r : records) ids.insert(r.speaker_id);
    return ids;
  }
};

// ---- token grammar: `phone/tone/lang` or `B` -------------------------------

inline std::string format_token(const LinguisticToken& tok) {
  if (tok.is_boundary()) return "B";
  std::ostringstream os;
  os << tok.phone_id << '/' << tok.tone_stress_id << '/' << tok.language_id;
  return os.str();
}

inline LinguisticToken parse_token(const std::string& text) {
  if (text == "B") return LinguisticToken::boundary();
  int parts[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t next = i < 2 ? text.find('/', pos) : text.size();
    if (next == std::string::npos) throw ParseError("bad token '" + text + "'");
    std::size_t used = 0;
    try {
      parts[i] = std::stoi(text.substr(pos, next - pos), &used);
    } catch (const std::exception&) {
      throw ParseError("bad token '" + text + "'");
    }
    if (used != next - pos || parts[i] < 0) throw ParseError("bad token '" + text + "'");
    pos = next + 1;
  }
  return LinguisticToken::phoneme(parts[0], parts[1], parts[2]);
}

inline std::vector<LinguisticToken> parse_token_sequence(const std::string& field) {
  std::vector<LinguisticToken> out;
  std::istringstream is(field);
  std::string item;
  while (is >> item) out.push_back(parse_token(item));
  return out;
}

inline std::string format_token_sequence(const std::vector<LinguisticToken>& toks) {
  std::ostringstream os;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) os << ' ';
    os << format_token(toks[i]);
  }
  return os.str();
}

// ---- validation -------------------------------------------------------------

// Structural checks that do not touch the filesystem.
inline void validate_record(const Utterance& utt, const Vocabs& vocabs) {
  const std::string where = "utterance '" + utt.utt_id + "': ";
  if (!vocabs.speakers.contains(utt.speaker_id))
    throw VocabError(where + "speaker id " + std::to_string(utt.speaker_id) +
                     " not in speaker vocab");
  if (!vocabs.emotions.contains(utt.emotion_id))
    throw VocabError(where + "emotion id " + std::to_string(utt.emotion_id) +
                     " not in emotion vocab");
  if (utt.tokens.size() != utt.durations.size())
    throw ParseError(where + "token/duration count mismatch");
  if (utt.tokens.empty()) throw ParseError(where + "empty token sequence");
  for (const auto& tok : utt.tokens) {
    if (!vocabs.phones.contains(tok.phone_id))
      throw VocabError(where + "phone id " + std::to_string(tok.phone_id) +
                       " not in phone vocab");
    if (!vocabs.tone_stress.contains(tok.tone_stress_id))
      throw VocabError(where + "tone/stress id " + std::to_string(tok.tone_stress_id) +
                       " not in tone/stress vocab");
    if (!vocabs.languages.contains(tok.language_id))
      throw VocabError(where + "language id " + std::to_string(tok.language_id) +
                       " not in language vocab");
    if (tok.is_boundary() && tok.tone_stress_id != kNoneToneId)
      throw VocabError(where + "boundary token must carry the reserved none tone id");
  }
  for (std::size_t i = 0; i < utt.tokens.size(); ++i) {
    const bool boundary = utt.tokens[i].is_boundary();
    if (boundary && utt.durations[i] != 0)
      throw DurationMismatchError(where + "boundary token has nonzero duration");
    if (!boundary && utt.durations[i] < 1)
      throw DurationMismatchError(where + "phoneme duration must be >= 1");
  }
}

// Full validation including the mel frame-count check.
inline void validate_manifest(const Manifest& m) {
  std::set<std::string> seen;
  for (const auto& r : m.records) {
    if (!seen.insert(r.utt_id).second)
      throw ParseError("duplicate utt_id '" + r.utt_id + "'");
    validate_record(r, m.vocabs);
    const auto frames = read_mel_frame_count(m.resolve(r.mel_path));
    if (static_cast<int>(frames) != r.total_frames())
      throw DurationMismatchError(
          "utterance '" + r.utt_id + "': durations sum to " +
          std::to_string(r.total_frames()) + " but mel has " +
          std::to_string(frames) + " frames");
  }
}

// ---- vocab / signal-config sidecar files ------------------------------------

inline void write_vocab(const std::string& path, const Vocab& v) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for write: " + path);
  for (int i = 0; i < v.size(); ++i) f << i << '\t' << v.names[static_cast<std::size_t>(i)] << '\n';
}

inline Vocab read_vocab(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  Vocab v;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected id<TAB>name");
    int id = 0;
    try {
      id = std::stoi(line.substr(0, tab));
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": bad id");
    }
    if (id != v.size())
      throw ParseError(path + ":" + std::to_string(line_no) + ": ids must be dense from 0");
    v.names.push_back(line.substr(tab + 1));
  }
  return v;
}

inline nlohmann::json signal_config_to_json(const SignalConfig& c) {
  return nlohmann::json{{"sample_rate", c.sample_rate}, {"win_length", c.win_length},
                        {"hop_length", c.hop_length},   {"fft_size", c.fft_size},
                        {"n_mels", c.n_mels},           {"fmin", c.fmin},
                        {"fmax", c.fmax},               {"log_floor", c.log_floor}};
}

inline SignalConfig signal_config_from_json(const nlohmann::json& j) {
  SignalConfig c;
  c.sample_rate = j.at("sample_rate").get<int>();
  c.win_length = j.at("win_length").get<int>();
  c.hop_length = j.at("hop_length").get<int>();
  c.fft_size = j.at("fft_size").get<int>();
  c.n_mels = j.at("n_mels").get<int>();
  c.fmin = j.at("fmin").get<double>();
  c.fmax = j.at("fmax").get<double>();
  c.log_floor = j.at("log_floor").get<double>();
  return c;
}

// ---- manifest file -----------------------------------------------------------

constexpr const char* kManifestHeader = "#adadurian-manifest v1";

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return fields;
}

inline int parse_int_field(const std::string& s, const std::string& what, int line_no) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
}

}  // namespace detail

// Writes manifest.tsv plus the vocab and signal.json sidecars into the
// manifest's directory.
inline void save_manifest(const Manifest& m, const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for write: " + path);
  f << kManifestHeader << '\n';
  for (const auto& r : m.records) {
    f << r.utt_id << '\t' << r.speaker_id << '\t' << r.emotion_id << '\t'
      << format_token_sequence(r.tokens) << '\t';
    for (std::size_t i = 0; i < r.durations.size(); ++i) {
      if (i) f << ' ';
      f << r.durations[i];
    }
    f << '\t' << r.mel_path;
    if (!r.wave_path.empty()) f << '\t' << r.wave_path;
    f << '\n';
  }
  if (!f) throw IoError("write failed: " + path);

  const std::string d = dir.string();
  auto side = [&](const char* name) {
    return (std::filesystem::path(d) / name).string();
  };
  write_vocab(side("phones.vocab"), m.vocabs.phones);
  write_vocab(side("tone_stress.vocab"), m.vocabs.tone_stress);
  write_vocab(side("languages.vocab"), m.vocabs.languages);
  write_vocab(side("speakers.vocab"), m.vocabs.speakers);
  write_vocab(side("emotions.vocab"), m.vocabs.emotions);
  std::ofstream sf(side("signal.json"));
  sf << signal_config_to_json(m.signal).dump(2) << '\n';
  if (!sf) throw IoError("write failed: signal.json");
}

inline Manifest load_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);

  Manifest m;
  m.dir = std::filesystem::path(path).parent_path().string();

  std::string line;
  int line_no = 0;
  if (!std::getline(f, line) || line != kManifestHeader)
    throw ParseError(path + ": missing header '" + std::string(kManifestHeader) + "'");
  ++line_no;

  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 6 && fields.size() != 7)
      throw ParseError("line " + std::to_string(line_no) + ": expected 6 or 7 fields, got " +
                       std::to_string(fields.size()));
    Utterance utt;
    utt.utt_id = fields[0];
    utt.speaker_id = detail::parse_int_field(fields[1], "speaker id", line_no);
    utt.emotion_id = detail::parse_int_field(fields[2], "emotion id", line_no);
    try {
      utt.tokens = parse_token_sequence(fields[3]);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    std::istringstream ds(fields[4]);
    std::string dtext;
    while (ds >> dtext)
      utt.durations.push_back(detail::parse_int_field(dtext, "duration", line_no));
    utt.mel_path = fields[5];
    if (fields.size() == 7) utt.wave_path = fields[6];
    m.records.push_back(std::move(utt));
  }

  const auto dir = std::filesystem::path(m.dir);
  m.vocabs.phones = read_vocab((dir / "phones.vocab").string());
  m.vocabs.tone_stress = read_vocab((dir / "tone_stress.vocab").string());
  m.vocabs.languages = read_vocab((dir / "languages.vocab").string());
  m.vocabs.speakers = read_vocab((dir / "speakers.vocab").string());
  m.vocabs.emotions = read_vocab((dir / "emotions.vocab").string());
  std::ifstream sf((dir / "signal.json").string());
  if (!sf) throw IoError("cannot open: " + (dir / "signal.json").string());
  nlohmann::json sj;
  try {
    sf >> sj;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("signal.json: " + std::string(e.what()));
  }
  m.signal = signal_config_from_json(sj);
  m.signal.validate();

  validate_manifest(m);
  return m;
}

}  // namespace corpus
}  // namespace adadurian

#endif  // ADADURIAN_CORPUS_HPP_
