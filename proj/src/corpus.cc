// Copyright 2026 The pseudoev Authors.
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

#include "pseudoev/corpus.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace pseudoev {

using nlohmann::json;

namespace {

std::string Trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

const json& Field(const json& rec, const char* name, const std::string& qid) {
  auto it = rec.find(name);
  if (it == rec.end()) {
    throw DataError(qid + ": missing field '" + name + "'");
  }
  return *it;
}

}  // namespace

std::vector<MultiHopExample> ParseDistractorJson(const json& records,
                                                 LoadStats* stats) {
  LoadStats local;
  LoadStats& st = stats ? *stats : local;
  std::vector<MultiHopExample> out;
  if (records.is_null()) return out;
  if (!records.is_array()) throw DataError("distractor json: expected array");

  for (size_t r = 0; r < records.size(); ++r) {
    const json& rec = records[r];
    ++st.n_records;
    std::string qid = "record#" + std::to_string(r);
    if (rec.contains("_id")) {
      qid = rec["_id"].get<std::string>();
    } else if (rec.contains("id")) {
      qid = rec["id"].get<std::string>();
    }
    if (!rec.is_object()) throw DataError(qid + ": record is not an object");

    MultiHopExample ex;
    ex.qid = qid;
    ex.question = Field(rec, "question", qid).get<std::string>();
    std::string answer = Field(rec, "answer", qid).get<std::string>();
    const json& context = Field(rec, "context", qid);
    const json& facts = Field(rec, "supporting_facts", qid);
    if (!context.is_array() || !facts.is_array()) {
      throw DataError(qid + ": 'context' and 'supporting_facts' must be arrays");
    }
    if (context.size() != 10) {
      ++st.n_skipped_paragraph_count;
      continue;
    }

    if (answer == "yes" || answer == "no") {
      ex.answer = {answer, ParseAnswerType(answer)};
    } else {
      ex.answer = {answer, AnswerType::kSpan};
    }

    // Original sentence index -> compacted sid, per title.
    std::map<std::string, std::vector<int>> sid_map;
    std::map<std::string, int> title_pid;
    for (size_t i = 0; i < context.size(); ++i) {
      const json& entry = context[i];
      if (!entry.is_array() || entry.size() != 2 || !entry[1].is_array()) {
        throw DataError(qid + ": malformed context entry " + std::to_string(i));
      }
      Paragraph p;
      p.pid = static_cast<int>(i);
      p.title = entry[0].get<std::string>();
      std::vector<int> remap;
      for (const auto& s : entry[1]) {
        std::string text = Trim(s.get<std::string>());
        if (text.empty()) {
          remap.push_back(-1);
          ++st.n_dropped_blank_sentences;
          continue;
        }
        remap.push_back(static_cast<int>(p.sentences.size()));
        p.sentences.push_back({static_cast<int>(p.sentences.size()), text});
      }
      if (p.sentences.empty()) {
        throw DataError(qid + ": context '" + p.title + "' has no sentences");
      }
      sid_map[p.title] = std::move(remap);
      title_pid.emplace(p.title, p.pid);
      ex.paragraphs.push_back(std::move(p));
    }

    SentenceSet gold;
    for (const auto& f : facts) {
      if (!f.is_array() || f.size() != 2) {
        throw DataError(qid + ": malformed supporting fact");
      }
      std::string title = f[0].get<std::string>();
      int sid = f[1].get<int>();
      auto it = title_pid.find(title);
      if (it == title_pid.end()) continue;
      ex.paragraphs[it->second].polarity = Polarity::kPositive;
      const auto& remap = sid_map[title];
      if (sid >= 0 && sid < static_cast<int>(remap.size()) && remap[sid] >= 0) {
        gold.insert({it->second, remap[sid]});
      }
    }
    ex.gold_evidence = std::move(gold);

    if (ex.PositivePids().size() != 2) {
      ++st.n_skipped_positive_count;
      continue;
    }
    try {
      ValidateExample(ex);
    } catch (const DataError&) {
      ++st.n_skipped_answer_missing;
      continue;
    }
    out.push_back(std::move(ex));
    ++st.n_loaded;
  }
  int skipped = st.n_skipped_paragraph_count + st.n_skipped_positive_count +
                st.n_skipped_answer_missing;
  if (skipped > 0) {
    std::cerr << "warning: skipped " << skipped << " of " << st.n_records
              << " records (" << st.n_skipped_paragraph_count
              << " without 10 contexts, " << st.n_skipped_positive_count
              << " without 2 positives, " << st.n_skipped_answer_missing
              << " with answer missing)\n";
  }
  return out;
}

std::vector<MultiHopExample> LoadDistractorJson(const std::string& path,
                                                LoadStats* stats) {
  std::string text = ReadTextFile(path);
  bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isspace(c);
  });
  if (blank) return {};
  json records;
  try {
    records = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
  return ParseDistractorJson(records, stats);
}

json ExampleToJson(const MultiHopExample& ex) {
  json paragraphs = json::array();
  for (const auto& p : ex.paragraphs) {
    json sents = json::array();
    for (const auto& s : p.sentences) sents.push_back(s.text);
    paragraphs.push_back({{"pid", p.pid},
                          {"title", p.title},
                          {"polarity", ToString(p.polarity)},
                          {"sentences", sents}});
  }
  json j = {{"qid", ex.qid},
            {"question", ex.question},
            {"answer", {{"text", ex.answer.text},
                        {"type", ToString(ex.answer.type)}}},
            {"paragraphs", paragraphs}};
  if (ex.gold_evidence) {
    json gold = json::array();
    for (const auto& r : *ex.gold_evidence) gold.push_back({r.pid, r.sid});
    j["gold_evidence"] = gold;
  } else {
    j["gold_evidence"] = nullptr;
  }
  return j;
}

MultiHopExample ExampleFromJson(const json& j) {
  MultiHopExample ex;
  try {
    ex.qid = j.at("qid").get<std::string>();
    ex.question = j.at("question").get<std::string>();
    ex.answer.text = j.at("answer").at("text").get<std::string>();
    ex.answer.type = ParseAnswerType(j.at("answer").at("type").get<std::string>());
    for (const auto& pj : j.at("paragraphs")) {
      Paragraph p;
      p.pid = pj.at("pid").get<int>();
      p.title = pj.at("title").get<std::string>();
      p.polarity = ParsePolarity(pj.at("polarity").get<std::string>());
      int sid = 0;
      for (const auto& s : pj.at("sentences")) {
        p.sentences.push_back({sid++, s.get<std::string>()});
      }
      ex.paragraphs.push_back(std::move(p));
    }
    if (j.contains("gold_evidence") && !j["gold_evidence"].is_null()) {
      SentenceSet gold;
      for (const auto& r : j["gold_evidence"]) {
        gold.insert({r.at(0).get<int>(), r.at(1).get<int>()});
      }
      ex.gold_evidence = std::move(gold);
    }
  } catch (const json::exception& e) {
    throw DataError(ex.qid + ": " + e.what());
  }
  return ex;
}

void WriteCorpus(const std::string& path,
                 const std::vector<MultiHopExample>& examples) {
  std::string out;
  for (const auto& ex : examples) {
    out += ExampleToJson(ex).dump();
    out.push_back('\n');
  }
  WriteTextFile(path, out);
}

std::vector<MultiHopExample> ReadCorpus(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<MultiHopExample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(ExampleFromJson(j));
  }
  return out;
}

std::optional<CharSpan> LocateAnswer(const Passage& passage,
                                     const Answer& answer,
                                     std::optional<SentenceRef> anchor) {
  const std::string& text = passage.resolved_text;
  const std::string& needle = answer.text;
  if (needle.empty()) return std::nullopt;
  auto span_at = [&](size_t pos) {
    return CharSpan{static_cast<int>(pos),
                    static_cast<int>(pos + needle.size())};
  };
  if (anchor) {
    int k = passage.IndexOf(*anchor);
    if (k >= 0) {
      CharSpan unit = passage.UnitSpan(k);
      size_t pos = text.find(needle, unit.begin);
      if (pos != std::string::npos &&
          pos + needle.size() <= static_cast<size_t>(unit.end)) {
        return span_at(pos);
      }
    }
  }
  size_t pos = text.find(needle);
  if (pos == std::string::npos) return std::nullopt;
  return span_at(pos);
}

std::optional<SentenceRef> FindAnswerSentence(const MultiHopExample& ex) {
  if (ex.answer.type != AnswerType::kSpan) {
    if (ex.gold_evidence && !ex.gold_evidence->empty()) {
      return *ex.gold_evidence->begin();
    }
    return std::nullopt;
  }
  for (const auto& p : ex.paragraphs) {
    if (p.polarity != Polarity::kPositive) continue;
    for (const auto& s : p.sentences) {
      if (s.text.find(ex.answer.text) != std::string::npos) {
        return SentenceRef{p.pid, s.sid};
      }
    }
  }
  return std::nullopt;
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed: " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pseudoev
