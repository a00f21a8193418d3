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

#include "pseudoev/synthetic.h"

#include <algorithm>
#include <random>
#include <set>

namespace pseudoev {

namespace {

constexpr int kPoolSize = 240;

// rng() % n is portable across standard libraries, unlike the
// distribution classes.
size_t Pick(std::mt19937_64& rng, size_t n) { return rng() % n; }

template <typename T>
void Shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[Pick(rng, i)]);
}

std::vector<std::string> MakeNames(uint64_t seed, int count,
                                   std::set<std::string>* taken) {
  static const char kConsonants[] = "bdfgklmnprstvz";
  static const char kVowels[] = "aeiou";
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  while (static_cast<int>(names.size()) < count) {
    std::string name;
    for (int k = 0; k < 3; ++k) {
      name.push_back(kConsonants[Pick(rng, 14)]);
      name.push_back(kVowels[Pick(rng, 5)]);
    }
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
    if (taken->insert(name).second) names.push_back(name);
  }
  return names;
}

struct NamePools {
  std::vector<std::string> persons;
  std::vector<std::string> places;
};

const NamePools& Pools() {
  static const NamePools pools = [] {
    std::set<std::string> taken;
    NamePools p;
    p.persons = MakeNames(0x5eed0001, kPoolSize, &taken);
    p.places = MakeNames(0x5eed0002, kPoolSize, &taken);
    return p;
  }();
  return pools;
}

const std::vector<std::string> kJobs = {"teacher", "painter", "farmer",
                                        "doctor",  "sailor",  "baker"};
const std::vector<std::string> kHobbies = {"chess", "fishing", "music",
                                           "hiking", "poetry"};
const std::vector<std::string> kTopics = {"history", "birds", "trains",
                                          "gardens", "ships"};
const std::vector<std::string> kThings = {"bridges", "markets", "castle",
                                          "harbor",  "museum",  "cheese"};
const std::vector<std::string> kEvents = {"festival", "fair", "race",
                                          "concert"};
const std::vector<std::string> kYears = {"1820", "1865", "1901",
                                         "1937", "1954", "1988"};
const std::vector<std::string> kCounts = {"two", "three", "four", "five",
                                          "six"};
const std::vector<std::string> kPopulations = {"9000", "12000", "40000",
                                               "75000", "300000"};

template <typename T>
const T& Choose(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[Pick(rng, v.size())];
}

std::string PersonFiller(int kind, const std::string& who,
                         std::mt19937_64& rng) {
  switch (kind % 4) {
    case 0: return who + " worked as a " + Choose(kJobs, rng) + " .";
    case 1: return who + " enjoyed " + Choose(kHobbies, rng) + " on weekends .";
    case 2:
      return who + " wrote " + Choose(kCounts, rng) + " books about " +
             Choose(kTopics, rng) + " .";
    default:
      return who + " married a " + Choose(kJobs, rng) + " in " +
             Choose(kYears, rng) + " .";
  }
}

std::string PlaceFiller(int kind, const std::string& where,
                        std::mt19937_64& rng) {
  switch (kind % 4) {
    case 0: return where + " is famous for its " + Choose(kThings, rng) + " .";
    case 1:
      return where + " has a population of " + Choose(kPopulations, rng) + " .";
    case 2:
      return where + " hosts a " + Choose(kEvents, rng) + " every year .";
    default: return where + " was founded in " + Choose(kYears, rng) + " .";
  }
}

// Fills `slots` sentence texts about `subject`, keeping chain facts at
// random positions. Returns the chain fact positions.
std::vector<int> FillParagraph(const std::vector<std::string>& facts,
                               const std::string& subject, bool is_person,
                               int slots, std::mt19937_64& rng,
                               std::vector<std::string>* out) {
  std::vector<int> positions(slots);
  for (int i = 0; i < slots; ++i) positions[i] = i;
  Shuffle(positions, rng);
  positions.resize(facts.size());
  std::sort(positions.begin(), positions.end());

  std::vector<int> kinds = {0, 1, 2, 3};
  Shuffle(kinds, rng);
  out->assign(slots, std::string());
  size_t next_fact = 0, next_kind = 0;
  for (int i = 0; i < slots; ++i) {
    if (next_fact < positions.size() && positions[next_fact] == i) {
      (*out)[i] = facts[next_fact++];
      continue;
    }
    int kind = kinds[next_kind++ % kinds.size()];
    (*out)[i] = is_person ? PersonFiller(kind, subject, rng)
                          : PlaceFiller(kind, subject, rng);
  }
  return positions;
}

}  // namespace

const std::vector<std::string>& SyntheticPersonNames() {
  return Pools().persons;
}
const std::vector<std::string>& SyntheticPlaceNames() { return Pools().places; }

std::vector<MultiHopExample> GenerateSynthetic(const SyntheticConfig& config) {
  if (config.n_examples < 0) throw UsageError("n_examples must be >= 0");
  if (config.chain_length < 1) throw UsageError("chain_length must be >= 1");
  if (config.n_distractor_paragraphs < 0) {
    throw UsageError("n_distractor_paragraphs must be >= 0");
  }
  if (config.sentences_per_paragraph < 1) {
    throw UsageError("sentences_per_paragraph must be >= 1");
  }
  const int L = config.chain_length;
  const int spp = config.sentences_per_paragraph;
  const int first_half = (L + 1) / 2;
  if (L > 2 * spp || first_half > spp) {
    throw UsageError("chain_length " + std::to_string(L) +
                     " exceeds the sentence budget of two paragraphs (" +
                     std::to_string(2 * spp) + ")");
  }
  const auto& persons = Pools().persons;
  const auto& places = Pools().places;
  if (L + 1 + config.n_distractor_paragraphs > kPoolSize) {
    throw UsageError("too many entities requested per example");
  }

  std::mt19937_64 rng(config.seed);
  std::vector<MultiHopExample> out;
  out.reserve(config.n_examples);
  for (int n = 0; n < config.n_examples; ++n) {
    MultiHopExample ex;
    ex.qid = config.qid_prefix + "-" + std::to_string(n);

    // Chain entities: a person followed by L places.
    std::vector<std::string> chain;
    chain.push_back(Choose(persons, rng));
    std::set<std::string> used_places;
    while (static_cast<int>(chain.size()) < L + 1) {
      const std::string& c = Choose(places, rng);
      if (used_places.insert(c).second) chain.push_back(c);
    }
    std::vector<std::string> facts;
    for (int i = 0; i < L; ++i) {
      facts.push_back(chain[i] + (i == 0 ? " was born in " : " is located in ") +
                      chain[i + 1] + " .");
    }
    ex.answer = {chain[L], AnswerType::kSpan};
    if (L == 1) {
      ex.question = "Where was " + chain[0] + " born ?";
    } else if (L == 2) {
      ex.question = "Where is the birthplace of " + chain[0] + " located ?";
    } else {
      ex.question = "Which region contains the birthplace of " + chain[0] +
                    " , " + std::to_string(L - 1) + " levels up ?";
    }

    const int total = 2 + config.n_distractor_paragraphs;
    std::vector<int> order(total);
    for (int i = 0; i < total; ++i) order[i] = i;
    Shuffle(order, rng);
    int pid_a = std::min(order[0], order[1]);
    int pid_b = std::max(order[0], order[1]);
    // The first half of the chain goes to a randomly chosen positive slot.
    if (Pick(rng, 2) == 1) std::swap(pid_a, pid_b);

    ex.paragraphs.resize(total);
    SentenceSet gold;

    std::vector<std::string> texts;
    std::vector<std::string> facts_a(facts.begin(), facts.begin() + first_half);
    auto pos_a = FillParagraph(facts_a, chain[0], true, spp, rng, &texts);
    Paragraph& pa = ex.paragraphs[pid_a];
    pa.title = chain[0];
    for (int i = 0; i < spp; ++i) pa.sentences.push_back({i, texts[i]});
    for (int p : pos_a) gold.insert({pid_a, p});

    std::vector<std::string> facts_b(facts.begin() + first_half, facts.end());
    const bool b_is_person = (L == 1);
    const std::string& b_subject = b_is_person ? chain[0] : chain[first_half];
    auto pos_b = FillParagraph(facts_b, b_subject, b_is_person, spp, rng, &texts);
    Paragraph& pb = ex.paragraphs[pid_b];
    pb.title = b_subject;
    for (int i = 0; i < spp; ++i) pb.sentences.push_back({i, texts[i]});
    for (int p : pos_b) gold.insert({pid_b, p});

    pa.polarity = Polarity::kPositive;
    pb.polarity = Polarity::kPositive;

    std::set<std::string> banned(chain.begin(), chain.end());
    for (int k = 2; k < total; ++k) {
      Paragraph& pd = ex.paragraphs[order[k]];
      const bool is_person = Pick(rng, 2) == 0;
      const auto& pool = is_person ? persons : places;
      std::string subject;
      do {
        subject = Choose(pool, rng);
      } while (banned.count(subject));
      banned.insert(subject);
      FillParagraph({}, subject, is_person, spp, rng, &texts);
      pd.title = subject;
      for (int i = 0; i < spp; ++i) pd.sentences.push_back({i, texts[i]});
      pd.polarity = Polarity::kNegative;
    }
    for (int i = 0; i < total; ++i) ex.paragraphs[i].pid = i;
    ex.gold_evidence = std::move(gold);
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace pseudoev
