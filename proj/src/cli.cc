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

#include "pseudoev/cli.h"

#include <omp.h>

#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "json.hpp"
#include "pseudoev/config.h"
#include "pseudoev/corpus.h"
#include "pseudoev/evaluation.h"
#include "pseudoev/inference.h"
#include "pseudoev/interpreter.h"
#include "pseudoev/selector.h"
#include "pseudoev/setgen.h"
#include "pseudoev/synthetic.h"
#include "pseudoev/trainer.h"

namespace pseudoev {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Command {
  const char* name;
  const char* help;
  void (*run)(const RunConfig&, const std::string& out);
};

std::string Under(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void RequireFile(const std::string& key, const std::string& path) {
  if (path.empty()) {
    throw UsageError("missing required setting " + key + "=<path>");
  }
  if (!fs::exists(path)) throw DataError("missing file: " + path);
}

void WriteJson(const std::string& path, const json& j) {
  WriteTextFile(path, j.dump(2) + "\n");
}

std::map<std::string, const MultiHopExample*> ByQid(
    const std::vector<MultiHopExample>& examples) {
  std::map<std::string, const MultiHopExample*> out;
  for (const auto& ex : examples) out[ex.qid] = &ex;
  return out;
}

// Mean precision and recall of extracted sets against known gold evidence.
json EvidenceQuality(const std::vector<EvidenceSet>& sets,
                     const std::vector<MultiHopExample>& corpus) {
  auto by_qid = ByQid(corpus);
  double p = 0.0, r = 0.0, size = 0.0;
  int n = 0;
  for (const auto& e : sets) {
    auto it = by_qid.find(e.qid);
    if (it == by_qid.end() || !it->second->gold_evidence) continue;
    auto [pp, rr] = EvidenceRecallPrecision(e, *it->second->gold_evidence);
    p += pp;
    r += rr;
    size += e.members.size();
    ++n;
  }
  if (n == 0) return {{"n_scored", 0}};
  return {{"n_scored", n},
          {"precision", p / n},
          {"recall", r / n},
          {"mean_size", size / n}};
}

std::string TrainingLabel(const TrainConfig& t) {
  if (t.regime == Regime::kSingleParagraph) return "single_paragraph_baseline";
  switch (t.regularizer) {
    case Regularizer::kNone: return "no_evidence_sets";
    case Regularizer::kUniformKl: return "uniform_kl";
    case Regularizer::kBiasDecorrelate:
      return t.use_eplus ? "full" : "no_evidence_positive";
  }
  return "";
}

void GenData(const RunConfig& cfg, const std::string& out) {
  if (!cfg.input_json.empty()) {
    RequireFile("input_json", cfg.input_json);
    LoadStats stats;
    auto examples = LoadDistractorJson(cfg.input_json, &stats);
    std::string path =
        Under(out, fs::path(cfg.input_json).stem().string() + ".jsonl");
    WriteCorpus(path, examples);
    std::cout << fmt::format(
        "loaded {} of {} records ({} skipped: paragraph count, {} skipped: "
        "positive count, {} skipped: answer missing) -> {}\n",
        stats.n_loaded, stats.n_records, stats.n_skipped_paragraph_count,
        stats.n_skipped_positive_count, stats.n_skipped_answer_missing, path);
    return;
  }
  SyntheticConfig sc = cfg.synthetic;
  sc.n_examples = cfg.n_train;
  sc.qid_prefix = "train";
  WriteCorpus(Under(out, "train.jsonl"), GenerateSynthetic(sc));
  sc.n_examples = cfg.n_dev;
  sc.seed = cfg.seed + 1;
  sc.qid_prefix = "dev";
  WriteCorpus(Under(out, "dev.jsonl"), GenerateSynthetic(sc));
  std::cout << fmt::format("wrote {} train and {} dev examples to {}\n",
                           cfg.n_train, cfg.n_dev, out);
}

void BuildSets(const RunConfig& cfg, const std::string& out) {
  RequireFile("train_corpus", cfg.TrainCorpus());
  auto corpus = ReadCorpus(cfg.TrainCorpus());
  SetGenStats stats;
  auto instances = BuildRegimeInstances(corpus, cfg.train, &stats);
  WriteInstances(Under(out, "instances.jsonl"), instances);

  std::map<std::string, std::vector<TrainingInstance>> by_qid;
  for (const auto& inst : instances) by_qid[inst.qid].push_back(inst);
  LabelAudit audit;
  std::map<std::string, int> counts;
  for (const auto& inst : instances) ++counts[std::string(ToString(inst.set))];
  for (const auto& ex : corpus) {
    if (!ex.gold_evidence) continue;
    LabelAudit a = AuditLabels(by_qid[ex.qid], ex);
    audit.n_checked += a.n_checked;
    audit.n_violations += a.n_violations;
  }
  WriteJson(Under(out, "sets.json"),
            {{"counts", counts},
             {"audit", {{"n_checked", audit.n_checked},
                        {"n_violations", audit.n_violations}}},
             {"n_neg_capped", stats.n_neg_capped},
             {"n_missing_answer_sentence", stats.n_missing_answer_sentence},
             {"n_unlocatable_span", stats.n_unlocatable_span}});
  std::cout << fmt::format("{} instances, audit {} checked / {} violations\n",
                           instances.size(), audit.n_checked,
                           audit.n_violations);
}

void Train(const RunConfig& cfg, const std::string& out) {
  RequireFile("train_corpus", cfg.TrainCorpus());
  RequireFile("dev_corpus", cfg.DevCorpus());
  auto train = ReadCorpus(cfg.TrainCorpus());
  auto dev = ReadCorpus(cfg.DevCorpus());
  Vocabulary vocab = Vocabulary::Build(train);
  std::cout << fmt::format("training [{}] on {} examples, vocab {}\n",
                           TrainingLabel(cfg.train), train.size(),
                           vocab.size());
  auto result = RunCurriculum(train, dev, vocab, cfg.train, out,
                              [](const EpochLog& e) {
                                std::cout << fmt::format(
                                    "epoch {} L_total {:.4f} dev L_A {:.4f} "
                                    "({:.1f}s)\n",
                                    e.epoch, e.loss.L_total,
                                    e.dev_answer_loss, e.seconds);
                              });
  const auto& last = result.epochs.back();
  json summary = {
      {"configuration", TrainingLabel(cfg.train)},
      {"regularizer", ToString(cfg.train.regularizer)},
      {"final_L_total", last.loss.L_total},
      {"initial_dev_L_A", result.initial_dev_answer_loss},
      {"final_dev_L_A", last.dev_answer_loss},
      {"n_dropped_truncated", result.n_dropped},
      {"n_eplus", result.eplus.size()},
      {"n_eplus_instances", result.n_eplus_instances},
      {"interpreter",
       {{"n_failed", result.interpreter_stats.n_failed},
        {"n_unlocatable", result.interpreter_stats.n_unlocatable}}},
      {"eplus_quality", EvidenceQuality(result.eplus, train)}};
  WriteJson(Under(out, "summary.json"), summary);
  std::cout << fmt::format("final L_total {:.10g}; model at {}\n",
                           last.loss.L_total, Under(out, "model.ckpt"));
}

void Interpret(const RunConfig& cfg, const std::string& out) {
  RequireFile("model", cfg.model_path);
  RequireFile("train_corpus", cfg.TrainCorpus());
  auto [model, vocab] = QaModel::Load(cfg.model_path);
  auto corpus = ReadCorpus(cfg.TrainCorpus());
  std::vector<TrainingInstance> positives;
  for (const auto& ex : corpus) {
    auto sets = BuildAnswerSets(ex, 0, cfg.seed);
    for (auto& inst : sets.first) positives.push_back(std::move(inst));
  }
  ModelConfidence oracle(model, vocab, cfg.train.token_budget);
  InterpreterStats stats;
  auto results = ExtractAll(oracle, positives, cfg.train.interpreter, &stats);
  std::vector<EvidenceSet> sets;
  for (auto& r : results) {
    if (r) sets.push_back(std::move(*r));
  }
  WriteEvidenceSets(Under(out, "eplus.jsonl"), sets);
  json summary = {{"strategy", ToString(cfg.train.interpreter.strategy)},
                  {"T", cfg.train.interpreter.T},
                  {"n_extracted", stats.n_extracted},
                  {"n_failed", stats.n_failed},
                  {"n_unlocatable", stats.n_unlocatable},
                  {"quality", EvidenceQuality(sets, corpus)}};
  WriteJson(Under(out, "interpret.json"), summary);
  std::cout << summary.dump() << "\n";
}

void TrainSelectorCmd(const RunConfig& cfg, const std::string& out) {
  RequireFile("train_corpus", cfg.TrainCorpus());
  RequireFile("eplus", cfg.eplus_path);
  auto corpus = ReadCorpus(cfg.TrainCorpus());
  auto eplus = ReadEvidenceSets(cfg.eplus_path);
  Vocabulary vocab = Vocabulary::Build(corpus);
  std::vector<TrainingInstance> positives;
  for (const auto& ex : corpus) {
    auto sets = BuildAnswerSets(ex, 0, cfg.seed);
    for (auto& inst : sets.first) positives.push_back(std::move(inst));
  }
  SelectorStats stats;
  SelectorModel selector =
      TrainSelector(positives, eplus, vocab, cfg.selector, &stats);
  selector.Save(Under(out, "selector.ckpt"), vocab);
  WriteJson(Under(out, "selector.json"),
            {{"n_passages", stats.n_passages},
             {"n_positive", stats.n_positive},
             {"n_negative", stats.n_negative},
             {"n_truncated", stats.n_truncated},
             {"n_unmatched", stats.n_unmatched},
             {"epoch_loss", stats.epoch_loss}});
  std::cout << fmt::format("selector trained on {} passages -> {}\n",
                           stats.n_passages, Under(out, "selector.ckpt"));
}

std::vector<PredictionRecord> RunPredictions(const RunConfig& cfg,
                                             const std::string& out) {
  RequireFile("model", cfg.model_path);
  RequireFile("dev_corpus", cfg.DevCorpus());
  std::optional<SelectorModel> selector;
  if (cfg.predict.mode == InferenceMode::kSelectedEvidences) {
    RequireFile("selector", cfg.selector_path);
    selector = SelectorModel::Load(cfg.selector_path).first;
  }
  auto [model, vocab] = QaModel::Load(cfg.model_path);
  auto dev = ReadCorpus(cfg.DevCorpus());
  auto records = PredictAll(model, vocab, selector ? &*selector : nullptr, dev,
                            cfg.predict);
  WritePredictions(Under(out, "predictions.jsonl"), records);
  return records;
}

void PredictCmd(const RunConfig& cfg, const std::string& out) {
  auto records = RunPredictions(cfg, out);
  std::cout << fmt::format("{} predictions ({}) -> {}\n", records.size(),
                           ToString(cfg.predict.mode),
                           Under(out, "predictions.jsonl"));
}

void EvaluateCmd(const RunConfig& cfg, const std::string& out) {
  RequireFile("model", cfg.model_path);
  std::set<std::string> challenge;
  if (!cfg.challenge_path.empty()) {
    RequireFile("challenge", cfg.challenge_path);
    json j = json::parse(ReadTextFile(cfg.challenge_path));
    for (const auto& q : j.at("qids")) challenge.insert(q.get<std::string>());
  }
  auto records = RunPredictions(cfg, out);
  auto dev = ReadCorpus(cfg.DevCorpus());
  EvalReport report = Evaluate(dev, records,
                               cfg.challenge_path.empty() ? nullptr : &challenge);
  json j = ReportToJson(report);
  j["mode"] = ToString(cfg.predict.mode);
  WriteJson(Under(out, "report.json"), j);
  WriteTextFile(Under(out, "per_example.csv"), PerExampleCsv(report));
  std::cout << j.dump() << "\n";
}

void ChallengeSetCmd(const RunConfig& cfg, const std::string& out) {
  RequireFile("model", cfg.model_path);
  RequireFile("dev_corpus", cfg.DevCorpus());
  auto [model, vocab] = QaModel::Load(cfg.model_path);
  auto dev = ReadCorpus(cfg.DevCorpus());
  auto qids = BuildChallengeSet(
      dev, ModelBaseline(model, vocab, cfg.train.token_budget,
                         cfg.predict.max_span_len));
  WriteJson(Under(out, "challenge.json"),
            {{"n_dev", dev.size()}, {"n_challenge", qids.size()},
             {"qids", qids}});
  std::cout << fmt::format("{} of {} dev examples survive\n", qids.size(),
                           dev.size());
}

void ConfidenceCurvesCmd(const RunConfig& cfg, const std::string& out) {
  RequireFile("model", cfg.model_path);
  RequireFile("dev_corpus", cfg.DevCorpus());
  auto [model, vocab] = QaModel::Load(cfg.model_path);
  auto dev = ReadCorpus(cfg.DevCorpus());
  auto curves = ComputeConfidenceCurves(
      dev, ModelSubsetConfidence(model, vocab, cfg.train.token_budget));
  WriteTextFile(Under(out, "curves.csv"), CurvesCsv(curves));
  WriteTextFile(Under(out, "curves.svg"), CurvesSvg(curves));
  WriteJson(Under(out, "curves.json"), CurvesSummary(curves));
  std::cout << CurvesSummary(curves).dump() << "\n";
}

const std::vector<Command>& Commands() {
  static const std::vector<Command> commands = {
      {"gen-data", "generate the synthetic corpus or convert distractor JSON",
       GenData},
      {"build-sets", "build A+/A-/E- training instances and audit them",
       BuildSets},
      {"train", "train the QA model with the delayed curriculum", Train},
      {"interpret", "extract pseudo evidence sets with a trained model",
       Interpret},
      {"train-selector", "train the evidence selector on E+ sets",
       TrainSelectorCmd},
      {"predict", "write predictions for the dev corpus", PredictCmd},
      {"evaluate", "predict and score the dev corpus", EvaluateCmd},
      {"challenge-set", "filter dev examples a single paragraph can answer",
       ChallengeSetCmd},
      {"confidence-curves", "target-head confidence on dev E+ and E-",
       ConfidenceCurvesCmd},
  };
  return commands;
}

// key=value, --key=value and --key value.
std::vector<std::string> Overrides(const std::vector<std::string>& extras) {
  std::vector<std::string> out;
  for (size_t i = 0; i < extras.size(); ++i) {
    std::string a = extras[i];
    if (a.rfind("--", 0) == 0) {
      a = a.substr(2);
      if (a.find('=') == std::string::npos) {
        if (i + 1 >= extras.size()) {
          throw UsageError("option --" + a + " needs a value");
        }
        a += "=" + extras[++i];
      }
    } else if (a.find('=') == std::string::npos) {
      throw UsageError("unexpected argument '" + a + "'");
    }
    out.push_back(a);
  }
  return out;
}

}  // namespace

int RunCli(const std::vector<std::string>& args) {
  CLI::App app{"Pseudo-evidentiality training for multi-hop QA", "pseudoev"};
  app.require_subcommand(1);
  std::map<std::string, std::string> config_files;
  for (const auto& c : Commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->allow_extras();
    sub->add_option("--config", config_files[c.name],
                    "key = value configuration file");
    sub->footer("Settings: key=value or --key value. Valid keys: " + [] {
      std::string s;
      for (const auto& k : ConfigKeys()) s += (s.empty() ? "" : ", ") + k;
      return s;
    }());
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  for (const auto& c : Commands()) {
    CLI::App* sub = app.get_subcommand(c.name);
    if (!sub->parsed()) continue;
    try {
      RunConfig cfg =
          LoadConfig(config_files[c.name], Overrides(sub->remaining()));
      if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
      std::string out = cfg.out;
      if (out.empty()) {
        out = std::string(c.name) == "gen-data" ? cfg.data_dir
                                                : Under("runs", c.name);
      }
      fs::create_directories(out);
      WriteTextFile(Under(out, "config.txt"), EchoConfig(cfg));
      c.run(cfg, out);
      return kExitOk;
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const DataError& e) {
      std::cerr << "data error: " << e.what() << "\n";
      return kExitData;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitRuntime;
    }
  }
  return kExitUsage;
}

int RunCli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return RunCli(args);
}

}  // namespace pseudoev
