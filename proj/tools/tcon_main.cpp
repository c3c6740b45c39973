/*
 * Copyright 2026 The TCoN Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tcon/checkpoint.hpp"
#include "tcon/coattention.hpp"
#include "tcon/data.hpp"
#include "tcon/errors.hpp"
#include "tcon/gradcheck.hpp"
#include "tcon/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

ordered_json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tcon::config_error("cannot open " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw tcon::config_error(path + ": " + e.what());
  }
  return j;
}

int cmd_gen(const std::string& spec_path, const std::string& out_dir) {
  const tcon::SyntheticSpec spec =
      tcon::SyntheticSpec::from_json(load_json(spec_path));
  auto [source, target] = tcon::generate(spec);
  fs::create_directories(out_dir);
  tcon::write_features((fs::path(out_dir) / "source.fseq").string(), source);
  tcon::write_features((fs::path(out_dir) / "target.fseq").string(), target);
  ordered_json labels;
  for (const auto& v : target)
    labels[std::to_string(v.id)] = v.label;
  std::ofstream lf(fs::path(out_dir) / "eval-labels.json");
  lf << labels.dump(2) << "\n";
  std::printf("wrote %zu source and %zu target videos to %s\n", source.size(),
              target.size(), out_dir.c_str());
  return 0;
}

int cmd_train(const std::string& source_path, const std::string& target_path,
              const std::string& config_path, const std::string& out_dir) {
  const tcon::TrainConfig cfg =
      tcon::TrainConfig::from_json(load_json(config_path));
  const tcon::Dataset source = tcon::read_features(source_path);
  const tcon::Dataset target = tcon::read_features(target_path);
  tcon::Trainer trainer(cfg, source, target);
  const auto history = trainer.run(out_dir);
  const auto& last = history.back();
  std::printf("epochs=%zu final_target_accuracy=%.4f source_accuracy=%.4f\n",
              cfg.epochs, last.target_accuracy, last.source_accuracy);
  return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::string& target_path) {
  const tcon::LoadedCheckpoint ckpt = tcon::load_checkpoint(ckpt_path);
  tcon::Dataset target = tcon::read_features(target_path);
  target = tcon::prepare_dataset(target, ckpt.meta.kt,
                                 ckpt.meta.l2_normalize_features);
  const tcon::EvalResult res = tcon::evaluate_dataset(
      ckpt.nets, target,
      tcon::attention_mode_from_string(ckpt.meta.attention_mode));
  ordered_json j;
  j["accuracy"] = res.accuracy;
  j["correct"] = res.correct;
  j["total"] = res.total;
  j["attention_mode"] = ckpt.meta.attention_mode;
  std::cout << j.dump() << "\n";
  return 0;
}

void write_coattn_csv(const std::string& path, int64_t pair_id,
                      uint32_t src_id, uint32_t tgt_id, size_t ks, size_t kt,
                      const char* kind, const std::vector<double>& m) {
  std::ofstream out(path);
  if (!out) throw tcon::config_error("cannot open " + path);
  char header[160];
  std::snprintf(header, sizeof(header),
                "# pair=%" PRId64 " src=%u tgt=%u Ks=%zu Kt=%zu kind=%s",
                pair_id, src_id, tgt_id, ks, kt, kind);
  out << header << "\n";
  char num[64];
  for (size_t r = 0; r < ks; ++r) {
    for (size_t c = 0; c < kt; ++c) {
      std::snprintf(num, sizeof(num), "%.17g", m[r * kt + c]);
      out << num << (c + 1 == kt ? "" : ",");
    }
    out << "\n";
  }
}

int cmd_dump_coattn(const std::string& ckpt_path,
                    const std::string& source_path,
                    const std::string& target_path,
                    const std::string& pairs_arg, const std::string& out_dir) {
  const tcon::LoadedCheckpoint ckpt = tcon::load_checkpoint(ckpt_path);
  tcon::Dataset source = tcon::read_features(source_path);
  tcon::Dataset target = tcon::read_features(target_path);
  source = tcon::prepare_dataset(source, ckpt.meta.ks,
                                 ckpt.meta.l2_normalize_features);
  target = tcon::prepare_dataset(target, ckpt.meta.kt,
                                 ckpt.meta.l2_normalize_features);

  std::vector<int64_t> pair_ids;
  {
    std::string token;
    for (char ch : pairs_arg + ",") {
      if (ch == ',') {
        if (!token.empty()) pair_ids.push_back(std::stoll(token));
        token.clear();
      } else {
        token += ch;
      }
    }
  }
  if (pair_ids.empty()) throw tcon::config_error("--pairs lists no pair ids");

  fs::create_directories(out_dir);
  const auto n_t = static_cast<int64_t>(target.size());
  for (int64_t pid : pair_ids) {
    if (pid < 0 || pid >= static_cast<int64_t>(source.size()) * n_t)
      throw tcon::config_error("pair id " + std::to_string(pid) +
                               " out of range");
    const auto i = static_cast<size_t>(pid / n_t);
    const auto j = static_cast<size_t>(pid % n_t);
    // Pair features go through the trained projector, like in training.
    tcon::FeatureSequence s = source[i];
    tcon::FeatureSequence t = target[j];
    if (ckpt.nets.projector_enabled) {
      s.feats = ckpt.nets.projector.forward_values(s.feats);
      t.feats = ckpt.nets.projector.forward_values(t.feats);
    }
    tcon::CoAttentionMatrix m = tcon::coattention_matrix(s, t);
    m.pair_id = pid;
    const std::string base =
        (fs::path(out_dir) / ("pair" + std::to_string(pid))).string();
    write_coattn_csv(base + "_raw.csv", pid, source[i].id, target[j].id, m.ks,
                     m.kt, "raw", m.a_co_raw);
    write_coattn_csv(base + "_colnorm.csv", pid, source[i].id, target[j].id,
                     m.ks, m.kt, "colnorm", m.a_co_colnorm);
  }
  std::printf("wrote %zu pair dumps to %s\n", pair_ids.size(),
              out_dir.c_str());
  return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& variants_arg,
               const std::string& out_dir, const std::string& source_path,
               const std::string& target_path,
               const std::string& data_spec_path) {
  const tcon::TrainConfig base_cfg =
      tcon::TrainConfig::from_json(load_json(config_path));

  tcon::Dataset source, target;
  if (!source_path.empty() && !target_path.empty()) {
    source = tcon::read_features(source_path);
    target = tcon::read_features(target_path);
  } else {
    tcon::SyntheticSpec spec;
    if (!data_spec_path.empty())
      spec = tcon::SyntheticSpec::from_json(load_json(data_spec_path));
    std::tie(source, target) = tcon::generate(spec);
  }

  std::vector<std::string> variants;
  {
    std::string token;
    for (char ch : variants_arg + ",") {
      if (ch == ',') {
        if (!token.empty()) variants.push_back(token);
        token.clear();
      } else {
        token += ch;
      }
    }
  }

  auto variant_config = [&](const std::string& name) {
    tcon::TrainConfig c = base_cfg;
    if (name == "sadnet")
      c.disable_segment_disc = true;
    else if (name == "tadnet")
      c.disable_aligned_features = true;
    else if (name == "coattn")
      c.self_attention_only = true;
    else if (name == "attn")
      c.uniform_attention_classifier = true;
    else
      throw tcon::config_error("unknown variant: " + name +
                               " (expected sadnet|tadnet|coattn|attn)");
    c.validate();
    return c;
  };
  for (const auto& v : variants) variant_config(v);  // fail fast

  fs::create_directories(out_dir);
  std::map<std::string, double> final_acc;

  auto run_one = [&](const std::string& name, const tcon::TrainConfig& cfg) {
    tcon::Trainer trainer(cfg, source, target);
    const auto history =
        trainer.run((fs::path(out_dir) / name).string());
    final_acc[name] = history.back().target_accuracy;
    std::printf("%-8s target_accuracy=%.4f\n", name.c_str(),
                history.back().target_accuracy);
  };

  run_one("full", base_cfg);
  for (const auto& v : variants) run_one(v, variant_config(v));

  std::ofstream csv(fs::path(out_dir) / "ablation_summary.csv");
  csv << "variant,target_accuracy,delta_vs_full\n";
  char line[160];
  std::snprintf(line, sizeof(line), "full,%.6f,0\n", final_acc["full"]);
  csv << line;
  for (const auto& v : variants) {
    std::snprintf(line, sizeof(line), "%s,%.6f,%.6f\n", v.c_str(),
                  final_acc[v], final_acc[v] - final_acc["full"]);
    csv << line;
  }
  std::printf("summary: %s\n",
              (fs::path(out_dir) / "ablation_summary.csv").string().c_str());
  return 0;
}

int cmd_gradcheck() {
  const tcon::GradCheckReport report = tcon::run_gradcheck();
  for (const auto& r : report.results)
    std::printf("%-36s elements=%-4zu max_rel_err=%.3e  %s\n", r.name.c_str(),
                r.elements, r.max_rel_err, r.passed ? "pass" : "FAIL");
  if (!report.all_passed()) {
    std::printf("gradcheck FAILED (eps=%g, tol=%g)\n", report.eps,
                report.tol);
    return 1;
  }
  std::printf("gradcheck passed (eps=%g, tol=%g)\n", report.eps, report.tol);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal co-attention network trainer"};
  app.require_subcommand(1);

  std::string spec_path, out_dir, source_path, target_path, config_path,
      ckpt_path, pairs_arg, variants_arg, data_spec_path;

  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset pair");
  gen->add_option("--spec", spec_path, "Dataset spec JSON")->required();
  gen->add_option("--out", out_dir, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train on feature files");
  train->add_option("--source", source_path, "Source .fseq")->required();
  train->add_option("--target", target_path, "Target .fseq")->required();
  train->add_option("--config", config_path, "Train config JSON")->required();
  train->add_option("--out", out_dir, "Run directory")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", ckpt_path, "Checkpoint file")->required();
  eval->add_option("--target", target_path, "Target .fseq")->required();

  auto* dump = app.add_subcommand("dump-coattn",
                                  "Dump co-attention matrices as CSV");
  dump->add_option("--checkpoint", ckpt_path, "Checkpoint file")->required();
  dump->add_option("--source", source_path, "Source .fseq")->required();
  dump->add_option("--target", target_path, "Target .fseq")->required();
  dump->add_option("--pairs", pairs_arg, "Comma-separated pair ids")
      ->required();
  dump->add_option("--out", out_dir, "Output directory")->required();

  auto* ablate = app.add_subcommand("ablate", "Run ablation variants");
  ablate->add_option("--config", config_path, "Train config JSON")->required();
  ablate->add_option("--variants", variants_arg,
                     "Comma-separated: sadnet,tadnet,coattn,attn")
      ->required();
  ablate->add_option("--out", out_dir, "Output directory")->required();
  ablate->add_option("--source", source_path,
                     "Source .fseq (default: generate synthetic)");
  ablate->add_option("--target", target_path,
                     "Target .fseq (default: generate synthetic)");
  ablate->add_option("--data-spec", data_spec_path,
                     "Synthetic spec JSON when generating");

  auto* gradcheck = app.add_subcommand(
      "gradcheck", "Finite-difference check of every loss gradient");
  (void)gradcheck;

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(spec_path, out_dir);
    if (train->parsed())
      return cmd_train(source_path, target_path, config_path, out_dir);
    if (eval->parsed()) return cmd_eval(ckpt_path, target_path);
    if (dump->parsed())
      return cmd_dump_coattn(ckpt_path, source_path, target_path, pairs_arg,
                             out_dir);
    if (ablate->parsed())
      return cmd_ablate(config_path, variants_arg, out_dir, source_path,
                        target_path, data_spec_path);
    if (gradcheck->parsed()) return cmd_gradcheck();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
