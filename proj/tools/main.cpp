// turnsig command-line interface.
//
// Subcommands:
//   synth       write a deterministic synthetic interview dataset
//   extract     dataset -> per-turn feature CSV
//   experiment  dataset + task -> AUROC, results.tsv, report.txt
//   ablate      dataset + task -> ablation.tsv
//   signature   CSV of path points -> signature coefficients (debug)
//
// Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to
// stderr; results go to files or stdout.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "turnsig/errors.hpp"
#include "turnsig/features.hpp"
#include "turnsig/pipeline.hpp"
#include "turnsig/sigcore.hpp"
#include "turnsig/synth.hpp"

namespace fs = std::filesystem;
using namespace turnsig;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::vector<feat::FeatureGroup> parse_groups(const std::string& csv) {
  std::vector<feat::FeatureGroup> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "ling" || item == "LING")
      out.push_back(feat::FeatureGroup::LING);
    else if (item == "cnt" || item == "CNT")
      out.push_back(feat::FeatureGroup::CNT);
    else if (item == "dial" || item == "DIAL")
      out.push_back(feat::FeatureGroup::DIAL);
    else
      throw CLI::ValidationError("--groups", "unknown feature group '" + item + "'");
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

struct ExperimentFlags {
  std::string data;
  std::string task = "bd-vs-bpd";
  std::string subject = "participant";
  std::string groups = "ling,cnt,dial";
  std::string selection_target = "ipde";
  std::string out_dir = ".";
  double p_threshold = -1.0;  // <0 means: default for the subject
  double fallback_threshold = 0.005;
  int sig_level = 3;
  double l2 = 1.0;
  std::size_t mattr_window = 10;
  std::uint64_t seed = 0;
  int top_k = 5;
  bool no_basepoint = false;
  bool no_znorm = false;
  bool print_config = false;

  pipe::ExperimentConfig to_config() const {
    pipe::ExperimentConfig cfg;
    cfg.task = pipe::task_from_string(task);
    cfg.subject = subject_from_string(subject);
    cfg.groups = parse_groups(groups);
    if (p_threshold >= 0.0) cfg.p_threshold = p_threshold;
    cfg.fallback_threshold = fallback_threshold;
    cfg.sig_level = sig_level;
    cfg.l2 = l2;
    cfg.mattr_window = mattr_window;
    cfg.seed = seed;
    cfg.top_k = top_k;
    cfg.basepoint = !no_basepoint;
    cfg.znorm = !no_znorm;
    cfg.selection_target = selection_target == "label" ? pipe::SelectionTarget::Label
                                                       : pipe::SelectionTarget::Ipde;
    cfg.validate();
    return cfg;
  }

  void dump(const pipe::ExperimentConfig& cfg, const std::string& lexicon_dir) const {
    std::cout << "data=" << data << "\n"
              << "lexicons=" << lexicon_dir << "\n"
              << "task=" << pipe::to_string(cfg.task) << "\n"
              << "subject=" << to_string(cfg.subject) << "\n"
              << "groups=" << groups << "\n"
              << "sig_level=" << cfg.sig_level << "\n"
              << "p_threshold=" << fmt("%g", cfg.resolved_threshold()) << "\n"
              << "fallback_threshold=" << fmt("%g", cfg.fallback_threshold) << "\n"
              << "l2=" << fmt("%g", cfg.l2) << "\n"
              << "basepoint=" << (cfg.basepoint ? 1 : 0) << "\n"
              << "znorm=" << (cfg.znorm ? 1 : 0) << "\n"
              << "mattr_window=" << cfg.mattr_window << "\n"
              << "seed=" << cfg.seed << "\n"
              << "selection_target="
              << (cfg.selection_target == pipe::SelectionTarget::Ipde ? "ipde" : "label") << "\n"
              << "top_k=" << cfg.top_k << "\n";
  }
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("--data", f.data, "dataset directory of .interview.json files")->required();
  cmd->add_option("--task", f.task, "h-vs-bd | h-vs-bpd | bd-vs-bpd");
  cmd->add_option("--subject", f.subject, "participant | interviewer | both");
  cmd->add_option("--groups", f.groups, "comma list of ling,cnt,dial");
  cmd->add_option("--p-threshold", f.p_threshold,
                  "selection p-value threshold (default 0.001, or 0.002 off-participant)");
  cmd->add_option("--fallback-threshold", f.fallback_threshold,
                  "threshold used when nothing selects");
  cmd->add_option("--sig-level", f.sig_level, "signature truncation level")->check(CLI::Range(1, 5));
  cmd->add_option("--l2", f.l2, "logistic L2 strength")->check(CLI::PositiveNumber);
  cmd->add_option("--mattr-window", f.mattr_window, "MATTR window in tokens");
  cmd->add_option("--seed", f.seed, "seed for permutation utilities");
  cmd->add_option("--top-k", f.top_k, "rows in report.txt");
  cmd->add_option("--selection-target", f.selection_target, "ipde | label");
  cmd->add_option("--out-dir", f.out_dir, "directory for result files");
  cmd->add_flag("--no-basepoint", f.no_basepoint, "skip basepoint augmentation");
  cmd->add_flag("--no-znorm", f.no_znorm, "skip per-dimension z-normalization");
  cmd->add_flag("--print-config", f.print_config, "dump the resolved configuration first");
}

int run_extract(const std::string& data, const std::string& out, const lex::LexiconSet& lexicons,
                std::size_t mattr_window) {
  std::vector<std::string> warnings;
  auto dataset = load_dataset(data, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  feat::FeatureConfig fc;
  fc.mattr_window = mattr_window;

  std::string csv = "interview_id,turn_index,speaker";
  for (auto g : feat::all_groups())
    for (const auto& name : feat::feature_names(g))
      csv += "," + std::string(feat::to_string(g)) + ":" + name;
  csv += '\n';

  for (const auto& iv : dataset) {
    feat::DialogueContext ctx;
    std::size_t index = 0;
    for (const auto& turn : iv.turns) {
      std::vector<feat::TurnFeatures> row{feat::ling_vector(turn, lexicons, fc),
                                          feat::cnt_vector(turn, lexicons),
                                          feat::dial_vector(turn, ctx)};
      csv += iv.id;
      csv += ',' + std::to_string(index) + ',';
      csv += to_string(turn.speaker);
      for (const auto& tf : row)
        for (std::size_t j = 0; j < tf.values.size(); ++j)
          csv += tf.missing[j] ? "," : "," + fmt("%.9g", tf.values[j]);
      csv += '\n';
      ctx.observe(turn);
      ++index;
    }
  }
  if (out == "-")
    std::cout << csv;
  else
    write_file(out, csv);
  return 0;
}

int run_signature(const std::string& csv_path, int level, bool basepoint) {
  std::ifstream in(csv_path);
  if (!in) throw DataError("cannot open " + csv_path);
  std::vector<std::vector<double>> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> pt;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        pt.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError(csv_path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (pt.empty()) continue;
    if (!points.empty() && pt.size() != points[0].size())
      throw ParseError(csv_path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(points[0].size()) + " columns, got " +
                       std::to_string(pt.size()));
    points.push_back(std::move(pt));
  }
  if (points.empty()) throw DataError(csv_path + ": no points");
  sig::Path path(points[0].size(), points);
  if (basepoint) path = sig::augment_basepoint(path);
  sig::Signature s = sig::path_signature(path, static_cast<std::size_t>(level));

  for (std::size_t k = 1; k <= s.level(); ++k) {
    auto coeffs = s.level_coeffs(k);
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
      sig::Word w = sig::word_of_index(k, idx, s.dim());
      std::string word = "(";
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) word += ',';
        word += std::to_string(w[i] + 1);  // letters printed 1-based
      }
      word += ')';
      std::cout << word << '\t' << fmt("%.6f", coeffs[idx]) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"turn-level path-signature features for annotated dialogue transcripts"};
  app.require_subcommand(1);
  app.set_config("--config", "", "file with long-option keys");
  app.fallthrough();

  std::string lexicon_dir = "lexicons";
  app.add_option("--lexicons", lexicon_dir, "lexicon directory")
      ->envname("TURNSIG_LEXICONS")
      ->capture_default_str();

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
  std::string synth_out = "synth_data";
  synth::SynthSpec spec;
  double effect_scale = 1.0;
  synth_cmd->add_option("--out", synth_out, "output directory")->capture_default_str();
  synth_cmd->add_option("--n-per-group", spec.n_per_group, "interviews per group")
      ->check(CLI::Range(2, 100000));
  synth_cmd->add_option("--seed", spec.seed, "generator seed");
  synth_cmd->add_option("--min-turns", spec.min_participant_turns, "min participant turns");
  synth_cmd->add_option("--max-turns", spec.max_participant_turns, "max participant turns");
  synth_cmd->add_option("--effects", effect_scale,
                        "scale on all planted group effects (0 disables them)");

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "per-turn feature CSV");
  std::string extract_data, extract_out = "-";
  std::size_t extract_window = 10;
  extract_cmd->add_option("--data", extract_data, "dataset directory")->required();
  extract_cmd->add_option("--out", extract_out, "CSV path, - for stdout")->capture_default_str();
  extract_cmd->add_option("--mattr-window", extract_window, "MATTR window in tokens");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "LOOCV classification for one task");
  ExperimentFlags exp_flags;
  add_experiment_flags(exp_cmd, exp_flags);

  // ablate
  auto* abl_cmd = app.add_subcommand("ablate", "feature-group ablation table");
  ExperimentFlags abl_flags;
  add_experiment_flags(abl_cmd, abl_flags);

  // signature
  auto* sig_cmd = app.add_subcommand("signature", "signature of a CSV of path points");
  std::string sig_csv;
  int sig_level = 3;
  bool sig_basepoint = false;
  sig_cmd->add_option("csv", sig_csv, "CSV file, one comma-separated point per line")->required();
  sig_cmd->add_option("--level", sig_level, "truncation level")->check(CLI::Range(1, 8));
  sig_cmd->add_flag("--basepoint", sig_basepoint, "prepend the origin");

  auto help_text = [&]() -> std::string {
    for (auto* sub : app.get_subcommands({}))
      if (sub->parsed()) return sub->help();
    return app.help();
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << help_text();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << help_text();
    return 1;
  }

  try {
    if (synth_cmd->parsed()) {
      auto scale = [&](double& v) { v *= effect_scale; };
      scale(spec.effects.bpd_nonfluency);
      scale(spec.effects.bpd_absolutist);
      scale(spec.effects.bpd_interruption);
      scale(spec.effects.bpd_speech_rate);
      scale(spec.effects.bd_vocab_narrowing);
      scale(spec.effects.bd_vocab_drift);
      scale(spec.effects.bd_speech_rate);
      scale(spec.effects.bd_long_pauses);
      scale(spec.effects.bd_verbosity);
      auto dataset = synth::generate_dataset(spec);
      synth::write_dataset(dataset, synth_out);
      std::cerr << "wrote " << dataset.size() << " interviews to " << synth_out << "\n";
      return 0;
    }
    if (extract_cmd->parsed()) {
      auto lexicons = lex::LexiconSet::load_dir(lexicon_dir);
      return run_extract(extract_data, extract_out, lexicons, extract_window);
    }
    if (exp_cmd->parsed()) {
      auto cfg = exp_flags.to_config();
      if (exp_flags.print_config) exp_flags.dump(cfg, lexicon_dir);
      auto lexicons = lex::LexiconSet::load_dir(lexicon_dir);
      std::vector<std::string> warnings;
      auto dataset = load_dataset(exp_flags.data, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      auto result = pipe::run_loocv(dataset, cfg, lexicons);
      fs::create_directories(exp_flags.out_dir);
      write_file(fs::path(exp_flags.out_dir) / "results.tsv", pipe::results_tsv(result));
      write_file(fs::path(exp_flags.out_dir) / "report.txt",
                 pipe::render_report(result.report, cfg.top_k));
      std::cout << "auroc=" << fmt("%.6f", result.auroc) << "\n";
      return 0;
    }
    if (abl_cmd->parsed()) {
      auto cfg = abl_flags.to_config();
      if (abl_flags.print_config) abl_flags.dump(cfg, lexicon_dir);
      auto lexicons = lex::LexiconSet::load_dir(lexicon_dir);
      std::vector<std::string> warnings;
      auto dataset = load_dataset(abl_flags.data, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      auto rows = pipe::run_ablation(dataset, cfg, lexicons);
      fs::create_directories(abl_flags.out_dir);
      auto tsv = pipe::ablation_tsv(rows);
      write_file(fs::path(abl_flags.out_dir) / "ablation.tsv", tsv);
      std::cout << tsv;
      return 0;
    }
    if (sig_cmd->parsed()) return run_signature(sig_csv, sig_level, sig_basepoint);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    // bad option combinations surface here (e.g. ablate without all groups)
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
