#include "sportscaster/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "sportscaster/corpus.h"
#include "sportscaster/learner.h"
#include "sportscaster/metrics.h"
#include "sportscaster/report.h"
#include "sportscaster/simgen.h"
#include "sportscaster/strategic.h"
#include "sportscaster/text.h"
#include "sportscaster/translator.h"

namespace sportscaster::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string config;
  std::string manifest;
  std::string model;
  std::string strategic;
  std::string input;
  std::string matching;
  std::string init_alignment;
  std::string out;
  std::string games;
  std::string split = "all";
  std::string language = "en";
  std::string strategy = "nist_igsl";
  std::string profile = "default";
  corpus::TimeMs window_ms = corpus::kDefaultWindowMs;
  corpus::TimeMs tick_ms = 1000;
  std::size_t max_iter = 10;
  std::size_t igsl_max_iter = 50;
  std::size_t sim_games = 4;
  double superfluous_rate = 0.1;
  std::uint64_t seed = 0;
  std::size_t topk = 5;
  bool superfluous_cv = false;
  bool json = false;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw corpus::FormatError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path require_out(const RunConfig& c) {
  if (c.out.empty()) throw UsageError("--out is required");
  fs::create_directories(c.out);
  return c.out;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

// Game indices from "1,3" or "game1,game3"; all games when empty.
std::vector<std::size_t> select_games(const corpus::Corpus& corpus, const std::string& spec) {
  std::vector<std::size_t> out;
  if (spec.empty()) {
    for (std::size_t i = 0; i < corpus.games.size(); ++i) out.push_back(i);
    return out;
  }
  for (const std::string& raw : text::split(spec, ',')) {
    std::string item(text::trim(raw));
    std::optional<std::size_t> idx;
    for (std::size_t i = 0; i < corpus.games.size(); ++i)
      if (corpus.games[i].name == item) idx = i;
    if (!idx && !item.empty() && std::all_of(item.begin(), item.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      std::size_t n = std::stoull(item);
      if (n >= 1 && n <= corpus.games.size()) idx = n - 1;
    }
    if (!idx) throw UsageError("unknown game '" + item + "'");
    out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

translator::TranslationModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw corpus::FormatError(path, 0, "cannot open file");
  return translator::load_model(in, path);
}

strategic::StrategicModel load_strategic_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw corpus::FormatError(path, 0, "cannot open file");
  return strategic::load_strategic(in, path);
}

void echo_config(const fs::path& dir, const std::string& command, const std::map<std::string, std::string>& kv) {
  std::ostringstream out;
  out << "# sportscaster " << command << '\n';
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  report::write_text(dir / "run_config.txt", out.str());
}

std::map<std::string, std::string> common_echo(const RunConfig& c, std::initializer_list<const char*> keys) {
  std::map<std::string, std::string> all = {
      {"manifest", c.manifest},
      {"model", c.model},
      {"strategic", c.strategic},
      {"input", c.input},
      {"matching", c.matching},
      {"init-alignment", c.init_alignment},
      {"games", c.games},
      {"split", c.split},
      {"language", c.language},
      {"strategy", c.strategy},
      {"window-ms", std::to_string(c.window_ms)},
      {"tick-ms", std::to_string(c.tick_ms)},
      {"max-iter", std::to_string(c.max_iter)},
      {"igsl-max-iter", std::to_string(c.igsl_max_iter)},
      {"seed", std::to_string(c.seed)},
      {"topk", std::to_string(c.topk)},
      {"superfluous-cv", c.superfluous_cv ? "true" : "false"},
      {"json", c.json ? "true" : "false"},
  };
  std::map<std::string, std::string> out;
  for (const char* k : keys) out[k] = all.at(k);
  return out;
}

// ---- simulate ----

int cmd_simulate(const RunConfig& c, const std::map<std::string, std::string>& extra, const CLI::App& sub,
                 std::ostream& out) {
  fs::path dir = require_out(c);
  std::map<std::string, std::string> kv = extra;
  if (sub.get_option("--profile")->count()) kv["profile"] = c.profile;
  if (sub.get_option("--seed")->count()) kv["seed"] = std::to_string(c.seed);
  if (sub.get_option("--games")->count()) kv["games"] = std::to_string(c.sim_games);
  if (sub.get_option("--superfluous-rate")->count()) kv["superfluous_rate"] = text::format_real(c.superfluous_rate);
  if (sub.get_option("--window-ms")->count()) kv["window_ms"] = std::to_string(c.window_ms);
  simgen::SimConfig sim;
  try {
    sim = simgen::sim_config_from(kv);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  corpus::Corpus corpus = simgen::simulate_corpus(sim);
  fs::path manifest = corpus::write_corpus(corpus, dir);
  echo_config(dir, "simulate", simgen::to_key_values(sim));
  std::size_t comments = 0, events = 0;
  for (const auto& g : corpus.games) {
    comments += g.comments.size();
    events += g.events.size();
  }
  out << "wrote " << corpus.games.size() << " games (" << events << " events, " << comments << " comments) to "
      << manifest.string() << '\n';
  return kExitOk;
}

// ---- pair ----

int cmd_pair(const RunConfig& c, std::ostream& out) {
  require(c.manifest, "--manifest");
  fs::path dir = require_out(c);
  corpus::Corpus corpus = corpus::load_corpus(c.manifest, c.window_ms);
  std::ostringstream tsv;
  tsv << "game\tevents\tcomments\thave_mrs\thave_correct_mr\tmax_candidates\tmean_candidates\tsd_candidates\n";
  std::size_t all_events = 0, all_comments = 0, all_have = 0, all_correct = 0, all_max = 0;
  double all_sum = 0, all_sq = 0;
  bool all_gold = true;
  auto row = [&](const std::string& name, std::size_t events, std::size_t comments, std::size_t have,
                 std::optional<std::size_t> correct, std::size_t max, double sum, double sq) {
    double mean = have ? sum / static_cast<double>(have) : 0.0;
    double var = have ? sq / static_cast<double>(have) - mean * mean : 0.0;
    tsv << name << '\t' << events << '\t' << comments << '\t' << have << '\t'
        << (correct ? std::to_string(*correct) : "NA") << '\t' << max << '\t' << text::format_real(mean) << '\t'
        << text::format_real(std::sqrt(std::max(0.0, var))) << '\n';
  };
  for (const auto& g : corpus.games) {
    auto pairing = corpus::pair_with_window(g.events, g.comments, c.window_ms, g.name);
    std::size_t max = 0;
    double sum = 0, sq = 0;
    for (const auto& ex : pairing.examples) {
      double k = static_cast<double>(ex.candidates.size());
      max = std::max(max, ex.candidates.size());
      sum += k;
      sq += k * k;
    }
    std::optional<std::size_t> correct;
    if (g.gold) {
      correct = 0;
      for (const auto& [cid, eid] : *g.gold) *correct += eid.has_value();
      all_correct += *correct;
    } else {
      all_gold = false;
    }
    row(g.name, g.events.size(), g.comments.size(), pairing.examples.size(), correct, max, sum, sq);
    all_events += g.events.size();
    all_comments += g.comments.size();
    all_have += pairing.examples.size();
    all_max = std::max(all_max, max);
    all_sum += sum;
    all_sq += sq;
  }
  row("total", all_events, all_comments, all_have, all_gold ? std::optional<std::size_t>(all_correct) : std::nullopt,
      all_max, all_sum, all_sq);
  report::write_text(dir / "pairing.tsv", tsv.str());
  echo_config(dir, "pair", common_echo(c, {"manifest", "window-ms"}));
  out << tsv.str();
  return kExitOk;
}

// ---- train ----

int cmd_train(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require(c.manifest, "--manifest");
  auto kind = learner::strategy_from_name(c.strategy);
  if (!kind) throw UsageError("unknown strategy '" + c.strategy + "'");
  fs::path dir = require_out(c);
  corpus::Corpus corpus = corpus::load_corpus(c.manifest, c.window_ms);
  std::vector<std::size_t> games = select_games(corpus, c.games);
  corpus::TrainingSet data = corpus::build_training_set(corpus, games, c.window_ms);

  learner::ScoringStrategy strategy;
  strategy.kind = *kind;
  strategy.seed = c.seed;
  learner::LoopOptions options;
  options.max_iter = c.max_iter;
  options.igsl_max_iter = c.igsl_max_iter;
  if (!c.init_alignment.empty()) {
    auto ext = learner::init_from_external(data, fs::path(c.init_alignment));
    if (ext.warnings) err << "warning: skipped " << ext.warnings << " external alignment line(s)\n";
    options.initial_choice = ext.choice;
  }

  learner::DisambiguationResult result;
  if (c.superfluous_cv) {
    auto thresholds = learner::default_thresholds();
    auto cv = learner::superfluous_cv(data, thresholds, strategy, options);
    std::ostringstream tsv;
    tsv << "threshold\tvalidation_score\tchosen\n";
    for (const auto& [t, s] : cv.sweep)
      tsv << text::format_real(t) << '\t' << text::format_real(s) << '\t' << (t == cv.threshold ? 1 : 0) << '\n';
    report::write_text(dir / "superfluous_cv.tsv", tsv.str());
    result = std::move(cv.result);
  } else {
    result = learner::retrain_loop(data, strategy, options);
  }

  {
    std::ofstream m(dir / "model.txt", std::ios::binary | std::ios::trunc);
    if (!m) throw report::IoError("cannot write model");
    translator::save_model(result.model, m);
  }
  std::ostringstream matching;
  matching << "game\tcomment_id\tevent_id\tmr\tscore\tkept\n";
  for (std::size_t i = 0; i < data.examples.size(); ++i) {
    const auto& ex = data.examples[i];
    const auto& ev = ex.candidates.at(*result.matching.choice[i]);
    matching << ex.game << '\t' << ex.comment.id << '\t' << ev.id << '\t' << mrl::serialize_mr(ev.mr) << '\t'
             << text::format_real(result.matching.score[i]) << '\t' << (result.matching.kept[i] ? 1 : 0) << '\n';
  }
  report::write_text(dir / "matching.tsv", matching.str());

  std::ostringstream iters;
  iters << "iter\tmatching_f1\tchanged_count\n";
  for (const auto& h : result.history)
    iters << h.iteration << '\t' << (h.matching_f1 ? text::format_real(*h.matching_f1) : "NA") << '\t' << h.changed
          << '\n';
  report::write_text(dir / "iterations.tsv", iters.str());

  strategic::StrategicModel sm =
      result.strategic ? *result.strategic : strategic::igsl(data.examples, data.event_counts, c.igsl_max_iter).model;
  std::ostringstream st;
  strategic::save_strategic(sm, st);
  report::write_text(dir / "strategic.tsv", st.str());

  echo_config(dir, "train",
              common_echo(c, {"manifest", "games", "strategy", "window-ms", "max-iter", "igsl-max-iter", "seed",
                              "init-alignment", "superfluous-cv"}));
  out << "trained " << learner::name(*kind) << " on " << data.examples.size() << " examples in "
      << result.iterations_run << " iteration(s)";
  if (data.has_gold) out << ", matching F1 " << text::format_real(*learner::matching_report(data, result.matching).f1);
  out << '\n';
  return kExitOk;
}

// ---- igsl ----

int cmd_igsl(const RunConfig& c, std::ostream& out) {
  require(c.manifest, "--manifest");
  fs::path dir = require_out(c);
  corpus::Corpus corpus = corpus::load_corpus(c.manifest, c.window_ms);
  corpus::TrainingSet data = corpus::build_training_set(corpus, select_games(corpus, c.games), c.window_ms);
  auto result = strategic::igsl(data.examples, data.event_counts, c.igsl_max_iter);
  std::ostringstream st;
  strategic::save_strategic(result.model, st);
  report::write_text(dir / "strategic.tsv", st.str());
  std::ostringstream hist;
  hist << "iter";
  for (mrl::Predicate p : mrl::all_predicates()) hist << '\t' << mrl::name(p);
  hist << '\n';
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    hist << i + 1;
    for (double v : result.history[i]) hist << '\t' << text::format_real(v);
    hist << '\n';
  }
  report::write_text(dir / "igsl_history.tsv", hist.str());
  echo_config(dir, "igsl", common_echo(c, {"manifest", "games", "window-ms", "igsl-max-iter"}));
  out << st.str();
  return kExitOk;
}

// ---- parse / generate ----

int cmd_parse(const RunConfig& c, std::ostream& out) {
  require(c.model, "--model");
  require(c.input, "--input");
  fs::path dir = require_out(c);
  auto model = load_model_file(c.model);
  std::ostringstream tsv;
  tsv << "line\tmr\tscore\n";
  std::size_t ln = 0;
  for (const std::string& line : text::split(read_file(c.input), '\n')) {
    ++ln;
    std::string raw(text::trim(line));
    if (raw.empty()) continue;
    auto tokens = text::tokenize(raw, c.language);
    auto ranked = translator::parse_sentence(tokens, model.alignment);
    if (ranked.empty()) tsv << ln << "\tNONE\tNA\n";
    else tsv << ln << '\t' << mrl::serialize_mr(ranked.front().mr) << '\t' << text::format_real(ranked.front().score) << '\n';
  }
  report::write_text(dir / "parses.tsv", tsv.str());
  echo_config(dir, "parse", common_echo(c, {"model", "input", "language"}));
  out << tsv.str();
  return kExitOk;
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
  require(c.model, "--model");
  require(c.input, "--input");
  if (c.topk < 1) throw UsageError("--topk must be at least 1");
  fs::path dir = require_out(c);
  auto model = load_model_file(c.model);
  std::ostringstream tsv;
  tsv << "mr\trank\tscore\tsentence\n";
  std::size_t ln = 0;
  for (const std::string& line : text::split(read_file(c.input), '\n')) {
    ++ln;
    if (text::trim(line).empty()) continue;
    mrl::Mr mr;
    try {
      mr = mrl::parse_mr(line);
    } catch (const mrl::MalformedMrError& e) {
      throw corpus::FormatError(c.input, ln, e.what());
    }
    try {
      auto top = translator::generate_topk(mr, model, c.topk);
      for (std::size_t r = 0; r < top.size(); ++r)
        tsv << mrl::serialize_mr(mr) << '\t' << r + 1 << '\t' << text::format_real(top[r].score) << '\t'
            << text::join(top[r].tokens) << '\n';
    } catch (const translator::NoTemplate&) {
      tsv << mrl::serialize_mr(mr) << "\tNA\tNA\tNO_TEMPLATE\n";
    }
  }
  report::write_text(dir / "generations.tsv", tsv.str());
  echo_config(dir, "generate", common_echo(c, {"model", "input", "topk"}));
  out << tsv.str();
  return kExitOk;
}

// ---- sportscast ----

int cmd_sportscast(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require(c.manifest, "--manifest");
  require(c.model, "--model");
  require(c.strategic, "--strategic");
  if (c.topk < 1) throw UsageError("--topk must be at least 1");
  if (c.tick_ms <= 0) throw UsageError("--tick-ms must be positive");
  fs::path dir = require_out(c);
  corpus::Corpus corpus = corpus::load_corpus(c.manifest, c.window_ms);
  auto model = load_model_file(c.model);
  auto sm = load_strategic_file(c.strategic);
  strategic::SportscastOptions options;
  options.k = c.topk;
  options.tick_ms = c.tick_ms;
  std::size_t lines = 0, skipped = 0;
  for (std::size_t g : select_games(corpus, c.games)) {
    const auto& game = corpus.games[g];
    Prng prng(mix64(c.seed + g));
    auto cast = strategic::assemble_sportscast(game.events, sm, model, prng, options);
    std::ostringstream t;
    strategic::write_transcript(cast, t);
    report::write_text(dir / (game.name + ".transcript.tsv"), t.str());
    lines += cast.lines.size();
    skipped += cast.skipped_no_template;
  }
  if (skipped) err << "note: " << skipped << " selected event(s) had no template and were skipped\n";
  echo_config(dir, "sportscast",
              common_echo(c, {"manifest", "model", "strategic", "games", "seed", "topk", "tick-ms", "window-ms"}));
  out << "wrote " << lines << " transcript line(s)\n";
  return kExitOk;
}

// ---- evaluate ----

metrics::PredictedMatching read_matching(const std::string& path) {
  metrics::PredictedMatching out;
  std::size_t ln = 0;
  for (const std::string& line : text::split(read_file(path), '\n')) {
    ++ln;
    if (ln == 1 || text::trim(line).empty()) continue;
    auto f = text::split(line, '\t');
    if (f.size() != 6) throw corpus::FormatError(path, ln, "expected 6 tab-separated fields");
    try {
      if (f[5] == "1") out[{f[0], std::stoull(f[1])}] = std::stoull(f[2]);
    } catch (const std::logic_error&) {
      throw corpus::FormatError(path, ln, "bad id");
    }
  }
  return out;
}

int cmd_evaluate(const RunConfig& c, std::ostream& out) {
  require(c.manifest, "--manifest");
  if (c.model.empty() && c.matching.empty() && c.strategic.empty())
    throw UsageError("evaluate needs --model, --matching or --strategic");
  fs::path dir = require_out(c);
  corpus::Corpus corpus = corpus::load_corpus(c.manifest, c.window_ms);
  std::vector<std::size_t> games = select_games(corpus, c.games);
  for (std::size_t g : games)
    if (!corpus.games[g].gold) throw corpus::FormatError(c.manifest, 0, "game " + corpus.games[g].name + " has no gold");
  std::set<std::string> names;
  for (std::size_t g : games) names.insert(corpus.games[g].name);

  std::vector<metrics::EvalReport> reports;
  if (!c.matching.empty()) {
    metrics::PredictedMatching predicted;
    for (auto& [key, ev] : read_matching(c.matching))
      if (names.count(key.first)) predicted[key] = ev;
    auto r = metrics::matching_f1(predicted, metrics::gold_matching(corpus, games));
    r.split = c.split;
    reports.push_back(r);
  }
  if (!c.model.empty()) {
    auto model = load_model_file(c.model);
    metrics::Parses parses;
    auto gold = metrics::gold_mrs(corpus, games);
    for (std::size_t g : games) {
      const auto& game = corpus.games[g];
      for (const auto& [cid, eid] : *game.gold) {
        if (!eid) continue;
        auto ranked = translator::parse_sentence(game.comments[cid].tokens, model.alignment);
        parses[{game.name, cid}] = ranked.empty() ? std::nullopt : std::optional<mrl::Mr>(ranked.front().mr);
      }
    }
    auto pr = metrics::parsing_f1(parses, gold);
    pr.split = c.split;
    reports.push_back(pr);

    auto refs = metrics::expand_references(corpus, games);
    double bleu_sum = 0, nist_sum = 0;
    std::size_t docs = 0, segments = 0;
    for (std::size_t g : games) {
      auto segs = learner::generation_segments(corpus.games[g], model, refs);
      if (segs.empty()) continue;
      bleu_sum += metrics::bleu_document(segs, 4);
      ++docs;
      for (const auto& s : segs) {
        double best = 0;
        if (!s.candidate.empty())
          for (const auto& ref : s.references) best = std::max(best, metrics::nist(s.candidate, ref));
        nist_sum += best;
        ++segments;
      }
    }
    metrics::EvalReport gr;
    gr.task = "generation";
    gr.split = c.split;
    gr.count = segments;
    if (docs) gr.bleu = bleu_sum / static_cast<double>(docs);
    if (segments) gr.nist = nist_sum / static_cast<double>(segments);
    reports.push_back(gr);
  }
  if (!c.strategic.empty()) {
    auto sm = load_strategic_file(c.strategic);
    std::size_t tp = 0, predicted = 0, actual = 0, events = 0;
    for (std::size_t g : games) {
      const auto& game = corpus.games[g];
      std::set<std::size_t> commented;
      for (const auto& [cid, eid] : *game.gold)
        if (eid) commented.insert(*eid);
      for (const auto& e : game.events) {
        bool say = sm.prob[mrl::index(e.mr.predicate())] >= 0.5;
        bool said = commented.count(e.id) > 0;
        predicted += say;
        actual += said;
        tp += say && said;
        ++events;
      }
    }
    metrics::EvalReport sr;
    sr.task = "strategic";
    sr.split = c.split;
    sr.count = events;
    sr.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    sr.recall = actual ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    sr.f1 = metrics::f1_score(*sr.precision, *sr.recall);
    reports.push_back(sr);
  }
  auto format = c.json ? report::Format::kJson : report::Format::kTsv;
  report::write_report(reports, dir / (c.json ? "report.jsonl" : "report.tsv"), format);
  echo_config(dir, "evaluate",
              common_echo(c, {"manifest", "model", "matching", "strategic", "games", "split", "window-ms", "json"}));
  out << report::summary(reports);
  return kExitOk;
}

// ---- plumbing ----

bool truthy(const std::string& v) {
  std::string s = text::to_lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw UsageError("expected a boolean, got '" + v + "'");
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Learn to sportscast from ambiguously paired commentary", "sportscaster"};
  app.require_subcommand(1, 1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "key = value file; flags on the command line win");
    sub->add_option("--out", c.out, "output directory");
  };
  auto window = [&](CLI::App* sub) {
    sub->add_option("--window-ms", c.window_ms, "pairing window in milliseconds")->capture_default_str();
  };
  auto manifest = [&](CLI::App* sub) { sub->add_option("--manifest", c.manifest, "corpus manifest"); };
  auto games = [&](CLI::App* sub) { sub->add_option("--games", c.games, "comma-separated game names or 1-based indices"); };

  auto* simulate = app.add_subcommand("simulate", "write a synthetic corpus with gold matchings");
  common(simulate);
  window(simulate);
  simulate->add_option("--seed", c.seed, "seed for both the world and the commentator");
  simulate->add_option("--games", c.sim_games, "number of games");
  simulate->add_option("--profile", c.profile, "commentator profile: default or sharp");
  simulate->add_option("--superfluous-rate", c.superfluous_rate, "fraction of comments that refer to no event");

  auto* pair = app.add_subcommand("pair", "pair comments with the events in their window and report ambiguity");
  common(pair);
  manifest(pair);
  window(pair);

  auto* train = app.add_subcommand("train", "disambiguate the training data and train a model");
  common(train);
  manifest(train);
  window(train);
  games(train);
  train->add_option("--strategy", c.strategy,
                    "random, parse_score, nist_gen, meteor_gen, nist_igsl, meteor_igsl or gold")
      ->capture_default_str();
  train->add_option("--max-iter", c.max_iter, "maximum retraining rounds")->capture_default_str();
  train->add_option("--igsl-max-iter", c.igsl_max_iter, "maximum IGSL iterations")->capture_default_str();
  train->add_option("--seed", c.seed, "seed for the random strategy");
  train->add_option("--init-alignment", c.init_alignment, "external game/comment/MR alignment for the first model");
  train->add_flag("--superfluous-cv", c.superfluous_cv, "choose a pruning threshold by internal validation");

  auto* igsl = app.add_subcommand("igsl", "estimate per-event-type commentary probabilities");
  common(igsl);
  manifest(igsl);
  window(igsl);
  games(igsl);
  igsl->add_option("--max-iter", c.igsl_max_iter, "maximum iterations")->capture_default_str();

  auto* parse = app.add_subcommand("parse", "parse one sentence per line into an MR");
  common(parse);
  parse->add_option("--model", c.model, "model file");
  parse->add_option("--input", c.input, "text file, one sentence per line");
  parse->add_option("--language", c.language, "language tag of the input")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "generate sentences for one MR per line");
  common(generate);
  generate->add_option("--model", c.model, "model file");
  generate->add_option("--input", c.input, "file with one MR per line");
  generate->add_option("--topk", c.topk, "sentences per MR")->capture_default_str();

  auto* sportscast = app.add_subcommand("sportscast", "commentate the event traces of a corpus");
  common(sportscast);
  manifest(sportscast);
  window(sportscast);
  games(sportscast);
  sportscast->add_option("--model", c.model, "model file");
  sportscast->add_option("--strategic", c.strategic, "strategic model file");
  sportscast->add_option("--seed", c.seed, "sampling seed");
  sportscast->add_option("--topk", c.topk, "candidate sentences per selected event")->capture_default_str();
  sportscast->add_option("--tick-ms", c.tick_ms, "width of one co-occurrence tick")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "score matching, parsing and generation against gold");
  common(evaluate);
  manifest(evaluate);
  window(evaluate);
  games(evaluate);
  evaluate->add_option("--model", c.model, "model file");
  evaluate->add_option("--matching", c.matching, "matching.tsv written by train");
  evaluate->add_option("--strategic", c.strategic, "strategic model file");
  evaluate->add_option("--split", c.split, "label for the report's split column")->capture_default_str();
  evaluate->add_flag("--json", c.json, "write JSON lines instead of TSV");

  // Config file values go in front of the real arguments so later flags win.
  std::vector<std::string> argv(args.begin(), args.end());
  std::map<std::string, std::string> extra;
  try {
    std::string config_path;
    for (std::size_t i = 0; i < argv.size(); ++i) {
      if (argv[i] == "--config" && i + 1 < argv.size()) config_path = argv[i + 1];
      else if (argv[i].starts_with("--config=")) config_path = argv[i].substr(9);
    }
    if (!config_path.empty() && !argv.empty()) {
      CLI::App* sub = nullptr;
      for (CLI::App* s : app.get_subcommands({}))
        if (s->get_name() == argv.front()) sub = s;
      if (sub) {
        std::map<std::string, std::string> kv;
        try {
          kv = text::parse_key_values(read_file(config_path));
        } catch (const std::invalid_argument& e) {
          throw UsageError(config_path + ": " + e.what());
        }
        std::vector<std::string> injected;
        for (const auto& [k, v] : kv) {
          CLI::Option* opt = sub->get_option_no_throw("--" + k);
          if (opt && k != "config") {
            if (opt->get_type_size() == 0) {
              if (truthy(v)) injected.push_back("--" + k);
            } else {
              injected.push_back("--" + k);
              injected.push_back(v);
            }
          } else if (sub == simulate) {
            extra[k] = v;
          } else {
            throw UsageError(config_path + ": unknown key '" + k + "'");
          }
        }
        argv.insert(argv.begin() + 1, injected.begin(), injected.end());
      }
    }
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const corpus::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    if (sub == simulate) return cmd_simulate(c, extra, *simulate, out);
    if (sub == pair) return cmd_pair(c, out);
    if (sub == train) return cmd_train(c, out, err);
    if (sub == igsl) return cmd_igsl(c, out);
    if (sub == parse) return cmd_parse(c, out);
    if (sub == generate) return cmd_generate(c, out);
    if (sub == sportscast) return cmd_sportscast(c, out, err);
    if (sub == evaluate) return cmd_evaluate(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace sportscaster::cli
