// Command-line front end. Talks to the library exclusively through the
// C interface in echodetect.h so it doubles as a consumer test of that
// surface.
#include <echodetect.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct command_error : std::runtime_error {
  command_error(int code, const std::string& message)
      : std::runtime_error(message), exit_code(code) {}
  int exit_code;
};

int exit_code_for(ed_status status) {
  return status == ED_ERR_INTERNAL ? 1 : 2;
}

void check(ed_status status, const std::string& context) {
  if (status != ED_OK) {
    throw command_error(exit_code_for(status),
                        context + ": " + ed_last_error());
  }
}

std::string take_string(char* owned) {
  if (owned == nullptr) return {};
  std::string copy(owned);
  ed_string_free(owned);
  return copy;
}

struct network_deleter {
  void operator()(ed_network* n) const { ed_network_free(n); }
};
struct scored_deleter {
  void operator()(ed_scored* s) const { ed_scored_free(s); }
};
using network_ptr = std::unique_ptr<ed_network, network_deleter>;
using scored_ptr = std::unique_ptr<ed_scored, scored_deleter>;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw command_error(2, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw command_error(2, "cannot read " + path.string());
  }
  return std::move(buf).str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw command_error(1, "cannot open " + path.string() + " for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw command_error(1, "cannot write " + path.string());
  }
}

std::string fnv1a64_hex(const std::string& bytes) {
  const uint64_t hash = ed_fnv1a64(bytes.data(), bytes.size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

// Expands directories to the .jsonl / matching files inside them and
// keeps explicit file arguments as-is, sorted for reproducible runs.
std::vector<fs::path> collect_inputs(const std::vector<std::string>& inputs,
                                     const std::string& extension) {
  std::vector<fs::path> files;
  for (const std::string& raw : inputs) {
    fs::path path(raw);
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
      for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() >= extension.size() &&
            name.compare(name.size() - extension.size(), extension.size(),
                         extension) == 0) {
          files.push_back(entry.path());
        }
      }
    } else if (fs::is_regular_file(path, ec)) {
      files.push_back(path);
    } else {
      throw command_error(2, "input not found: " + raw);
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

fs::path prepare_output_dir(const std::string& raw) {
  fs::path dir(raw);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw command_error(1, "cannot create output directory " + raw + ": " +
                               ec.message());
  }
  return dir;
}

// Every command that writes files also writes run_manifest.json listing
// the configuration, the input checksums, and a checksum for each
// output so a rerun can be compared byte for byte.
class manifest_builder {
 public:
  manifest_builder(std::string command, json config)
      : command_(std::move(command)), config_(std::move(config)) {}

  void add_input(const fs::path& path, const std::string& bytes) {
    inputs_.push_back(
        {{"file", path.filename().string()}, {"fnv1a64", fnv1a64_hex(bytes)}});
  }

  void add_skipped(const fs::path& path, const std::string& reason) {
    skipped_.push_back(
        {{"file", path.filename().string()}, {"reason", reason}});
  }

  void write_output(const fs::path& dir, const std::string& name,
                    const std::string& content) {
    write_file(dir / name, content);
    outputs_.push_back({{"file", name}, {"fnv1a64", fnv1a64_hex(content)}});
  }

  void finish(const fs::path& dir) {
    json doc{{"tool", "echodetect"},
             {"version", ed_version()},
             {"command", command_},
             {"config", config_},
             {"inputs", inputs_},
             {"outputs", outputs_}};
    if (!skipped_.empty()) doc["skipped"] = skipped_;
    write_file(dir / "run_manifest.json", doc.dump(2) + "\n");
  }

 private:
  std::string command_;
  json config_;
  json inputs_ = json::array();
  json outputs_ = json::array();
  json skipped_ = json::array();
};

struct loaded_network {
  fs::path path;
  network_ptr network;
};

std::vector<loaded_network> load_networks(const std::vector<fs::path>& files,
                                          bool skip_bad_files,
                                          manifest_builder& manifest) {
  std::vector<loaded_network> networks;
  for (const fs::path& path : files) {
    const std::string bytes = read_file(path);
    ed_network* raw = nullptr;
    const ed_status status = ed_network_parse(bytes.data(), bytes.size(), &raw);
    if (status != ED_OK) {
      const std::string reason = ed_last_error();
      if (skip_bad_files) {
        std::fprintf(stderr, "echodetect: skipping %s: %s\n",
                     path.string().c_str(), reason.c_str());
        manifest.add_skipped(path, reason);
        continue;
      }
      throw command_error(exit_code_for(status),
                          path.string() + ": " + reason);
    }
    manifest.add_input(path, bytes);
    networks.push_back({path, network_ptr(raw)});
  }
  return networks;
}

json config_json(const ed_config& config) {
  return {{"window_size", config.window_size},
          {"high_score_threshold", config.high_score_threshold},
          {"missing_fraction_threshold", config.missing_fraction_threshold}};
}

// --- score ----------------------------------------------------------

struct score_options {
  std::vector<std::string> inputs;
  std::string output;
  ed_config config;
  int parallelism = 1;
  bool skip_bad_files = false;
  bool dump_windows = false;
};

struct score_result {
  std::string ego_user_id;
  std::string csv;
  std::string json_text;
  std::string windows_csv;
  int exit_code = 0;
  std::string error;
};

score_result score_one(const ed_network* network, const score_options& opt) {
  score_result result;
  ed_scored* scored_raw = nullptr;
  ed_status status = ed_score_network(network, &opt.config, &scored_raw);
  if (status != ED_OK) {
    result.exit_code = exit_code_for(status);
    result.error = ed_last_error();
    return result;
  }
  scored_ptr scored(scored_raw);
  result.ego_user_id = ed_scored_ego_user_id(scored.get());

  char* text = nullptr;
  status = ed_scored_to_csv(scored.get(), &text);
  if (status == ED_OK) {
    result.csv = take_string(text);
    status = ed_scored_to_json(scored.get(), &text);
  }
  if (status == ED_OK) {
    result.json_text = take_string(text);
    if (opt.dump_windows) {
      status = ed_window_dump_csv(network, opt.config.window_size, &text);
      if (status == ED_OK) result.windows_csv = take_string(text);
    }
  }
  if (status != ED_OK) {
    result.exit_code = exit_code_for(status);
    result.error = ed_last_error();
  }
  return result;
}

int cmd_score(const score_options& opt) {
  const std::vector<fs::path> files = collect_inputs(opt.inputs, ".jsonl");
  const fs::path out_dir = prepare_output_dir(opt.output);

  json config = config_json(opt.config);
  config["parallelism"] = opt.parallelism;
  config["skip_bad_files"] = opt.skip_bad_files;
  config["dump_windows"] = opt.dump_windows;
  manifest_builder manifest("score", config);

  std::vector<loaded_network> networks =
      load_networks(files, opt.skip_bad_files, manifest);
  if (networks.empty()) {
    throw command_error(2, "no ego networks found");
  }

  std::vector<const ed_network*> raw;
  raw.reserve(networks.size());
  for (const loaded_network& entry : networks) raw.push_back(entry.network.get());

  std::vector<int> keep(networks.size(), 0);
  char* report_raw = nullptr;
  check(ed_filter_networks(raw.data(), raw.size(), &opt.config, keep.data(),
                           &report_raw),
        "missing-data filter");
  const std::string filter_report = take_string(report_raw);

  std::vector<std::size_t> retained;
  for (std::size_t i = 0; i < networks.size(); ++i) {
    if (keep[i]) retained.push_back(i);
  }

  std::vector<score_result> results(retained.size());
  const int workers =
      std::max(1, std::min<int>(opt.parallelism,
                                static_cast<int>(retained.size())));
  if (workers <= 1) {
    for (std::size_t slot = 0; slot < retained.size(); ++slot) {
      results[slot] = score_one(raw[retained[slot]], opt);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t slot = next.fetch_add(1); slot < retained.size();
             slot = next.fetch_add(1)) {
          results[slot] = score_one(raw[retained[slot]], opt);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t slot = 0; slot < retained.size(); ++slot) {
    const score_result& result = results[slot];
    if (result.exit_code != 0) {
      throw command_error(result.exit_code,
                          networks[retained[slot]].path.string() + ": " +
                              result.error);
    }
  }

  // Output files are keyed by ego user id, so a duplicate would make
  // one run silently overwrite the other.
  for (std::size_t a = 0; a < results.size(); ++a) {
    for (std::size_t b = a + 1; b < results.size(); ++b) {
      if (results[a].ego_user_id == results[b].ego_user_id) {
        throw command_error(
            2, "duplicate ego user id " + results[a].ego_user_id + " in " +
                   networks[retained[a]].path.string() + " and " +
                   networks[retained[b]].path.string());
      }
    }
  }

  manifest.write_output(out_dir, "filter_report.json", filter_report);
  for (const score_result& result : results) {
    manifest.write_output(out_dir, result.ego_user_id + ".scored.csv",
                          result.csv);
    manifest.write_output(out_dir, result.ego_user_id + ".scored.json",
                          result.json_text);
    if (opt.dump_windows) {
      manifest.write_output(out_dir, result.ego_user_id + ".windows.csv",
                            result.windows_csv);
    }
  }
  manifest.finish(out_dir);
  return 0;
}

// --- report ---------------------------------------------------------

struct report_options {
  std::vector<std::string> inputs;
  std::string output;
  double threshold = 0.384;
  int bins = 50;
  int grid_linear_bins = 1;
  int grid_log_bins = 20;
};

int cmd_report(const report_options& opt) {
  const std::vector<fs::path> files = collect_inputs(opt.inputs, ".scored.json");
  if (files.empty()) {
    throw command_error(2, "no scored outputs found");
  }
  const fs::path out_dir = prepare_output_dir(opt.output);

  ed_config config;
  ed_config_default(&config);
  config.high_score_threshold = opt.threshold;

  manifest_builder manifest("report",
                            json{{"high_score_threshold", opt.threshold},
                                 {"histogram_bins", opt.bins},
                                 {"grid_linear_bins", opt.grid_linear_bins},
                                 {"grid_log_bins", opt.grid_log_bins}});

  std::vector<scored_ptr> scored;
  scored.reserve(files.size());
  for (const fs::path& path : files) {
    const std::string bytes = read_file(path);
    ed_scored* raw = nullptr;
    const ed_status status = ed_scored_from_json(bytes.data(), bytes.size(), &raw);
    if (status != ED_OK) {
      throw command_error(exit_code_for(status),
                          path.string() + ": " + ed_last_error());
    }
    manifest.add_input(path, bytes);
    scored.emplace_back(raw);
  }

  std::vector<const ed_scored*> raw;
  raw.reserve(scored.size());
  for (const scored_ptr& s : scored) raw.push_back(s.get());

  char* text = nullptr;
  check(ed_report_json(raw.data(), raw.size(), &config, opt.bins,
                       opt.grid_linear_bins, opt.grid_log_bins, &text),
        "report");
  manifest.write_output(out_dir, "report.json", take_string(text));

  static const char* const kTables[] = {"categories", "histograms", "profiles",
                                        "grid",       "pn_cdf",     "window_cdf"};
  for (const char* table : kTables) {
    check(ed_report_csv(raw.data(), raw.size(), &config, opt.bins,
                        opt.grid_linear_bins, opt.grid_log_bins, table, &text),
          std::string("report table ") + table);
    manifest.write_output(out_dir, std::string(table) + ".csv",
                          take_string(text));
  }
  manifest.finish(out_dir);
  return 0;
}

// --- synth ----------------------------------------------------------

struct synth_options {
  std::string output;
  ed_synth_config config;
  std::vector<double> mix;
};

int cmd_synth(synth_options opt) {
  if (!opt.mix.empty()) {
    if (opt.mix.size() != 5) {
      throw command_error(2,
                          "--mix takes five comma-separated weights: "
                          "explicit_retweet,explicit_reply,implicit_copy,"
                          "implicit_edited,unrelated");
    }
    opt.config.mix_explicit_retweet = opt.mix[0];
    opt.config.mix_explicit_reply = opt.mix[1];
    opt.config.mix_implicit_copy = opt.mix[2];
    opt.config.mix_implicit_edited = opt.mix[3];
    opt.config.mix_unrelated = opt.mix[4];
  }

  const fs::path out_dir = prepare_output_dir(opt.output);
  manifest_builder manifest(
      "synth",
      json{{"seed", opt.config.seed},
           {"num_followees", opt.config.num_followees},
           {"tweets_per_followee", opt.config.tweets_per_followee},
           {"ego_tweet_count", opt.config.ego_tweet_count},
           {"mix",
            {{"explicit_retweet", opt.config.mix_explicit_retweet},
             {"explicit_reply", opt.config.mix_explicit_reply},
             {"implicit_copy", opt.config.mix_implicit_copy},
             {"implicit_edited", opt.config.mix_implicit_edited},
             {"unrelated", opt.config.mix_unrelated}}},
           {"edit_rate", opt.config.edit_rate},
           {"vocab_size", opt.config.vocab_size},
           {"mean_interarrival_seconds", opt.config.mean_interarrival_seconds},
           {"window_size", opt.config.window_size}});

  char* jsonl = nullptr;
  char* truth = nullptr;
  check(ed_synth_generate(&opt.config, &jsonl, &truth), "synth");
  manifest.write_output(out_dir, "synthetic.jsonl", take_string(jsonl));
  manifest.write_output(out_dir, "ground_truth.json", take_string(truth));
  manifest.finish(out_dir);
  return 0;
}

// --- eval -----------------------------------------------------------

struct eval_options {
  std::string input;
  std::string truth;
  std::string output;
  double threshold = 0.384;
};

int cmd_eval(const eval_options& opt) {
  const std::string scored_bytes = read_file(opt.input);
  ed_scored* scored_raw = nullptr;
  const ed_status status =
      ed_scored_from_json(scored_bytes.data(), scored_bytes.size(), &scored_raw);
  if (status != ED_OK) {
    throw command_error(exit_code_for(status),
                        opt.input + ": " + ed_last_error());
  }
  scored_ptr scored(scored_raw);

  const std::string truth_bytes = read_file(opt.truth);
  char* text = nullptr;
  check(ed_evaluate(scored.get(), truth_bytes.data(), truth_bytes.size(),
                    opt.threshold, &text),
        "eval");
  const std::string metrics = take_string(text);

  if (opt.output.empty()) {
    std::fputs(metrics.c_str(), stdout);
    return 0;
  }
  const fs::path out_dir = prepare_output_dir(opt.output);
  manifest_builder manifest("eval", json{{"threshold", opt.threshold}});
  manifest.add_input(opt.input, scored_bytes);
  manifest.add_input(opt.truth, truth_bytes);
  manifest.write_output(out_dir, "metrics.json", metrics);
  manifest.finish(out_dir);
  return 0;
}

// --- filter ---------------------------------------------------------

struct filter_options {
  std::vector<std::string> inputs;
  std::string output;
  double missing_threshold = 0.20;
  bool skip_bad_files = false;
};

int cmd_filter(const filter_options& opt) {
  const std::vector<fs::path> files = collect_inputs(opt.inputs, ".jsonl");

  ed_config config;
  ed_config_default(&config);
  config.missing_fraction_threshold = opt.missing_threshold;

  manifest_builder manifest(
      "filter", json{{"missing_fraction_threshold", opt.missing_threshold},
                     {"skip_bad_files", opt.skip_bad_files}});
  std::vector<loaded_network> networks =
      load_networks(files, opt.skip_bad_files, manifest);
  if (networks.empty()) {
    throw command_error(2, "no ego networks found");
  }

  std::vector<const ed_network*> raw;
  raw.reserve(networks.size());
  for (const loaded_network& entry : networks) raw.push_back(entry.network.get());

  std::vector<int> keep(networks.size(), 0);
  char* text = nullptr;
  check(ed_filter_networks(raw.data(), raw.size(), &config, keep.data(), &text),
        "missing-data filter");
  const std::string report = take_string(text);

  if (opt.output.empty()) {
    std::fputs(report.c_str(), stdout);
    return 0;
  }
  const fs::path out_dir = prepare_output_dir(opt.output);
  manifest.write_output(out_dir, "filter_report.json", report);
  manifest.finish(out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* level = std::getenv("ECHO_DETECT_LOG")) {
    if (ed_set_log_level(level) != ED_OK) {
      std::fprintf(stderr, "echodetect: ECHO_DETECT_LOG: %s\n", ed_last_error());
      return 2;
    }
  }

  CLI::App app{"Detects non-explicit responses in Twitter ego-network data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(ed_version()); });

  ed_config defaults;
  ed_config_default(&defaults);
  ed_synth_config synth_defaults;
  ed_synth_config_default(&synth_defaults);

  score_options score_opt;
  score_opt.config = defaults;
  CLI::App* score = app.add_subcommand(
      "score", "Score every ego tweet against its influence windows");
  score->add_option("--input", score_opt.inputs,
                    "Ego-network .jsonl files or directories")
      ->required();
  score->add_option("--output", score_opt.output, "Output directory")
      ->required();
  score->add_option("--window-size", score_opt.config.window_size,
                    "Influence window size")->capture_default_str();
  score->add_option("--threshold", score_opt.config.high_score_threshold,
                    "High-score threshold")->capture_default_str();
  score->add_option("--missing-threshold",
                    score_opt.config.missing_fraction_threshold,
                    "Missing-data fraction above which a network is dropped")->capture_default_str();
  score->add_option("--parallelism", score_opt.parallelism,
                    "Worker threads for scoring networks")->capture_default_str()
      ->check(CLI::PositiveNumber);
  score->add_flag("--skip-bad-files", score_opt.skip_bad_files,
                  "Skip inputs that fail to parse instead of aborting");
  score->add_flag("--dump-windows", score_opt.dump_windows,
                  "Also write per-tweet window membership CSVs");

  report_options report_opt;
  CLI::App* report = app.add_subcommand(
      "report", "Aggregate scored outputs into the analytics report");
  report->add_option("--input", report_opt.inputs,
                     ".scored.json files or directories")
      ->required();
  report->add_option("--output", report_opt.output, "Output directory")
      ->required();
  report->add_option("--threshold", report_opt.threshold,
                     "High-score threshold")->capture_default_str();
  report->add_option("--bins", report_opt.bins, "Score histogram bins")->capture_default_str()
      ->check(CLI::PositiveNumber);
  report->add_option("--grid-linear-bins", report_opt.grid_linear_bins,
                     "Linear bins in the percentage grid")->capture_default_str()
      ->check(CLI::PositiveNumber);
  report->add_option("--grid-log-bins", report_opt.grid_log_bins,
                     "Log bins in the percentage grid")->capture_default_str()
      ->check(CLI::PositiveNumber);

  synth_options synth_opt;
  synth_opt.config = synth_defaults;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic ego network with ground truth");
  synth->add_option("--output", synth_opt.output, "Output directory")
      ->required();
  synth->add_option("--seed", synth_opt.config.seed, "RNG seed")->required();
  synth->add_option("--followees", synth_opt.config.num_followees,
                    "Number of followees")->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--tweets-per-followee",
                    synth_opt.config.tweets_per_followee,
                    "Tweets per followee")->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--ego-tweets", synth_opt.config.ego_tweet_count,
                    "Ego tweets to generate")->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--vocab-size", synth_opt.config.vocab_size,
                    "Topical vocabulary size")->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--edit-rate", synth_opt.config.edit_rate,
                    "Fraction of words replaced in edited copies")->capture_default_str();
  synth->add_option("--mix", synth_opt.mix,
                    "Behavior mix weights: explicit_retweet,explicit_reply,"
                    "implicit_copy,implicit_edited,unrelated")
      ->delimiter(',');
  synth->add_option("--interarrival-seconds",
                    synth_opt.config.mean_interarrival_seconds,
                    "Mean seconds between consecutive tweets")->capture_default_str();
  synth->add_option("--window-size", synth_opt.config.window_size,
                    "Window size used when planting in-window sources")->capture_default_str();

  eval_options eval_opt;
  CLI::App* eval = app.add_subcommand(
      "eval", "Compare scored output against synthetic ground truth");
  eval->add_option("--input", eval_opt.input, "Scored .json file")->required();
  eval->add_option("--truth", eval_opt.truth, "Ground-truth .json file")
      ->required();
  eval->add_option("--threshold", eval_opt.threshold, "Detection threshold")->capture_default_str();
  eval->add_option("--output", eval_opt.output,
                   "Output directory (prints to stdout when omitted)");

  filter_options filter_opt;
  CLI::App* filter = app.add_subcommand(
      "filter", "Apply the missing-data cutoff and write the filter report");
  filter->add_option("--input", filter_opt.inputs,
                     "Ego-network .jsonl files or directories")
      ->required();
  filter->add_option("--missing-threshold", filter_opt.missing_threshold,
                     "Missing-data fraction above which a network is dropped")->capture_default_str();
  filter->add_option("--output", filter_opt.output,
                     "Output directory (prints to stdout when omitted)");
  filter->add_flag("--skip-bad-files", filter_opt.skip_bad_files,
                   "Skip inputs that fail to parse instead of aborting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (score->parsed()) return cmd_score(score_opt);
    if (report->parsed()) return cmd_report(report_opt);
    if (synth->parsed()) return cmd_synth(synth_opt);
    if (eval->parsed()) return cmd_eval(eval_opt);
    if (filter->parsed()) return cmd_filter(filter_opt);
  } catch (const command_error& e) {
    std::fprintf(stderr, "echodetect: %s\n", e.what());
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "echodetect: %s\n", e.what());
    return 1;
  }
  return 2;
}
