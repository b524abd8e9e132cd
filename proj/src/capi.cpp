#include "echodetect.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "echodetect/analytics.hpp"
#include "echodetect/common.hpp"
#include "echodetect/data_model.hpp"
#include "echodetect/log.hpp"
#include "echodetect/scoring.hpp"
#include "echodetect/stemmer.hpp"
#include "echodetect/synth.hpp"
#include "echodetect/textpipe.hpp"
#include "echodetect/windows.hpp"

using namespace echodetect;

struct ed_network {
  EgoNetwork value;
};

struct ed_scored {
  ScoredNetwork value;
};

namespace {

thread_local std::string g_last_error;

ed_status status_of(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return ED_ERR_INVALID_ARGUMENT;
    case Errc::Io: return ED_ERR_IO;
    case Errc::Parse: return ED_ERR_PARSE;
    case Errc::Empty: return ED_ERR_EMPTY;
    case Errc::Internal: return ED_ERR_INTERNAL;
  }
  return ED_ERR_INTERNAL;
}

ed_status fail(ed_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
ed_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ED_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ED_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ED_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ed_status require(bool condition, const char* message) {
  if (condition) return ED_OK;
  return fail(ED_ERR_INVALID_ARGUMENT, message);
}

DatasetConfig config_from(const ed_config* config) {
  DatasetConfig out;
  if (config) {
    out.window_size = config->window_size;
    out.high_score_threshold = config->high_score_threshold;
    out.missing_fraction_threshold = config->missing_fraction_threshold;
  }
  if (out.window_size <= 0) {
    raise(Errc::InvalidArgument, "window_size must be positive");
  }
  return out;
}

std::vector<ScoredNetwork> scored_vector(const ed_scored* const* scored,
                                         size_t count) {
  std::vector<ScoredNetwork> networks;
  networks.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    if (!scored[i]) raise(Errc::InvalidArgument, "null scored handle");
    networks.push_back(scored[i]->value);
  }
  return networks;
}

}  // namespace

extern "C" {

const char* ed_version(void) { return kVersion; }

const char* ed_last_error(void) { return g_last_error.c_str(); }

void ed_string_free(char* s) { std::free(s); }

ed_status ed_set_log_level(const char* level) {
  if (!level) return fail(ED_ERR_INVALID_ARGUMENT, "level is null");
  LogLevel parsed;
  if (!parse_log_level(level, parsed)) {
    return fail(ED_ERR_INVALID_ARGUMENT,
                std::string("unknown log level \"") + level + "\"");
  }
  set_log_level(parsed);
  return ED_OK;
}

void ed_config_default(ed_config* out) {
  if (!out) return;
  DatasetConfig defaults;
  out->window_size = defaults.window_size;
  out->high_score_threshold = defaults.high_score_threshold;
  out->missing_fraction_threshold = defaults.missing_fraction_threshold;
}

void ed_synth_config_default(ed_synth_config* out) {
  if (!out) return;
  SynthConfig defaults;
  out->seed = defaults.seed;
  out->num_followees = defaults.num_followees;
  out->tweets_per_followee = defaults.tweets_per_followee;
  out->ego_tweet_count = defaults.ego_tweet_count;
  out->mix_explicit_retweet = defaults.mix.explicit_retweet;
  out->mix_explicit_reply = defaults.mix.explicit_reply;
  out->mix_implicit_copy = defaults.mix.implicit_copy;
  out->mix_implicit_edited = defaults.mix.implicit_edited;
  out->mix_unrelated = defaults.mix.unrelated;
  out->edit_rate = defaults.edit_rate;
  out->vocab_size = defaults.vocab_size;
  out->mean_interarrival_seconds = defaults.mean_interarrival_seconds;
  out->window_size = defaults.window_size;
}

uint64_t ed_fnv1a64(const void* bytes, size_t len) {
  return fnv1a64(std::string_view(static_cast<const char*>(bytes), len));
}

ed_status ed_network_parse(const char* jsonl, size_t len, ed_network** out) {
  if (ed_status s = require(jsonl && out, "null argument")) return s;
  return guarded([&] {
    auto handle = new ed_network{parse_ego_network({jsonl, len})};
    *out = handle;
    return ED_OK;
  });
}

ed_status ed_network_load_file(const char* path, ed_network** out) {
  if (ed_status s = require(path && out, "null argument")) return s;
  return guarded([&] {
    auto handle = new ed_network{load_ego_network(path)};
    *out = handle;
    return ED_OK;
  });
}

void ed_network_free(ed_network* network) { delete network; }

const char* ed_network_ego_user_id(const ed_network* network) {
  return network ? network->value.ego_user_id.c_str() : "";
}

const char* ed_network_ego_username(const ed_network* network) {
  return network ? network->value.ego_username.c_str() : "";
}

int ed_network_ego_tweet_count(const ed_network* network) {
  return network ? static_cast<int>(network->value.ego_tweets.size()) : 0;
}

int ed_network_followee_count(const ed_network* network) {
  return network ? static_cast<int>(network->value.followees.size()) : 0;
}

ed_status ed_network_to_jsonl(const ed_network* network, char** out) {
  if (ed_status s = require(network && out, "null argument")) return s;
  return guarded([&] {
    *out = copy_string(serialize_ego_network(network->value));
    return ED_OK;
  });
}

ed_status ed_network_missing_fraction(const ed_network* network, double* out) {
  if (ed_status s = require(network && out, "null argument")) return s;
  return guarded([&] {
    *out = estimate_missing_fraction(network->value);
    return ED_OK;
  });
}

ed_status ed_filter_networks(const ed_network* const* networks, size_t count,
                             const ed_config* config, int* keep_flags,
                             char** report_json_out) {
  if (ed_status s = require(networks && keep_flags, "null argument")) return s;
  return guarded([&] {
    const DatasetConfig cfg = config_from(config);
    FilterReport report;
    for (size_t i = 0; i < count; ++i) {
      if (!networks[i]) raise(Errc::InvalidArgument, "null network handle");
      const EgoNetwork& network = networks[i]->value;
      const double fraction = estimate_missing_fraction(network);
      if (fraction <= cfg.missing_fraction_threshold) {
        keep_flags[i] = 1;
        report.retained.push_back(network.ego_user_id);
      } else {
        keep_flags[i] = 0;
        report.dropped.push_back({network.ego_user_id, fraction});
      }
    }
    if (report_json_out) {
      *report_json_out = copy_string(filter_report_to_json(report));
    }
    return ED_OK;
  });
}

ed_status ed_score_network(const ed_network* network, const ed_config* config,
                           ed_scored** out) {
  if (ed_status s = require(network && out, "null argument")) return s;
  return guarded([&] {
    auto handle =
        new ed_scored{score_network(network->value, config_from(config))};
    *out = handle;
    return ED_OK;
  });
}

void ed_scored_free(ed_scored* scored) { delete scored; }

const char* ed_scored_ego_user_id(const ed_scored* scored) {
  return scored ? scored->value.ego_user_id.c_str() : "";
}

int ed_scored_tweet_count(const ed_scored* scored) {
  return scored ? static_cast<int>(scored->value.tweets.size()) : 0;
}

int ed_scored_unscored_count(const ed_scored* scored) {
  return scored ? static_cast<int>(scored->value.unscored_ids.size()) : 0;
}

ed_status ed_scored_to_csv(const ed_scored* scored, char** out) {
  if (ed_status s = require(scored && out, "null argument")) return s;
  return guarded([&] {
    *out = copy_string(scored_network_to_csv(scored->value));
    return ED_OK;
  });
}

ed_status ed_scored_to_json(const ed_scored* scored, char** out) {
  if (ed_status s = require(scored && out, "null argument")) return s;
  return guarded([&] {
    *out = copy_string(scored_network_to_json(scored->value));
    return ED_OK;
  });
}

ed_status ed_scored_from_json(const char* json_text, size_t len,
                              ed_scored** out) {
  if (ed_status s = require(json_text && out, "null argument")) return s;
  return guarded([&] {
    auto handle = new ed_scored{scored_network_from_json({json_text, len})};
    *out = handle;
    return ED_OK;
  });
}

ed_status ed_scored_load_file(const char* path, ed_scored** out) {
  if (ed_status s = require(path && out, "null argument")) return s;
  return guarded([&] {
    auto handle = new ed_scored{load_scored_network(path)};
    *out = handle;
    return ED_OK;
  });
}

ed_status ed_window_dump_csv(const ed_network* network, int window_size,
                             char** out) {
  if (ed_status s = require(network && out, "null argument")) return s;
  return guarded([&] {
    const std::vector<Window> windows =
        build_all_windows(network->value, window_size);
    *out = copy_string(window_dump_csv(windows));
    return ED_OK;
  });
}

ed_status ed_brute_force_score(const ed_network* network, const char* tweet_id,
                               int window_size, int* scored_out,
                               double* score_out) {
  if (ed_status s = require(network && tweet_id && scored_out && score_out,
                            "null argument")) {
    return s;
  }
  return guarded([&] {
    const Tweet* target = nullptr;
    for (const Tweet& t : network->value.ego_tweets) {
      if (t.tweet_id == tweet_id) {
        target = &t;
        break;
      }
    }
    if (!target) {
      raise(Errc::InvalidArgument,
            std::string("tweet \"") + tweet_id + "\" is not an ego tweet");
    }
    const std::optional<double> score =
        brute_force_score(network->value, *target, window_size);
    *scored_out = score.has_value() ? 1 : 0;
    *score_out = score.value_or(0.0);
    return ED_OK;
  });
}

ed_status ed_report_json(const ed_scored* const* scored, size_t count,
                         const ed_config* config, int histogram_bins,
                         int grid_linear_bins, int grid_log_bins, char** out) {
  if (ed_status s = require(scored && out, "null argument")) return s;
  return guarded([&] {
    GridSpec grid{grid_linear_bins, grid_log_bins};
    const Report report = build_report(scored_vector(scored, count),
                                       config_from(config), histogram_bins,
                                       grid);
    *out = copy_string(report_to_json(report));
    return ED_OK;
  });
}

ed_status ed_report_csv(const ed_scored* const* scored, size_t count,
                        const ed_config* config, int histogram_bins,
                        int grid_linear_bins, int grid_log_bins,
                        const char* table, char** out) {
  if (ed_status s = require(scored && table && out, "null argument")) return s;
  return guarded([&] {
    GridSpec grid{grid_linear_bins, grid_log_bins};
    const Report report = build_report(scored_vector(scored, count),
                                       config_from(config), histogram_bins,
                                       grid);
    *out = copy_string(report_table_csv(report, table));
    return ED_OK;
  });
}

ed_status ed_synth_generate(const ed_synth_config* config, char** jsonl_out,
                            char** truth_json_out) {
  if (ed_status s = require(config && jsonl_out && truth_json_out,
                            "null argument")) {
    return s;
  }
  return guarded([&] {
    SynthConfig cfg;
    cfg.seed = config->seed;
    cfg.num_followees = config->num_followees;
    cfg.tweets_per_followee = config->tweets_per_followee;
    cfg.ego_tweet_count = config->ego_tweet_count;
    cfg.mix.explicit_retweet = config->mix_explicit_retweet;
    cfg.mix.explicit_reply = config->mix_explicit_reply;
    cfg.mix.implicit_copy = config->mix_implicit_copy;
    cfg.mix.implicit_edited = config->mix_implicit_edited;
    cfg.mix.unrelated = config->mix_unrelated;
    cfg.edit_rate = config->edit_rate;
    cfg.vocab_size = config->vocab_size;
    cfg.mean_interarrival_seconds = config->mean_interarrival_seconds;
    cfg.window_size = config->window_size;

    const SynthResult result = generate_network(cfg);
    std::string jsonl = serialize_ego_network(result.network);
    std::string truth = ground_truth_to_json(result.truth);
    *jsonl_out = copy_string(jsonl);
    *truth_json_out = copy_string(truth);
    return ED_OK;
  });
}

ed_status ed_evaluate(const ed_scored* scored, const char* truth_json,
                      size_t truth_len, double threshold,
                      char** metrics_json_out) {
  if (ed_status s = require(scored && truth_json && metrics_json_out,
                            "null argument")) {
    return s;
  }
  return guarded([&] {
    const GroundTruth truth =
        ground_truth_from_json({truth_json, truth_len});
    const DetectionMetrics metrics =
        evaluate_detection(scored->value, truth, threshold);
    *metrics_json_out = copy_string(detection_metrics_to_json(metrics));
    return ED_OK;
  });
}

ed_status ed_extract_features_json(const char* text, size_t text_len,
                                   const char* author_username, char** out) {
  if (ed_status s = require(text && author_username && out, "null argument")) {
    return s;
  }
  return guarded([&] {
    const FeatureSet features =
        extract_features({text, text_len}, author_username);
    nlohmann::json terms = nlohmann::json::array();
    for (const Term& term : features.terms()) {
      terms.push_back({{"kind", term_kind_name(term.kind)},
                       {"value", term.value}});
    }
    *out = copy_string(terms.dump(2) + "\n");
    return ED_OK;
  });
}

ed_status ed_stem(const char* token, char** out) {
  if (ed_status s = require(token && out, "null argument")) return s;
  return guarded([&] {
    *out = copy_string(stem(token));
    return ED_OK;
  });
}

int ed_is_stopword(const char* token) {
  return token && is_stopword(token) ? 1 : 0;
}

}  // extern "C"
