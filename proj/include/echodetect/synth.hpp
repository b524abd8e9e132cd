#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "echodetect/data_model.hpp"
#include "echodetect/scoring.hpp"

namespace echodetect {

enum class PlantedKind {
  ExplicitRetweet,
  ExplicitReply,
  ImplicitCopy,
  ImplicitEdited,
  Unrelated,
};

const char* planted_kind_name(PlantedKind kind);
bool parse_planted_kind(std::string_view name, PlantedKind& out);

struct BehaviorMix {
  double explicit_retweet = 0.2;
  double explicit_reply = 0.2;
  double implicit_copy = 0.2;
  double implicit_edited = 0.2;
  double unrelated = 0.2;
};

struct SynthConfig {
  std::uint64_t seed = 0;
  int num_followees = 5;
  int tweets_per_followee = 40;
  int ego_tweet_count = 30;
  BehaviorMix mix;
  double edit_rate = 0.2;          // fraction of source words dropped
  int vocab_size = 100;            // per vocabulary partition
  double mean_interarrival_seconds = 60.0;
  int window_size = 100;           // sources are planted inside this
};

struct PlantedTruth {
  PlantedKind kind = PlantedKind::Unrelated;
  std::string source_tweet_id;  // empty for unrelated tweets
};

struct GroundTruth {
  std::map<std::string, PlantedTruth> by_tweet_id;
};

struct SynthResult {
  EgoNetwork network;
  GroundTruth truth;
};

// Builds an ego network with planted response behavior. The same
// config always produces byte-identical output. Copy and edited-copy
// tweets take the classic untagged form "rt @user: ...", explicit
// ones carry the real tags on top of the same text.
SynthResult generate_network(const SynthConfig& config);

std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(std::string_view json_text);
GroundTruth load_ground_truth(const std::string& path);

// Reference scorer written as the plain nested-loop reading of the
// definitions, kept deliberately separate from the pipeline so the
// two can check each other. Returns nothing for an empty window.
std::optional<double> brute_force_score(const EgoNetwork& network,
                                        const Tweet& target, int window_size);

struct DetectionMetrics {
  int positives_total = 0;   // planted implicit responses
  int detected = 0;          // flagged nontagged tweets
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  int true_negatives = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::map<std::string, std::optional<double>> recall_by_kind;
  // Among detected implicit responses, how often the best match is
  // the planted source.
  std::optional<double> best_match_accuracy;
};

// Compares the scorer's output with the planted truth over the
// nontagged tweets. Unscored planted responses count as misses.
DetectionMetrics evaluate_detection(const ScoredNetwork& scored,
                                    const GroundTruth& truth,
                                    double threshold);

std::string detection_metrics_to_json(const DetectionMetrics& metrics);

}  // namespace echodetect
