#pragma once

#include "crn/synthworld/image.hpp"
#include "crn/util/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace crn {

/// Parameters of a synthetic world. JSON keys match the field names.
struct WorldSpec {
  std::string name = "synthworld";
  std::string task = "specimen";
  std::uint64_t seed = 1;
  int classes = 5;
  /// Optional explicit class names; generated when empty.
  std::vector<std::string> class_names;
  int core_per_class = 6;
  int shared = 3;
  int distractors_per_class = 10;
  /// π(y, s) for s in core(y) is drawn uniformly from this range.
  double core_presence_lo = 0.75;
  double core_presence_hi = 0.95;
  double shared_presence_lo = 0.3;
  double shared_presence_hi = 0.7;
  /// π(y, s) for s in core(y') with y' != y.
  double cross_presence = 0.0;
  /// Verifier noise half-width.
  double sigma = 0.1;
  /// Probability that the concept agent swaps a listed concept for a distractor.
  double concept_noise = 0.0;
  double eta_grounded = 0.15;
  double eta_ungrounded = 0.4;
  /// Probability that an exploration proposal is drawn from the supplied concepts.
  double concept_bias = 0.8;
  /// System-1 confusion matrix; rows are true classes. When empty, a matrix
  /// with `s1_diagonal` on the diagonal and the rest spread evenly is used.
  std::vector<std::vector<double>> s1_confusion;
  double s1_diagonal = 0.6;
  /// Probability mass the System-1 oracle puts on its sampled class.
  double s1_confidence = 0.6;
  int train_per_class = 50;
  int val_per_class = 0;
  int test_per_class = 20;
};

/// Throws ConfigError.
void validate(const WorldSpec& spec);
json spec_to_json(const WorldSpec& spec);
/// Missing keys keep their defaults; unknown keys are rejected.
WorldSpec spec_from_json(const json& doc);

enum class SymbolKind { core, shared, distractor };

struct World {
  WorldSpec spec;
  std::vector<std::string> labels;
  std::map<std::string, std::vector<std::string>> core;         // per label
  std::vector<std::string> shared;
  std::map<std::string, std::vector<std::string>> distractors;  // per label
  /// π(label, symbol) over core and shared symbols; absent entries are 0.
  std::map<std::string, std::map<std::string, double>> presence;
  std::vector<std::vector<double>> confusion;

  /// core(label) followed by the shared pool.
  std::vector<std::string> true_vocabulary(const std::string& label) const;
  bool is_true_symbol(const std::string& label, const std::string& symbol) const;
  /// True for core or shared symbols of any class.
  bool in_any_vocabulary(const std::string& symbol) const;
  /// Owner class of a core or distractor symbol, if any.
  std::optional<std::string> owner(const std::string& symbol) const;
  std::optional<SymbolKind> kind(const std::string& symbol) const;
  double pi(const std::string& label, const std::string& symbol) const;
  std::size_t label_index(const std::string& label) const;  // throws UnknownLabel
  /// Every core, shared and distractor symbol, sorted.
  std::vector<std::string> all_symbols() const;
};

World gen_world(const WorldSpec& spec);

/// Deterministic in (world, label, seed).
SynthImage sample_image(const World& world, const std::string& label, std::uint64_t seed);

struct SynthItem {
  SynthImage image;
  std::string split;
};

/// train/val/test images per class with ids "<label>-<split>-<k>".
std::vector<SynthItem> sample_dataset(const World& world);

json world_to_json(const World& world);
World world_from_json(const json& doc);
json image_to_json(const SynthImage& image);
SynthImage image_from_json(const json& doc);

/// Writes world.json, images.json and manifest.json into `dir`.
void write_world_dir(const World& world, const std::vector<SynthItem>& items, const std::filesystem::path& dir);
World load_world(const std::filesystem::path& dir);
/// images.json from a world directory, keyed by id.
std::map<std::string, std::shared_ptr<const SynthImage>> load_images(const std::filesystem::path& dir);

/// Manifest document for the given items; item paths are "synth:<id>".
json make_manifest(const World& world, const std::vector<SynthItem>& items);

}  // namespace crn
