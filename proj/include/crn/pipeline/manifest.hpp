#pragma once

#include "crn/agents/endpoint.hpp"
#include "crn/util/json_io.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace crn {

struct ManifestItem {
  std::string id;
  /// Image file relative to the manifest, or "synth:<id>" for synthetic items.
  std::string path;
  std::string label;
  std::string split;  // train, val or test
};

struct Manifest {
  std::string name;
  std::string task;
  std::vector<std::string> classes;
  std::vector<ManifestItem> items;
  std::filesystem::path base_dir;
  /// Synthetic image records, loaded from images.json beside the manifest.
  std::map<std::string, std::shared_ptr<const SynthImage>> synth;

  std::vector<const ManifestItem*> items_for(std::string_view label, std::string_view split) const;
  std::vector<const ManifestItem*> split_items(std::string_view split) const;
  /// The request for `item` with the given prompt text.
  Stimulus stimulus(const ManifestItem& item, std::string text) const;
};

/// Throws SchemaError naming the offending field.
Manifest manifest_from_json(const json& doc, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

struct World;
struct SynthItem;
/// In-memory manifest over synthetic items.
Manifest manifest_from_world(const World& world, const std::vector<SynthItem>& items);

}  // namespace crn
