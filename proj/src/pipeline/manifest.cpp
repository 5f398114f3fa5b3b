#include "crn/pipeline/manifest.hpp"

#include "crn/errors.hpp"
#include "crn/synthworld/world.hpp"

#include <algorithm>
#include <set>

namespace crn {

std::vector<const ManifestItem*> Manifest::items_for(std::string_view label, std::string_view split) const {
  std::vector<const ManifestItem*> out;
  for (const auto& it : items)
    if (it.label == label && it.split == split) out.push_back(&it);
  return out;
}

std::vector<const ManifestItem*> Manifest::split_items(std::string_view split) const {
  std::vector<const ManifestItem*> out;
  for (const auto& it : items)
    if (it.split == split) out.push_back(&it);
  return out;
}

Stimulus Manifest::stimulus(const ManifestItem& item, std::string text) const {
  Stimulus s;
  s.text = std::move(text);
  if (item.path.rfind("synth:", 0) == 0) {
    auto it = synth.find(item.path.substr(6));
    if (it == synth.end()) throw SchemaError("manifest item " + item.id + ": no synthetic record for " + item.path);
    s.synth = it->second;
  } else {
    std::filesystem::path p(item.path);
    s.image = p.is_absolute() ? p : base_dir / p;
  }
  return s;
}

Manifest manifest_from_json(const json& doc, const std::filesystem::path& base_dir) {
  Manifest m;
  m.base_dir = base_dir;
  m.name = require_string(doc, "name", "manifest");
  m.task = doc.contains("task") ? require_string(doc, "task", "manifest") : std::string("image");
  const auto& classes = require_array(doc, "classes", "manifest");
  std::set<std::string> known;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!classes[i].is_string())
      throw SchemaError("manifest.classes[" + std::to_string(i) + "]: expected a string");
    m.classes.push_back(classes[i].get<std::string>());
    if (!known.insert(m.classes.back()).second)
      throw SchemaError("manifest.classes[" + std::to_string(i) + "]: duplicate class");
  }
  const auto& items = require_array(doc, "items", "manifest");
  std::set<std::string> ids;
  bool any_synth = false;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string path = "manifest.items[" + std::to_string(i) + "]";
    ManifestItem it;
    it.id = require_string(items[i], "id", path);
    it.path = require_string(items[i], "path", path);
    it.label = require_string(items[i], "label", path);
    it.split = require_string(items[i], "split", path);
    if (!known.count(it.label)) throw SchemaError(path + ".label: unknown class \"" + it.label + "\"");
    if (it.split != "train" && it.split != "val" && it.split != "test")
      throw SchemaError(path + ".split: must be train, val or test");
    if (!ids.insert(it.id).second) throw SchemaError(path + ".id: duplicate id \"" + it.id + "\"");
    any_synth = any_synth || it.path.rfind("synth:", 0) == 0;
    m.items.push_back(std::move(it));
  }
  if (any_synth) m.synth = load_images(base_dir);
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_json_file(path), path.parent_path());
}

Manifest manifest_from_world(const World& world, const std::vector<SynthItem>& items) {
  Manifest m;
  m.name = world.spec.name;
  m.task = world.spec.task;
  m.classes = world.labels;
  for (const auto& it : items) {
    m.items.push_back({it.image.id, "synth:" + it.image.id, it.image.label, it.split});
    m.synth.emplace(it.image.id, std::make_shared<SynthImage>(it.image));
  }
  return m;
}

}  // namespace crn
