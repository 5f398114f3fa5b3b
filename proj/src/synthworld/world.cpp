#include "crn/synthworld/world.hpp"

#include "crn/errors.hpp"
#include "crn/rulecore/symbol.hpp"
#include "crn/util/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace crn {
namespace {

constexpr const char* kAdjectives[] = {
    "amber",   "banded",  "beaded",   "blunt",   "branched", "bright",  "coarse",  "coiled",  "crested",
    "curved",  "dappled", "dense",    "dotted",  "dull",     "faint",   "flat",    "fringed", "glossy",
    "grainy",  "hollow",  "jagged",   "lobed",   "mottled",  "narrow",  "oval",    "pale",    "pitted",
    "ribbed",  "ridged",  "ringed",   "rough",   "scaly",    "serrated", "slender", "smooth",  "speckled",
    "spiral",  "spotted", "streaked", "striped", "tapered",  "thick",   "tufted",  "twisted", "veined",
    "wavy",    "webbed",  "wrinkled"};

constexpr const char* kNouns[] = {
    "antenna", "apex",    "band",    "beak",    "border",  "bulb",    "canopy",  "cluster", "collar",
    "core",    "crest",   "crown",   "disc",    "edge",    "filament", "fin",    "fold",    "frond",
    "granule", "groove",  "halo",    "husk",    "lattice", "margin",  "mesh",    "node",    "nucleus",
    "patch",   "petal",   "plate",   "pore",    "ridge",   "ring",    "rim",     "scale",   "segment",
    "shell",   "spine",   "spur",    "stalk",   "stem",    "strand",  "stripe",  "tail",    "thread",
    "tip",     "tuft",    "vein"};

constexpr const char* kClassNames[] = {"amberwing", "bluecap",   "corallite", "duskfern", "emberleaf",
                                       "frostmoth", "glimmerod", "hollowort", "ironbark", "jadecrest",
                                       "kelpshade", "lumenweed"};

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

std::vector<std::vector<double>> default_confusion(int c, double diagonal) {
  std::vector<std::vector<double>> m(static_cast<std::size_t>(c), std::vector<double>(static_cast<std::size_t>(c)));
  double off = c > 1 ? (1.0 - diagonal) / (c - 1) : 0.0;
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) m[i][j] = i == j ? (c > 1 ? diagonal : 1.0) : off;
  return m;
}

template <typename T>
void read_opt(const json& doc, const char* key, T& out) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string(key) + ": wrong type");
  }
}

const std::set<std::string>& spec_keys() {
  static const std::set<std::string> keys = {
      "name",           "task",           "seed",           "classes",          "class_names",
      "core_per_class", "shared",         "distractors_per_class",              "core_presence_lo",
      "core_presence_hi", "shared_presence_lo", "shared_presence_hi",           "cross_presence",
      "sigma",          "concept_noise",  "eta_grounded",   "eta_ungrounded",   "concept_bias",
      "s1_confusion",   "s1_diagonal",    "s1_confidence",  "train_per_class",  "val_per_class",
      "test_per_class"};
  return keys;
}

}  // namespace

void validate(const WorldSpec& s) {
  auto fail = [](const std::string& m) { throw ConfigError("world spec: " + m); };
  auto prob = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) fail(std::string(name) + " must lie in [0,1]");
  };
  if (s.classes < 1) fail("classes must be >= 1");
  if (!s.class_names.empty() && static_cast<int>(s.class_names.size()) != s.classes)
    fail("class_names must list exactly `classes` names");
  if (s.core_per_class < 1) fail("core_per_class must be >= 1");
  if (s.shared < 0 || s.distractors_per_class < 1) fail("shared >= 0 and distractors_per_class >= 1 required");
  prob(s.core_presence_lo, "core_presence_lo");
  prob(s.core_presence_hi, "core_presence_hi");
  prob(s.shared_presence_lo, "shared_presence_lo");
  prob(s.shared_presence_hi, "shared_presence_hi");
  if (s.core_presence_lo > s.core_presence_hi || s.shared_presence_lo > s.shared_presence_hi)
    fail("presence ranges must have lo <= hi");
  prob(s.cross_presence, "cross_presence");
  prob(s.sigma, "sigma");
  prob(s.concept_noise, "concept_noise");
  prob(s.eta_grounded, "eta_grounded");
  prob(s.eta_ungrounded, "eta_ungrounded");
  if (s.eta_grounded > s.eta_ungrounded) fail("eta_grounded must not exceed eta_ungrounded");
  prob(s.concept_bias, "concept_bias");
  prob(s.s1_diagonal, "s1_diagonal");
  prob(s.s1_confidence, "s1_confidence");
  if (!s.s1_confusion.empty()) {
    if (static_cast<int>(s.s1_confusion.size()) != s.classes) fail("s1_confusion must be classes x classes");
    for (const auto& row : s.s1_confusion) {
      if (static_cast<int>(row.size()) != s.classes) fail("s1_confusion must be classes x classes");
      double sum = 0;
      for (double v : row) {
        prob(v, "s1_confusion entry");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9) fail("s1_confusion rows must sum to 1");
    }
  }
  if (s.train_per_class < 0 || s.val_per_class < 0 || s.test_per_class < 0) fail("per-class counts must be >= 0");
  std::size_t needed = static_cast<std::size_t>(s.classes) * (s.core_per_class + s.distractors_per_class) + s.shared;
  if (needed > std::size(kAdjectives) * std::size(kNouns)) fail("vocabulary too large");
  std::set<std::string> names(s.class_names.begin(), s.class_names.end());
  if (names.size() != s.class_names.size()) fail("class_names must be distinct");
  for (const auto& n : s.class_names)
    if (n.empty() || canonical_text(n) != n) fail("class name \"" + n + "\" is not in canonical form");
}

json spec_to_json(const WorldSpec& s) {
  return json{{"name", s.name},
              {"task", s.task},
              {"seed", s.seed},
              {"classes", s.classes},
              {"class_names", s.class_names},
              {"core_per_class", s.core_per_class},
              {"shared", s.shared},
              {"distractors_per_class", s.distractors_per_class},
              {"core_presence_lo", s.core_presence_lo},
              {"core_presence_hi", s.core_presence_hi},
              {"shared_presence_lo", s.shared_presence_lo},
              {"shared_presence_hi", s.shared_presence_hi},
              {"cross_presence", s.cross_presence},
              {"sigma", s.sigma},
              {"concept_noise", s.concept_noise},
              {"eta_grounded", s.eta_grounded},
              {"eta_ungrounded", s.eta_ungrounded},
              {"concept_bias", s.concept_bias},
              {"s1_confusion", s.s1_confusion},
              {"s1_diagonal", s.s1_diagonal},
              {"s1_confidence", s.s1_confidence},
              {"train_per_class", s.train_per_class},
              {"val_per_class", s.val_per_class},
              {"test_per_class", s.test_per_class}};
}

WorldSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("world spec: expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (!spec_keys().count(key)) throw SchemaError("world spec: unknown field \"" + key + "\"");
  }
  WorldSpec s;
  read_opt(doc, "name", s.name);
  read_opt(doc, "task", s.task);
  read_opt(doc, "seed", s.seed);
  read_opt(doc, "classes", s.classes);
  read_opt(doc, "class_names", s.class_names);
  read_opt(doc, "core_per_class", s.core_per_class);
  read_opt(doc, "shared", s.shared);
  read_opt(doc, "distractors_per_class", s.distractors_per_class);
  read_opt(doc, "core_presence_lo", s.core_presence_lo);
  read_opt(doc, "core_presence_hi", s.core_presence_hi);
  read_opt(doc, "shared_presence_lo", s.shared_presence_lo);
  read_opt(doc, "shared_presence_hi", s.shared_presence_hi);
  read_opt(doc, "cross_presence", s.cross_presence);
  read_opt(doc, "sigma", s.sigma);
  read_opt(doc, "concept_noise", s.concept_noise);
  read_opt(doc, "eta_grounded", s.eta_grounded);
  read_opt(doc, "eta_ungrounded", s.eta_ungrounded);
  read_opt(doc, "concept_bias", s.concept_bias);
  read_opt(doc, "s1_confusion", s.s1_confusion);
  read_opt(doc, "s1_diagonal", s.s1_diagonal);
  read_opt(doc, "s1_confidence", s.s1_confidence);
  read_opt(doc, "train_per_class", s.train_per_class);
  read_opt(doc, "val_per_class", s.val_per_class);
  read_opt(doc, "test_per_class", s.test_per_class);
  if (!s.class_names.empty() && doc.find("classes") == doc.end()) s.classes = static_cast<int>(s.class_names.size());
  validate(s);
  return s;
}

std::vector<std::string> World::true_vocabulary(const std::string& label) const {
  auto it = core.find(label);
  if (it == core.end()) throw UnknownLabel("unknown class \"" + label + "\"");
  auto out = it->second;
  out.insert(out.end(), shared.begin(), shared.end());
  return out;
}

bool World::is_true_symbol(const std::string& label, const std::string& symbol) const {
  if (std::find(shared.begin(), shared.end(), symbol) != shared.end()) return true;
  auto it = core.find(label);
  return it != core.end() && std::find(it->second.begin(), it->second.end(), symbol) != it->second.end();
}

bool World::in_any_vocabulary(const std::string& symbol) const {
  auto k = kind(symbol);
  return k && *k != SymbolKind::distractor;
}

std::optional<std::string> World::owner(const std::string& symbol) const {
  for (const auto& [label, syms] : core)
    if (std::find(syms.begin(), syms.end(), symbol) != syms.end()) return label;
  for (const auto& [label, syms] : distractors)
    if (std::find(syms.begin(), syms.end(), symbol) != syms.end()) return label;
  return std::nullopt;
}

std::optional<SymbolKind> World::kind(const std::string& symbol) const {
  if (std::find(shared.begin(), shared.end(), symbol) != shared.end()) return SymbolKind::shared;
  for (const auto& [_, syms] : core)
    if (std::find(syms.begin(), syms.end(), symbol) != syms.end()) return SymbolKind::core;
  for (const auto& [_, syms] : distractors)
    if (std::find(syms.begin(), syms.end(), symbol) != syms.end()) return SymbolKind::distractor;
  return std::nullopt;
}

double World::pi(const std::string& label, const std::string& symbol) const {
  auto row = presence.find(label);
  if (row == presence.end()) throw UnknownLabel("unknown class \"" + label + "\"");
  auto it = row->second.find(symbol);
  return it == row->second.end() ? 0.0 : it->second;
}

std::size_t World::label_index(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw UnknownLabel("unknown class \"" + label + "\"");
  return static_cast<std::size_t>(it - labels.begin());
}

std::vector<std::string> World::all_symbols() const {
  std::vector<std::string> out(shared.begin(), shared.end());
  for (const auto& [_, syms] : core) out.insert(out.end(), syms.begin(), syms.end());
  for (const auto& [_, syms] : distractors) out.insert(out.end(), syms.begin(), syms.end());
  std::sort(out.begin(), out.end());
  return out;
}

World gen_world(const WorldSpec& spec) {
  validate(spec);
  World w;
  w.spec = spec;
  for (int i = 0; i < spec.classes; ++i) {
    if (!spec.class_names.empty()) {
      w.labels.push_back(spec.class_names[static_cast<std::size_t>(i)]);
    } else if (static_cast<std::size_t>(i) < std::size(kClassNames)) {
      w.labels.emplace_back(kClassNames[i]);
    } else {
      w.labels.push_back("class " + std::to_string(i));
    }
  }

  Rng rng(derive_seed(spec.seed, "vocabulary"));
  std::vector<std::string> names;
  for (const char* a : kAdjectives)
    for (const char* n : kNouns) names.push_back(std::string(a) + " " + n);
  rng.shuffle(names);
  std::size_t next = 0;
  auto take = [&](int count) {
    std::vector<std::string> out(names.begin() + static_cast<long>(next),
                                 names.begin() + static_cast<long>(next + static_cast<std::size_t>(count)));
    next += static_cast<std::size_t>(count);
    std::sort(out.begin(), out.end());
    return out;
  };
  w.shared = take(spec.shared);
  for (const auto& y : w.labels) w.core[y] = take(spec.core_per_class);
  for (const auto& y : w.labels) w.distractors[y] = take(spec.distractors_per_class);

  Rng prng(derive_seed(spec.seed, "presence"));
  for (const auto& y : w.labels) {
    auto& row = w.presence[y];
    for (const auto& s : w.core[y]) row[s] = prng.uniform(spec.core_presence_lo, spec.core_presence_hi);
    for (const auto& s : w.shared) row[s] = prng.uniform(spec.shared_presence_lo, spec.shared_presence_hi);
    if (spec.cross_presence > 0) {
      for (const auto& other : w.labels) {
        if (other == y) continue;
        for (const auto& s : w.core[other]) row[s] = spec.cross_presence;
      }
    }
  }
  w.confusion = spec.s1_confusion.empty() ? default_confusion(spec.classes, spec.s1_diagonal) : spec.s1_confusion;
  return w;
}

SynthImage sample_image(const World& world, const std::string& label, std::uint64_t seed) {
  world.label_index(label);
  Rng rng(seed);
  SynthImage img;
  img.label = label;
  const double sigma = world.spec.sigma;
  for (const auto& s : world.all_symbols()) {
    double p = world.pi(label, s);
    int present = rng.bernoulli(p) ? 1 : 0;
    double noise = rng.uniform(-sigma, sigma);
    img.presence[s] = present;
    img.evidence[s] = clamp01(present + noise);
  }
  return img;
}

std::vector<SynthItem> sample_dataset(const World& world) {
  std::vector<SynthItem> items;
  const std::pair<const char*, int> splits[] = {{"train", world.spec.train_per_class},
                                                {"val", world.spec.val_per_class},
                                                {"test", world.spec.test_per_class}};
  for (const auto& y : world.labels) {
    for (const auto& [split, count] : splits) {
      for (int k = 0; k < count; ++k) {
        std::string id = y + "-" + split + "-" + std::to_string(k);
        auto img = sample_image(world, y, derive_seed(world.spec.seed, "image:" + id));
        img.id = id;
        items.push_back({std::move(img), split});
      }
    }
  }
  return items;
}

json world_to_json(const World& w) {
  return json{{"spec", spec_to_json(w.spec)},
              {"labels", w.labels},
              {"core", w.core},
              {"shared", w.shared},
              {"distractors", w.distractors},
              {"presence", w.presence},
              {"confusion", w.confusion}};
}

World world_from_json(const json& doc) {
  World w;
  try {
    w.spec = spec_from_json(require_field(doc, "spec", ""));
    w.labels = require_array(doc, "labels", "").get<std::vector<std::string>>();
    w.core = require_field(doc, "core", "").get<std::map<std::string, std::vector<std::string>>>();
    w.shared = require_array(doc, "shared", "").get<std::vector<std::string>>();
    w.distractors = require_field(doc, "distractors", "").get<std::map<std::string, std::vector<std::string>>>();
    w.presence = require_field(doc, "presence", "").get<std::map<std::string, std::map<std::string, double>>>();
    w.confusion = require_array(doc, "confusion", "").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("world: ") + e.what());
  }
  for (const auto& y : w.labels) {
    if (!w.core.count(y) || !w.distractors.count(y) || !w.presence.count(y))
      throw SchemaError("world: class \"" + y + "\" lacks vocabulary entries");
  }
  return w;
}

json image_to_json(const SynthImage& img) {
  return json{{"id", img.id}, {"label", img.label}, {"presence", img.presence}, {"evidence", img.evidence}};
}

SynthImage image_from_json(const json& doc) {
  SynthImage img;
  img.id = require_string(doc, "id", "image");
  img.label = require_string(doc, "label", "image");
  try {
    img.presence = require_field(doc, "presence", "image").get<std::map<std::string, int>>();
    img.evidence = require_field(doc, "evidence", "image").get<std::map<std::string, double>>();
  } catch (const json::exception& e) {
    throw SchemaError("image " + img.id + ": " + e.what());
  }
  return img;
}

json make_manifest(const World& world, const std::vector<SynthItem>& items) {
  json list = json::array();
  for (const auto& it : items) {
    list.push_back({{"id", it.image.id}, {"path", "synth:" + it.image.id}, {"label", it.image.label},
                    {"split", it.split}});
  }
  return json{{"name", world.spec.name}, {"task", world.spec.task}, {"classes", world.labels}, {"items", list}};
}

void write_world_dir(const World& world, const std::vector<SynthItem>& items, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_json_file(dir / "world.json", world_to_json(world));
  json images = json::array();
  for (const auto& it : items) images.push_back(image_to_json(it.image));
  write_json_file(dir / "images.json", json{{"images", images}});
  write_json_file(dir / "manifest.json", make_manifest(world, items));
}

World load_world(const std::filesystem::path& dir) { return world_from_json(read_json_file(dir / "world.json")); }

std::map<std::string, std::shared_ptr<const SynthImage>> load_images(const std::filesystem::path& dir) {
  std::map<std::string, std::shared_ptr<const SynthImage>> out;
  auto doc = read_json_file(dir / "images.json");
  for (const auto& entry : require_array(doc, "images", "")) {
    auto img = std::make_shared<SynthImage>(image_from_json(entry));
    out.emplace(img->id, std::move(img));
  }
  return out;
}

}  // namespace crn
