#pragma once

#include <map>
#include <string>

namespace crn {

/// A synthetic "image": ground-truth symbol presence plus noisy evidence.
/// Symbols outside `presence` are absent.
struct SynthImage {
  std::string id;
  std::string label;
  std::map<std::string, int> presence;
  std::map<std::string, double> evidence;

  bool has(const std::string& symbol) const {
    auto it = presence.find(symbol);
    return it != presence.end() && it->second != 0;
  }
};

}  // namespace crn
