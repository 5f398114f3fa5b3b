#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace crn {

/// An atomic proposition about an image, e.g. "lobed nucleus".
///
/// `raw` keeps the agent's wording; identity is decided by `canonical` alone:
/// lowercase, whitespace collapsed, leading "a"/"an"/"the" and trailing
/// punctuation removed.
class SymbolAtom {
public:
  /// Throws InvalidSymbol if nothing survives normalization.
  explicit SymbolAtom(std::string_view raw);

  const std::string& raw() const { return raw_; }
  const std::string& canonical() const { return canonical_; }

  friend bool operator==(const SymbolAtom& a, const SymbolAtom& b) {
    return a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const SymbolAtom& a, const SymbolAtom& b) {
    return a.canonical_ <=> b.canonical_;
  }

private:
  std::string raw_;
  std::string canonical_;
};

/// Normalizes agent text into a SymbolAtom.
SymbolAtom canonicalize(std::string_view raw);

/// The normalization itself; may return an empty string.
std::string canonical_text(std::string_view raw);

}  // namespace crn
