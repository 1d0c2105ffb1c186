#pragma once

#include <string>
#include <vector>

namespace ssir {

/// Integer spatial offset (row, column) pairing a covariate cell with a
/// response cell.
struct Lag {
  int k = 0;
  int l = 0;
  bool operator==(const Lag&) const = default;
};

/// Ordered set of distinct spatial lags.
class LagSet {
 public:
  LagSet() = default;  // empty placeholder, filled by fits and parsers
  explicit LagSet(std::vector<Lag> lags);

  // Presets. first/first2 follow the row order of the usual neighbourhood
  // tables; south_east is the directional first-order set; onsite reduces
  // the method to classical iid SIR.
  static LagSet first();
  static LagSet first2();
  static LagSet south_east();
  static LagSet onsite();

  /// Loads "k l" integer pairs, one per line; '#' starts a comment.
  static LagSet from_file(const std::string& path);

  /// Accepts "first", "first2", "se", "onsite" or "file:PATH".
  static LagSet parse(const std::string& spec);

  int size() const { return static_cast<int>(lags_.size()); }
  const Lag& operator[](int i) const { return lags_[i]; }
  const std::vector<Lag>& lags() const { return lags_; }
  auto begin() const { return lags_.begin(); }
  auto end() const { return lags_.end(); }
  bool operator==(const LagSet&) const = default;

 private:
  std::vector<Lag> lags_;
};

}  // namespace ssir
