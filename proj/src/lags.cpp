#include "ssir/lags.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ssir/errors.hpp"

namespace ssir {

LagSet::LagSet(std::vector<Lag> lags) : lags_(std::move(lags)) {
  if (lags_.empty()) throw std::invalid_argument("lag set must be nonempty");
  std::set<std::pair<int, int>> seen;
  for (const Lag& lag : lags_)
    if (!seen.insert({lag.k, lag.l}).second)
      throw std::invalid_argument("duplicate lag (" + std::to_string(lag.k) +
                                  ", " + std::to_string(lag.l) + ")");
}

LagSet LagSet::first() {
  return LagSet({{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                 {1, 1}, {-1, 1}, {1, -1}, {-1, -1}});
}

LagSet LagSet::first2() {
  std::vector<Lag> lags = first().lags();
  for (Lag lag : {Lag{2, 0}, Lag{2, 1}, Lag{2, 2}, Lag{2, -1}, Lag{2, -2},
                  Lag{-2, 0}, Lag{-2, 1}, Lag{-2, 2}, Lag{-2, -1}, Lag{-2, -2},
                  Lag{1, 2}, Lag{-1, 2}, Lag{1, -2}, Lag{-1, -2},
                  Lag{0, 2}, Lag{0, -2}})
    lags.push_back(lag);
  return LagSet(std::move(lags));
}

LagSet LagSet::south_east() { return LagSet({{1, 1}}); }

LagSet LagSet::onsite() { return LagSet({{0, 0}}); }

LagSet LagSet::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FieldIoError("cannot open lag file: " + path);
  std::vector<Lag> lags;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    int k, l;
    if (!(ls >> k)) continue;  // blank or comment-only line
    if (!(ls >> l))
      throw FieldIoError("lag file " + path + ": line " +
                         std::to_string(line_no) + " needs two integers");
    std::string trailing;
    if (ls >> trailing)
      throw FieldIoError("lag file " + path + ": line " +
                         std::to_string(line_no) + " has trailing tokens");
    lags.push_back({k, l});
  }
  if (lags.empty()) throw FieldIoError("lag file " + path + " is empty");
  return LagSet(std::move(lags));  // throws on duplicates
}

LagSet LagSet::parse(const std::string& spec) {
  if (spec == "first") return first();
  if (spec == "first2") return first2();
  if (spec == "se") return south_east();
  if (spec == "onsite") return onsite();
  if (spec.rfind("file:", 0) == 0) return from_file(spec.substr(5));
  throw std::invalid_argument(
      "unknown lag set '" + spec +
      "' (expected first, first2, se, onsite, or file:PATH)");
}

}  // namespace ssir
