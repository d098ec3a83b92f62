#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace lexdecline {

// One declining word and its matched stable control. Frequencies are the
// first-decade relative frequencies; lengths are in code points.
struct MatchedPair {
  std::string dec;
  std::string stb;
  std::string pos;
  double dec_freq = 0.0;
  double stb_freq = 0.0;
  std::size_t dec_len = 0;
  std::size_t stb_len = 0;

  double freq_ratio() const { return stb_freq / dec_freq; }
  long length_delta() const { return static_cast<long>(stb_len) - static_cast<long>(dec_len); }
};

// Pairs TSV: dec_word<TAB>stb_word<TAB>pos<TAB>dec_freq<TAB>stb_freq<TAB>dec_len<TAB>stb_len
void write_pairs(const std::filesystem::path& path, std::span<const MatchedPair> pairs,
                 const std::string& header_comment = {});
std::vector<MatchedPair> read_pairs(const std::filesystem::path& path);

}  // namespace lexdecline
