#include "lexdecline/pairs.hpp"

#include <fstream>

#include "lexdecline/error.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {

void write_pairs(const std::filesystem::path& path, std::span<const MatchedPair> pairs,
                 const std::string& header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << header_comment;
  for (const auto& p : pairs) {
    out << p.dec << '\t' << p.stb << '\t' << p.pos << '\t' << format_double(p.dec_freq) << '\t'
        << format_double(p.stb_freq) << '\t' << p.dec_len << '\t' << p.stb_len << '\n';
  }
}

std::vector<MatchedPair> read_pairs(const std::filesystem::path& path) {
  const std::string p = path.string();
  std::vector<MatchedPair> out;
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    auto f = split(line, '\t');
    if (f.size() != 7) throw ParseError(p, n, "expected 7 columns");
    MatchedPair m;
    m.dec = std::string(f[0]);
    m.stb = std::string(f[1]);
    m.pos = std::string(f[2]);
    m.dec_freq = parse_double(f[3], p, n);
    m.stb_freq = parse_double(f[4], p, n);
    const auto dl = parse_int(f[5], p, n), sl = parse_int(f[6], p, n);
    if (dl < 0 || sl < 0) throw ParseError(p, n, "negative length");
    m.dec_len = static_cast<std::size_t>(dl);
    m.stb_len = static_cast<std::size_t>(sl);
    out.push_back(std::move(m));
  });
  return out;
}

}  // namespace lexdecline
