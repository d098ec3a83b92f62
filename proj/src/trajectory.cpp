#include "lexdecline/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lexdecline/error.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {
namespace {

// a must stay positive; slopes the data would push to <= 0 are clamped here.
constexpr double kMinSlope = 1e-12;
constexpr double kGridStep = 0.01;

// Prefix sums over 1-based t so the closed-form slope costs O(1) per b.
class DeclineObjective {
 public:
  explicit DeclineObjective(std::span<const double> y) : n_(y.size()) {
    s_y_.assign(n_ + 1, 0.0);
    s_ty_.assign(n_ + 1, 0.0);
    for (std::size_t k = 1; k <= n_; ++k) {
      const double v = y[k - 1];
      s_y_[k] = s_y_[k - 1] + v;
      s_ty_[k] = s_ty_[k - 1] + static_cast<double>(k) * v;
      sum_sq_ += v * v;
    }
  }

  // Optimal slope for this b (clamped) and the resulting MSE.
  std::pair<double, double> evaluate(double b) const {
    const auto k = static_cast<std::size_t>(std::min(std::floor(b), static_cast<double>(n_)));
    const double kk = static_cast<double>(k);
    const double sum_t = kk * (kk + 1.0) / 2.0;
    const double sum_t2 = kk * (kk + 1.0) * (2.0 * kk + 1.0) / 6.0;
    const double ry = b * s_y_[k] - s_ty_[k];
    const double rr = kk * b * b - 2.0 * b * sum_t + sum_t2;
    double a = rr > 0.0 ? ry / rr : 0.0;
    a = std::max(a, kMinSlope);
    const double sse = sum_sq_ - 2.0 * a * ry + a * a * rr;
    return {a, std::max(sse, 0.0) / static_cast<double>(n_)};
  }

  double mse(double b) const { return evaluate(b).second; }

 private:
  std::size_t n_;
  std::vector<double> s_y_, s_ty_;
  double sum_sq_ = 0.0;
};

// Golden-section minimum of f on [lo, hi].
template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

bool candidate_less(const Candidate& x, const Candidate& y) {
  if (x.metric != y.metric) return x.metric < y.metric;
  if (x.word != y.word) return x.word < y.word;
  return x.pos < y.pos;
}

bool passes_common_filters(const WordSeries& s, const FilterPolicy& policy) {
  if (policy.stoplist.count(s.word)) return false;
  if (s.length < policy.min_length) return false;
  if (s.initial_rel() < policy.min_initial_relfreq) return false;
  return std::any_of(s.rel.begin(), s.rel.end(), [](double v) { return v > 0.0; });
}

}  // namespace

double decline_curve(double a, double b, double t) { return t <= b ? a * (b - t) : 0.0; }

double decline_mse(std::span<const double> y, double a, double b) {
  double sse = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - decline_curve(a, b, static_cast<double>(i + 1));
    sse += r * r;
  }
  return sse / static_cast<double>(y.size());
}

PiecewiseFit fit_decline(std::span<const double> y) {
  if (y.empty()) throw ArgumentError("fit_decline: empty series");
  const DeclineObjective objective(y);
  const double n = static_cast<double>(y.size());
  const auto steps = static_cast<long>(std::llround(n / kGridStep));

  double best_b = kGridStep, best = objective.mse(best_b);
  for (long g = 2; g <= steps; ++g) {
    const double b = static_cast<double>(g) * kGridStep;
    const double m = objective.mse(b);
    if (m < best) {
      best = m;
      best_b = b;
    }
  }

  // Refine inside [b - step, b + step], split where the covered set changes.
  const double lo = std::max(best_b - kGridStep, 0.0), hi = std::min(best_b + kGridStep, n);
  std::vector<double> cuts{lo};
  for (double k = std::floor(lo) + 1.0; k < hi; k += 1.0) cuts.push_back(k);
  cuts.push_back(hi);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double left = std::max(cuts[i], 1e-12), right = cuts[i + 1];
    if (right <= left) continue;
    // Interval endpoints belong to neighbouring pieces; keep the search inside.
    const auto [b, m] = golden_min([&](double x) { return objective.mse(x); }, left, right);
    if (m < best) {
      best = m;
      best_b = b;
    }
    const double mr = objective.mse(right);
    if (mr < best) {
      best = mr;
      best_b = right;
    }
  }

  PiecewiseFit fit;
  fit.b = best_b;
  fit.a = objective.evaluate(best_b).first;
  fit.mse = decline_mse(y, fit.a, fit.b);
  return fit;
}

StabilityFit fit_stable(std::span<const double> y) {
  if (y.empty()) throw ArgumentError("fit_stable: empty series");
  const double n = static_cast<double>(y.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  return {mean, var / n};
}

std::vector<Candidate> rank_decliners(std::span<const WordSeries> words, const FilterPolicy& policy,
                                      unsigned threads) {
  std::vector<std::optional<Candidate>> slots(words.size());
  parallel_for(words.size(), threads, [&](std::size_t i) {
    const auto& s = words[i];
    if (!passes_common_filters(s, policy)) return;
    const auto y = normalize_series(s);
    const auto fit = fit_decline(y);
    if (fit.b < policy.min_crossing) return;
    slots[i] = Candidate{s.word, s.pos, fit.mse, fit.a, fit.b};
  });
  std::vector<Candidate> out;
  for (auto& c : slots)
    if (c) out.push_back(std::move(*c));
  std::sort(out.begin(), out.end(), candidate_less);
  return out;
}

std::vector<Candidate> rank_stable(std::span<const WordSeries> words, const FilterPolicy& policy,
                                   unsigned threads) {
  std::vector<std::optional<Candidate>> slots(words.size());
  parallel_for(words.size(), threads, [&](std::size_t i) {
    const auto& s = words[i];
    if (!passes_common_filters(s, policy)) return;
    const auto y = normalize_series(s);
    const auto fit = fit_stable(y);
    if (fit.mse > policy.max_stable_mse) return;
    slots[i] = Candidate{s.word, s.pos, fit.mse, fit.level, std::nullopt};
  });
  std::vector<Candidate> out;
  for (auto& c : slots)
    if (c) out.push_back(std::move(*c));
  std::sort(out.begin(), out.end(), candidate_less);
  return out;
}

void write_candidates(const std::filesystem::path& path, std::span<const Candidate> candidates,
                      const std::string& header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << header_comment;
  for (const auto& c : candidates) {
    out << c.word << '\t' << c.pos << '\t' << format_double(c.metric) << '\t' << format_double(c.a) << '\t'
        << (c.b ? format_double(*c.b) : std::string()) << '\n';
  }
}

std::vector<Candidate> read_candidates(const std::filesystem::path& path) {
  const std::string p = path.string();
  std::vector<Candidate> out;
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    auto f = split(line, '\t');
    if (f.size() != 5) throw ParseError(p, n, "expected 5 columns");
    Candidate c{std::string(f[0]), std::string(f[1]), parse_double(f[2], p, n), parse_double(f[3], p, n),
                std::nullopt};
    if (!f[4].empty()) c.b = parse_double(f[4], p, n);
    out.push_back(std::move(c));
  });
  return out;
}

}  // namespace lexdecline
