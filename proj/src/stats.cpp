#include "lexdecline/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "lexdecline/error.hpp"
#include "lexdecline/rng.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double normal_two_sided(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

double student_two_sided(double t, double df) {
  if (std::isinf(t)) return 0.0;
  boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
}

std::string join_names(const std::vector<std::string>& names, const std::vector<std::size_t>& idx) {
  std::string s;
  for (auto i : idx) s += (s.empty() ? "" : ", ") + names[i];
  return s;
}

double log_sigmoid(double eta) { return eta >= 0 ? -std::log1p(std::exp(-eta)) : eta - std::log1p(std::exp(eta)); }

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

}  // namespace

std::vector<std::size_t> dependent_columns(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd scaled = X;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
    const double norm = scaled.col(j).norm();
    if (norm > 0.0) scaled.col(j) /= norm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(1e-10);
  std::vector<std::size_t> out;
  const auto rank = qr.rank();
  for (Eigen::Index k = rank; k < scaled.cols(); ++k)
    out.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()[k]));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

WilcoxonResult signed_rank_test(std::span<const double> diffs, WilcoxonMethod method) {
  std::vector<double> d;
  for (double v : diffs) {
    if (!std::isfinite(v)) throw DataError("signed-rank test: non-finite difference");
    if (v != 0.0) d.push_back(v);
  }
  WilcoxonResult res;
  res.n_effective = d.size();
  const std::size_t n = d.size();
  if (n == 0) {
    res.degenerate = true;
    res.p_two_sided = 1.0;
    res.method = method == WilcoxonMethod::Normal ? WilcoxonMethod::Normal : WilcoxonMethod::Exact;
    return res;
  }

  // Doubled average ranks keep tied ranks integral.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::fabs(d[a]) < std::fabs(d[b]); });
  std::vector<std::uint64_t> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(d[order[j + 1]]) == std::fabs(d[order[i]])) ++j;
    const std::uint64_t r2 = (i + 1) + (j + 1);
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = r2;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  std::uint64_t w2 = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) w2 += rank2[i];
  res.w_plus = static_cast<double>(w2) / 2.0;

  const bool exact = method == WilcoxonMethod::Exact || (method == WilcoxonMethod::Auto && n <= kWilcoxonExactMax);
  if (exact) {
    if (n > 40) throw ArgumentError("exact signed-rank distribution limited to 40 observations");
    res.method = WilcoxonMethod::Exact;
    const std::uint64_t total2 = static_cast<std::uint64_t>(n) * (n + 1);  // sum of doubled ranks
    std::vector<std::uint64_t> ways(total2 + 1, 0);
    ways[0] = 1;
    std::uint64_t reach = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint64_t s = reach + 1; s-- > 0;)
        if (ways[s]) ways[s + rank2[i]] += ways[s];
      reach += rank2[i];
    }
    const std::int64_t mean2 = static_cast<std::int64_t>(total2 / 2);
    const std::int64_t dev = std::llabs(static_cast<std::int64_t>(w2) - mean2);
    std::uint64_t tail = 0;
    for (std::uint64_t s = 0; s <= total2; ++s)
      if (std::llabs(static_cast<std::int64_t>(s) - mean2) >= dev) tail += ways[s];
    res.p_two_sided = std::ldexp(static_cast<double>(tail), -static_cast<int>(n));
  } else {
    res.method = WilcoxonMethod::Normal;
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = std::max(0.0, std::fabs(res.w_plus - mean) - 0.5) / std::sqrt(var);
    res.p_two_sided = std::clamp(normal_two_sided(z), std::numeric_limits<double>::min(), 1.0);
  }
  return res;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y, WilcoxonMethod method) {
  if (x.size() != y.size()) throw ArgumentError("paired samples differ in length");
  if (x.empty()) throw DataError("signed-rank test on an empty sample");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return signed_rank_test(d, method);
}

WilcoxonResult one_sample_wilcoxon(std::span<const double> x, double mu0, WilcoxonMethod method) {
  if (x.empty()) throw DataError("signed-rank test on an empty sample");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - mu0;
  return signed_rank_test(d, method);
}

// ---------------------------------------------------------------------------

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw DataError("summary of an empty sample");
  Summary s;
  s.n = values.size();
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  auto quantile = [&](double q) {
    const double h = q * (n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.min = v.front();
  s.max = v.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("pearson: length mismatch");
  if (x.size() < 2) throw DataError("pearson: need at least 2 observations");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("pearson: correlation undefined for a constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport pearson_matrix(const Eigen::MatrixXd& data, std::vector<std::string> names, double alpha) {
  const auto rows = data.rows(), k = data.cols();
  if (rows < 3) throw DataError("correlation matrix needs at least 3 rows");
  if (static_cast<Eigen::Index>(names.size()) != k) throw ArgumentError("one name per column required");
  CorrelationReport rep;
  rep.names = std::move(names);
  rep.alpha = alpha;
  rep.r = Eigen::MatrixXd::Constant(k, k, kNaN);
  rep.p = Eigen::MatrixXd::Constant(k, k, kNaN);
  rep.significant.assign(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(k), false));
  rep.constant.assign(static_cast<std::size_t>(k), false);
  for (Eigen::Index j = 0; j < k; ++j)
    rep.constant[static_cast<std::size_t>(j)] = (data.col(j).array() == data(0, j)).all();
  rep.tests = static_cast<std::size_t>(k * (k - 1) / 2);
  const double threshold = rep.tests ? alpha / static_cast<double>(rep.tests) : alpha;
  const double df = static_cast<double>(rows - 2);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a; b < k; ++b) {
      if (rep.constant[static_cast<std::size_t>(a)] || rep.constant[static_cast<std::size_t>(b)]) continue;
      const Eigen::VectorXd ca = data.col(a), cb = data.col(b);
      const double r = a == b ? 1.0 : pearson({ca.data(), static_cast<std::size_t>(rows)}, {cb.data(), static_cast<std::size_t>(rows)});
      double p = 0.0;
      if (std::fabs(r) < 1.0) p = student_two_sided(r * std::sqrt(df / (1.0 - r * r)), df);
      rep.r(a, b) = rep.r(b, a) = r;
      rep.p(a, b) = rep.p(b, a) = p;
      if (a != b) {
        const bool sig = p < threshold;
        rep.significant[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = sig;
        rep.significant[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = sig;
      }
    }
  }
  return rep;
}

std::vector<double> minmax_scale(std::span<const double> values) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo, max = *hi;
  if (!(max > min)) throw DataError("cannot min-max scale a constant feature");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - min) / (max - min);
  return out;
}

// ---------------------------------------------------------------------------

RegressionResult fit_logistic(const Eigen::MatrixXd& X, std::span<const int> labels, std::vector<std::string> names,
                              const LogisticOptions& options) {
  const auto n = X.rows();
  const auto k = X.cols();
  if (static_cast<std::size_t>(n) != labels.size()) throw ArgumentError("logistic: label count mismatch");
  if (static_cast<Eigen::Index>(names.size()) != k) throw ArgumentError("logistic: one name per predictor required");
  if (n < k + 2) throw DataError("logistic: need at least predictors + 2 observations");
  std::size_t ones = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw ArgumentError("logistic: labels must be 0 or 1");
    ones += static_cast<std::size_t>(l);
  }
  if (ones == 0 || ones == static_cast<std::size_t>(n)) throw DataError("logistic: both labels must be present");

  RegressionResult res;
  res.names.push_back("const");
  for (auto& nm : names) res.names.push_back(std::move(nm));

  // Identically-zero predictors carry no information; they are pinned at 0.
  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (X.col(j).isZero(0.0))
      res.warnings.push_back("predictor '" + res.names[static_cast<std::size_t>(j + 1)] + "' is identically zero; coefficient fixed at 0");
    else
      active.push_back(j);
  }
  const auto p = static_cast<Eigen::Index>(active.size()) + 1;
  Eigen::MatrixXd D(n, p);
  D.col(0).setOnes();
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(active.size()); ++j) D.col(j + 1) = X.col(active[static_cast<std::size_t>(j)]);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)];

  if (auto dep = dependent_columns(D); !dep.empty()) {
    std::vector<std::string> offending;
    for (auto c : dep) offending.push_back(c == 0 ? "const" : res.names[static_cast<std::size_t>(active[c - 1] + 1)]);
    std::string list;
    for (auto& o : offending) list += (list.empty() ? "" : ", ") + o;
    throw CollinearityError("logistic: singular information matrix; collinear predictors: " + list, offending);
  }

  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(p, options.ridge);
  penalty(0) = 0.0;

  auto loglik = [&](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = D * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) ll += y(i) > 0.5 ? log_sigmoid(eta(i)) : log_sigmoid(-eta(i));
    return ll;
  };
  auto objective = [&](const Eigen::VectorXd& beta) {
    return loglik(beta) - 0.5 * (penalty.array() * beta.array().square()).sum();
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double obj = objective(beta);
  bool converged = false;
  Eigen::MatrixXd H(p, p);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd eta = D * beta;
    Eigen::VectorXd mu(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = sigmoid(eta(i));
      w(i) = mu(i) * (1.0 - mu(i));
    }
    const Eigen::VectorXd grad = D.transpose() * (y - mu) - penalty.cwiseProduct(beta);
    H = D.transpose() * w.asDiagonal() * D;
    H.diagonal() += penalty;
    const Eigen::VectorXd step = H.ldlt().solve(grad);

    double t = 1.0;
    Eigen::VectorXd next = beta + step;
    double next_obj = objective(next);
    for (int halving = 0; halving < 40 && !(next_obj >= obj); ++halving) {
      t *= 0.5;
      next = beta + t * step;
      next_obj = objective(next);
    }
    if (!(next_obj >= obj)) {
      next = beta;
      next_obj = obj;
    }
    const double change = next_obj - obj;
    beta = next;
    obj = next_obj;
    res.ll_trace.push_back(obj);
    res.iterations = iter + 1;
    if (options.ridge == 0.0 && beta.cwiseAbs().maxCoeff() > options.separation_limit)
      throw SeparationError("logistic: coefficients diverge (|coef| > " + format_double(options.separation_limit) +
                            "); the labels are (quasi-)completely separated");
    if (change < options.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) res.warnings.push_back("logistic: iteration limit reached before convergence");

  // Points fitted with certainty under bounded coefficients mean the MLE lies at infinity.
  const Eigen::VectorXd eta = D * beta;
  Eigen::VectorXd w(n);
  double min_w = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = sigmoid(eta(i));
    w(i) = m * (1.0 - m);
    min_w = std::min(min_w, w(i));
  }
  if (options.ridge == 0.0 && min_w < 1e-9)
    throw SeparationError("logistic: some observations are fitted with probability 0 or 1; the labels are separated");

  H = D.transpose() * w.asDiagonal() * D;
  H.diagonal() += penalty;
  const Eigen::MatrixXd cov = H.ldlt().solve(Eigen::MatrixXd::Identity(p, p));

  res.coef.assign(static_cast<std::size_t>(k + 1), 0.0);
  res.se.assign(static_cast<std::size_t>(k + 1), std::numeric_limits<double>::infinity());
  res.stat.assign(static_cast<std::size_t>(k + 1), 0.0);
  res.p.assign(static_cast<std::size_t>(k + 1), 1.0);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto slot = static_cast<std::size_t>(j == 0 ? 0 : active[static_cast<std::size_t>(j - 1)] + 1);
    res.coef[slot] = beta(j);
    res.se[slot] = std::sqrt(cov(j, j));
    res.stat[slot] = beta(j) / res.se[slot];
    res.p[slot] = normal_two_sided(res.stat[slot]);
  }

  res.ll_model = loglik(beta);
  const double base = static_cast<double>(ones) / static_cast<double>(n);
  res.ll_null = static_cast<double>(ones) * std::log(base) + static_cast<double>(n - static_cast<Eigen::Index>(ones)) * std::log1p(-base);
  res.pseudo_r2 = 1.0 - res.ll_model / res.ll_null;
  return res;
}

double logistic_predict(std::span<const double> coef, std::span<const double> x) {
  if (coef.size() != x.size() + 1) throw ArgumentError("logistic_predict: dimension mismatch");
  double eta = coef[0];
  for (std::size_t j = 0; j < x.size(); ++j) eta += coef[j + 1] * x[j];
  return sigmoid(eta);
}

RegressionResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> names) {
  const auto n = X.rows(), k = X.cols();
  if (y.size() != n) throw ArgumentError("ols: response length mismatch");
  if (static_cast<Eigen::Index>(names.size()) != k) throw ArgumentError("ols: one name per column required");
  if (n <= k) throw DataError("ols: need more rows than columns");
  if (auto dep = dependent_columns(X); !dep.empty()) {
    std::vector<std::string> offending;
    for (auto c : dep) offending.push_back(names[c]);
    throw CollinearityError("ols: rank-deficient design; collinear columns: " + join_names(names, dep), offending);
  }

  RegressionResult res;
  res.names = std::move(names);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - X * beta;
  const double rss = resid.squaredNorm();
  const double df = static_cast<double>(n - k);
  const double sigma2 = rss / df;
  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));

  const double mean_y = y.mean();
  const double tss = (y.array() - mean_y).square().sum();
  res.pseudo_r2 = tss > 0.0 ? 1.0 - rss / tss : (rss <= 0.0 ? 1.0 : 0.0);
  const double nn = static_cast<double>(n);
  auto gauss_ll = [nn](double ss) {
    if (ss <= 0.0) return std::numeric_limits<double>::infinity();
    return -0.5 * nn * (std::log(2.0 * M_PI * ss / nn) + 1.0);
  };
  res.ll_model = gauss_ll(rss);
  res.ll_null = gauss_ll(tss);

  for (Eigen::Index j = 0; j < k; ++j) {
    const double b = beta(j);
    const double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j, j)));
    res.coef.push_back(b);
    res.se.push_back(se);
    if (se > 0.0) {
      res.stat.push_back(b / se);
      res.p.push_back(student_two_sided(b / se, df));
    } else {
      res.stat.push_back(b == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), b));
      res.p.push_back(b == 0.0 ? 1.0 : 0.0);
    }
  }
  res.iterations = 1;
  return res;
}

// ---------------------------------------------------------------------------

std::vector<int> assign_pair_labels(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  std::vector<int> labels(n, 0);
  const std::size_t ones = (n + 1) / 2;
  for (std::size_t i = 0; i < ones; ++i) labels[perm[i]] = 1;
  return labels;
}

namespace {
const std::vector<double>& lookup(const FactorLookup& factors, const std::string& word) {
  auto it = factors.find(word);
  if (it == factors.end()) throw DataError("no factor vector for '" + word + "'");
  return it->second;
}
}  // namespace

std::vector<PairItem> build_pair_items(std::span<const MatchedPair> pairs, const FactorLookup& factors,
                                       std::uint64_t seed) {
  const auto labels = assign_pair_labels(pairs.size(), seed);
  std::vector<PairItem> items;
  items.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& dec = lookup(factors, pairs[i].dec);
    const auto& stb = lookup(factors, pairs[i].stb);
    if (dec.size() != stb.size()) throw DataError("factor vectors differ in length");
    PairItem item;
    item.label = labels[i];
    item.diffs.resize(dec.size());
    for (std::size_t j = 0; j < dec.size(); ++j) item.diffs[j] = item.label == 1 ? dec[j] - stb[j] : stb[j] - dec[j];
    items.push_back(std::move(item));
  }
  return items;
}

RegressionResult fit_logistic(std::span<const PairItem> items, std::vector<std::string> names,
                              const LogisticOptions& options) {
  const auto k = static_cast<Eigen::Index>(names.size());
  Eigen::MatrixXd X(static_cast<Eigen::Index>(items.size()), k);
  std::vector<int> labels;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (static_cast<Eigen::Index>(items[i].diffs.size()) != k) throw ArgumentError("pair item width mismatch");
    for (Eigen::Index j = 0; j < k; ++j) X(static_cast<Eigen::Index>(i), j) = items[i].diffs[static_cast<std::size_t>(j)];
    labels.push_back(items[i].label);
  }
  return fit_logistic(X, labels, std::move(names), options);
}

double loo_accuracy(const Eigen::MatrixXd& X, std::span<const int> labels, double ridge, unsigned threads) {
  const auto n = X.rows(), k = X.cols();
  if (static_cast<std::size_t>(n) != labels.size()) throw ArgumentError("loo: label count mismatch");
  if (n < 10) throw DataError("leave-one-out classification needs at least 10 items");
  std::vector<std::string> names(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) names[static_cast<std::size_t>(j)] = "x" + std::to_string(j);
  LogisticOptions opts;
  opts.ridge = ridge;

  std::vector<int> correct(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t fold) {
    const auto held = static_cast<Eigen::Index>(fold);
    Eigen::MatrixXd train(n - 1, k);
    std::vector<int> train_labels;
    for (Eigen::Index i = 0, r = 0; i < n; ++i) {
      if (i == held) continue;
      train.row(r++) = X.row(i);
      train_labels.push_back(labels[static_cast<std::size_t>(i)]);
    }
    const Eigen::RowVectorXd mean = train.colwise().mean();
    Eigen::RowVectorXd sd = ((train.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(n - 1)).sqrt();
    for (Eigen::Index j = 0; j < k; ++j)
      if (sd(j) == 0.0) sd(j) = 1.0;
    const Eigen::MatrixXd z = (train.rowwise() - mean).array().rowwise() / sd.array();
    RegressionResult fit;
    try {
      fit = fit_logistic(z, train_labels, names, opts);
    } catch (const Error& e) {
      throw Error("leave-one-out fold " + std::to_string(fold) + ": " + e.what());
    }
    const Eigen::RowVectorXd test = (X.row(held) - mean).array() / sd.array();
    std::vector<double> x(test.data(), test.data() + k);
    const int predicted = logistic_predict(fit.coef, x) >= 0.5 ? 1 : 0;
    correct[fold] = predicted == labels[fold] ? 1 : 0;
  });
  return static_cast<double>(std::accumulate(correct.begin(), correct.end(), 0)) / static_cast<double>(n);
}

double loo_classify(std::span<const MatchedPair> pairs, const FactorLookup& factors, std::uint64_t seed, double ridge,
                    unsigned threads) {
  if (pairs.size() < 10) throw DataError("leave-one-out classification needs at least 10 pairs");
  const auto labels = assign_pair_labels(pairs.size(), seed);
  const auto width = lookup(factors, pairs.front().dec).size();
  Eigen::MatrixXd X(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(2 * width));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& dec = lookup(factors, pairs[i].dec);
    const auto& stb = lookup(factors, pairs[i].stb);
    if (dec.size() != width || stb.size() != width) throw DataError("factor vectors differ in length");
    const auto& first = labels[i] == 1 ? dec : stb;
    const auto& second = labels[i] == 1 ? stb : dec;
    for (std::size_t j = 0; j < width; ++j) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = first[j];
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(width + j)) = second[j];
    }
  }
  return loo_accuracy(X, labels, ridge, threads);
}

}  // namespace lexdecline
