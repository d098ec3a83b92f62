#include "lexdecline/semantics.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <limits>

#include "lexdecline/error.hpp"
#include "lexdecline/stats.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {

void EmbeddingSpace::add(const std::string& word, std::span<const double> vector) {
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_ || dimension_ == 0)
    throw ArgumentError("embedding for '" + word + "' has dimension " + std::to_string(vector.size()) + ", expected " +
                        std::to_string(dimension_));
  if (index_.count(word)) throw ArgumentError("duplicate embedding for '" + word + "'");
  double sq = 0.0;
  for (double v : vector) sq += v * v;
  if (!(sq > 0.0) || !std::isfinite(sq)) throw ArgumentError("embedding for '" + word + "' is zero or non-finite");
  index_.emplace(word, words_.size());
  words_.push_back(word);
  data_.insert(data_.end(), vector.begin(), vector.end());
  norms_.push_back(std::sqrt(sq));
}

std::optional<std::size_t> EmbeddingSpace::index_of(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingSpace load_embeddings(const std::filesystem::path& path) {
  const std::string p = path.string();
  EmbeddingSpace space;
  std::vector<double> buf;
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    auto f = split_ws(line);
    if (f.empty()) return;
    if (n == 1 && f.size() == 2 && f[0].find_first_not_of("0123456789") == std::string_view::npos) return;
    if (f.size() < 2) throw ParseError(p, n, "embedding line needs a word and at least one value");
    buf.clear();
    for (std::size_t i = 1; i < f.size(); ++i) buf.push_back(parse_double(f[i], p, n));
    try {
      space.add(std::string(f[0]), buf);
    } catch (const ArgumentError& e) {
      throw ParseError(p, n, e.what());
    }
  });
  return space;
}

std::optional<double> semantic_density(const std::string& word, const EmbeddingSpace& space, std::size_t k) {
  const auto self = space.index_of(word);
  if (!self) return std::nullopt;
  if (k == 0 || space.size() < k + 1)
    throw ArgumentError("semantic density needs at least k + 1 = " + std::to_string(k + 1) + " words");
  if (!(space.norm(*self) > 0.0)) throw ArgumentError("zero vector for '" + word + "'");
  const auto M = space.matrix();
  const Eigen::VectorXd v = M.col(static_cast<Eigen::Index>(*self));
  const Eigen::VectorXd dots = M.transpose() * v;
  std::vector<double> cos;
  cos.reserve(space.size() - 1);
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i == *self) continue;
    cos.push_back(dots(static_cast<Eigen::Index>(i)) / (space.norm(i) * space.norm(*self)));
  }
  std::partial_sort(cos.begin(), cos.begin() + static_cast<std::ptrdiff_t>(k), cos.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += cos[i];
  return sum / static_cast<double>(k);
}

std::map<std::string, Imputed> impute_mean(const std::map<std::string, std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t present = 0;
  for (const auto& [w, v] : values)
    if (v) {
      sum += *v;
      ++present;
    }
  if (present == 0) throw DataError("mean imputation needs at least one observed value");
  const double mean = sum / static_cast<double>(present);
  std::map<std::string, Imputed> out;
  for (const auto& [w, v] : values) out.emplace(w, v ? Imputed{*v, false} : Imputed{mean, true});
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kDegeneratePhi = 1e8;

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

struct BetaTerms {
  double ll = 0.0;
  Eigen::VectorXd grad;  // over (weights, log phi)
  Eigen::MatrixXd hess;
};

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd D(X.rows(), X.cols() + 1);
  D.col(0).setOnes();
  D.rightCols(X.cols()) = X;
  return D;
}

double loglik_only(const Eigen::MatrixXd& D, std::span<const double> y, const Eigen::VectorXd& beta, double phi) {
  const Eigen::VectorXd eta = D * beta;
  double ll = 0.0;
  const double lg_phi = std::lgamma(phi);
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    const double mu = sigmoid(eta(i));
    const double a = mu * phi, b = (1.0 - mu) * phi;
    const double yi = y[static_cast<std::size_t>(i)];
    ll += lg_phi - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(yi) + (b - 1.0) * std::log1p(-yi);
  }
  return ll;
}

BetaTerms beta_terms(const Eigen::MatrixXd& D, std::span<const double> y, const Eigen::VectorXd& beta, double phi) {
  using boost::math::digamma;
  using boost::math::trigamma;
  const auto n = D.rows(), p = D.cols();
  BetaTerms t;
  t.grad = Eigen::VectorXd::Zero(p + 1);
  t.hess = Eigen::MatrixXd::Zero(p + 1, p + 1);
  const Eigen::VectorXd eta = D * beta;
  const double lg_phi = std::lgamma(phi), psi_phi = digamma(phi), tri_phi = trigamma(phi);
  Eigen::VectorXd w_ee(n), w_es(n);
  double g_s = 0.0, h_ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = sigmoid(eta(i));
    const double g = mu * (1.0 - mu);
    const double a = mu * phi, b = (1.0 - mu) * phi;
    const double yi = y[static_cast<std::size_t>(i)];
    const double ly = std::log(yi), l1y = std::log1p(-yi);
    t.ll += lg_phi - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * ly + (b - 1.0) * l1y;
    const double ystar = ly - l1y;
    const double psi_a = digamma(a), psi_b = digamma(b);
    const double tri_a = trigamma(a), tri_b = trigamma(b);
    const double resid = ystar - (psi_a - psi_b);

    const double d_eta = phi * resid * g;
    const double d_phi = mu * resid + l1y - psi_b + psi_phi;
    const double d_eta2 = -phi * phi * (tri_a + tri_b) * g * g + phi * resid * g * (1.0 - 2.0 * mu);
    const double d_eta_phi = g * (resid - phi * (mu * tri_a - (1.0 - mu) * tri_b));
    const double d_phi2 = tri_phi - mu * mu * tri_a - (1.0 - mu) * (1.0 - mu) * tri_b;

    t.grad.head(p) += d_eta * D.row(i).transpose();
    w_ee(i) = d_eta2;
    w_es(i) = phi * d_eta_phi;
    g_s += phi * d_phi;
    h_ss += phi * d_phi + phi * phi * d_phi2;
  }
  t.grad(p) = g_s;
  t.hess.topLeftCorner(p, p) = D.transpose() * w_ee.asDiagonal() * D;
  t.hess.block(0, p, p, 1) = D.transpose() * w_es;
  t.hess.block(p, 0, 1, p) = t.hess.block(0, p, p, 1).transpose();
  t.hess(p, p) = h_ss;
  return t;
}

}  // namespace

double beta_log_likelihood(const Eigen::MatrixXd& X, std::span<const double> y, std::span<const double> weights,
                           double phi) {
  const Eigen::MatrixXd D = with_intercept(X);
  if (static_cast<Eigen::Index>(weights.size()) != D.cols()) throw ArgumentError("beta regression: weight count mismatch");
  Eigen::VectorXd beta(D.cols());
  for (Eigen::Index j = 0; j < D.cols(); ++j) beta(j) = weights[static_cast<std::size_t>(j)];
  return loglik_only(D, y, beta, phi);
}

BetaRegModel fit_beta_regression(const Eigen::MatrixXd& X, std::span<const double> y_in, const BetaRegOptions& options) {
  const auto n = X.rows(), d = X.cols();
  if (static_cast<std::size_t>(n) != y_in.size()) throw ArgumentError("beta regression: target count mismatch");
  if (n < d + 2) throw DataError("beta regression needs at least dimension + 2 samples");

  BetaRegModel model;
  std::vector<double> y(y_in.begin(), y_in.end());
  const double lo = options.clamp_epsilon, hi = 1.0 - options.clamp_epsilon;
  for (auto& v : y) {
    if (!(v >= 0.0 && v <= 1.0)) throw DataError("beta regression targets must lie in [0, 1]");
    if (v < lo || v > hi) {
      v = std::clamp(v, lo, hi);
      ++model.clamped;
    }
  }
  if (model.clamped) model.warnings.push_back(std::to_string(model.clamped) + " targets clamped into [eps, 1 - eps]");

  const Eigen::MatrixXd D = with_intercept(X);
  const auto p = D.cols();

  if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); })) {
    // Equal targets: the likelihood grows without bound in phi.
    if (d > 0) model.warnings.push_back("degenerate targets (all equal); fitted intercept only");
    model.warnings.push_back("degenerate targets; precision fixed at " + format_double(kDegeneratePhi));
    model.weights.assign(static_cast<std::size_t>(p), 0.0);
    model.weights[0] = std::log(y.front() / (1.0 - y.front()));
    model.phi = kDegeneratePhi;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    beta(0) = model.weights[0];
    model.log_likelihood = loglik_only(D, y, beta, model.phi);
    model.ll_trace.push_back(model.log_likelihood);
    return model;
  }

  // Start: least squares on the logit scale, precision from the residual spread.
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = std::log(y[static_cast<std::size_t>(i)] / (1.0 - y[static_cast<std::size_t>(i)]));
  Eigen::VectorXd beta = D.colPivHouseholderQr().solve(z);
  const Eigen::VectorXd eta0 = D * beta;
  const double dof = static_cast<double>(std::max<Eigen::Index>(n - p, 1));
  const double sigma2 = std::max((z - eta0).squaredNorm() / dof, 1e-12);
  double phi0 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = sigmoid(eta0(i));
    phi0 += 1.0 / (sigma2 * mu * (1.0 - mu)) - 1.0;
  }
  phi0 = std::clamp(phi0 / static_cast<double>(n), 1e-2, 1e6);
  double log_phi = std::log(phi0);

  BetaTerms terms = beta_terms(D, y, beta, std::exp(log_phi));
  model.ll_trace.push_back(terms.ll);
  bool converged = false;
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    model.gradient_norm = terms.grad.cwiseAbs().maxCoeff();
    if (model.gradient_norm < options.gradient_tolerance) {
      converged = true;
      break;
    }
    // Newton direction on -H, shifted toward gradient ascent until positive definite.
    Eigen::MatrixXd neg_h = -terms.hess;
    const double scale = std::max(1.0, neg_h.diagonal().cwiseAbs().maxCoeff());
    double lambda = 0.0;
    Eigen::VectorXd step;
    for (int tries = 0; tries < 60; ++tries) {
      Eigen::MatrixXd m = neg_h;
      m.diagonal().array() += lambda;
      Eigen::LLT<Eigen::MatrixXd> llt(m);
      if (llt.info() == Eigen::Success) {
        step = llt.solve(terms.grad);
        if (step.allFinite()) break;
      }
      lambda = lambda == 0.0 ? 1e-8 * scale : lambda * 10.0;
    }
    if (step.size() == 0) step = terms.grad / scale;

    // Near the optimum the likelihood gain of a Newton step drops below the
    // rounding noise of the summed likelihood; tolerate changes of that size.
    const double noise = 1e-12 * static_cast<double>(n) * (1.0 + std::fabs(terms.ll) / static_cast<double>(n));
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Eigen::VectorXd b_next = beta + t * step.head(p);
      const double s_next = log_phi + t * step(p);
      if (!b_next.allFinite() || !std::isfinite(s_next) || s_next > 40.0) continue;
      const double ll = loglik_only(D, y, b_next, std::exp(s_next));
      if (std::isfinite(ll) && ll >= terms.ll - noise) {
        beta = b_next;
        log_phi = s_next;
        accepted = true;
        break;
      }
    }
    model.iterations = iter + 1;
    if (!accepted) break;
    terms = beta_terms(D, y, beta, std::exp(log_phi));
    model.ll_trace.push_back(terms.ll);
  }
  model.gradient_norm = terms.grad.cwiseAbs().maxCoeff();
  if (!converged && model.gradient_norm >= options.gradient_tolerance)
    throw ConvergenceError("beta regression did not converge after " + std::to_string(model.iterations) +
                               " iterations; gradient max-norm " + format_double(model.gradient_norm),
                           model.gradient_norm);

  model.weights.assign(beta.data(), beta.data() + p);
  model.phi = std::exp(log_phi);
  model.log_likelihood = terms.ll;
  return model;
}

double predict_concreteness(const BetaRegModel& model, std::span<const double> features) {
  if (features.size() + 1 != model.weights.size()) throw ArgumentError("concreteness model: feature count mismatch");
  double eta = model.weights[0];
  for (std::size_t j = 0; j < features.size(); ++j) eta += model.weights[j + 1] * features[j];
  // Saturated links would round to exactly 0 or 1; keep the open interval.
  return std::clamp(sigmoid(eta), std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
}

std::optional<double> predict_concreteness(const std::string& word, const EmbeddingSpace& space,
                                           const BetaRegModel& model) {
  const auto i = space.index_of(word);
  if (!i) return std::nullopt;
  const Eigen::VectorXd v = space.vector(*i);
  return predict_concreteness(model, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

ConcretenessRatings load_concreteness(const std::filesystem::path& path) {
  const std::string p = path.string();
  ConcretenessRatings out;
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    auto f = split(line, '\t');
    if (f.size() != 2) throw ParseError(p, n, "expected word<TAB>rating");
    const double r = parse_double(f[1], p, n);
    if (!std::isfinite(r)) throw ParseError(p, n, "non-finite rating");
    out.ratings[std::string(f[0])] = r;
  });
  if (out.ratings.empty()) return out;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& [w, r] : out.ratings) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  out.source_min = lo;
  out.source_max = hi;
  if (lo < 0.0 || hi > 1.0) {
    if (!(hi > lo)) throw DataError(p + ": constant ratings outside [0, 1]");
    out.rescaled = true;
    for (auto& [w, r] : out.ratings) r = (r - lo) / (hi - lo);
  }
  return out;
}

double eval_concreteness(const BetaRegModel& model, const EmbeddingSpace& space,
                         const std::map<std::string, double>& heldout) {
  std::vector<double> predicted, actual;
  for (const auto& [w, r] : heldout) {
    if (auto v = predict_concreteness(w, space, model)) {
      predicted.push_back(*v);
      actual.push_back(r);
    }
  }
  if (predicted.size() < 3) throw DataError("concreteness evaluation needs at least 3 held-out words in the space");
  return pearson(predicted, actual);
}

// ---------------------------------------------------------------------------

MeaningsDB load_meanings(const std::filesystem::path& path) {
  const std::string p = path.string();
  MeaningsDB db;
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    auto f = split(line, '\t');
    if (f.size() != 3) throw ParseError(p, n, "expected word<TAB>first_year<TAB>last_year");
    MeaningInterval m;
    m.first_year = static_cast<int>(parse_int(f[1], p, n));
    if (!trim(f[2]).empty()) {
      m.last_year = static_cast<int>(parse_int(f[2], p, n));
      if (*m.last_year < m.first_year) throw ParseError(p, n, "meaning ends before it starts");
    }
    db.entries[std::string(f[0])].push_back(m);
  });
  return db;
}

std::optional<std::size_t> num_meanings(const std::string& word, const MeaningsDB& db, YearWindow window) {
  if (window.start > window.end) throw ArgumentError("meaning window starts after it ends");
  auto it = db.entries.find(word);
  if (it == db.entries.end()) return std::nullopt;
  return static_cast<std::size_t>(std::count_if(it->second.begin(), it->second.end(), [&](const MeaningInterval& m) {
    return m.first_year <= window.end && (!m.last_year || *m.last_year >= window.start);
  }));
}

}  // namespace lexdecline
