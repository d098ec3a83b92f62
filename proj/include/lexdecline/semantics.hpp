#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lexdecline {

// Word vectors stored column-wise, one column per word.
class EmbeddingSpace {
 public:
  explicit EmbeddingSpace(std::size_t dimension = 0) : dimension_(dimension) {}

  // Throws ArgumentError on a dimension mismatch, duplicate or zero vector.
  void add(const std::string& word, std::span<const double> vector);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  bool contains(const std::string& word) const { return index_.count(word) > 0; }
  std::optional<std::size_t> index_of(const std::string& word) const;
  const std::string& word(std::size_t i) const { return words_[i]; }
  Eigen::VectorXd vector(std::size_t i) const { return matrix().col(static_cast<Eigen::Index>(i)); }
  double norm(std::size_t i) const { return norms_[i]; }

  // dimension x size view over the stored vectors.
  Eigen::Map<const Eigen::MatrixXd> matrix() const {
    return {data_.data(), static_cast<Eigen::Index>(dimension_), static_cast<Eigen::Index>(words_.size())};
  }

 private:
  std::size_t dimension_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
  std::vector<double> norms_;
};

// Text format, `word v1 ... vd` per line. An optional `count dim` header
// line (word2vec text style) is accepted.
EmbeddingSpace load_embeddings(const std::filesystem::path& path);

// Mean cosine similarity to the k nearest other words (exact scan).
// Returns nullopt when the word has no vector.
std::optional<double> semantic_density(const std::string& word, const EmbeddingSpace& space, std::size_t k = 10);

struct Imputed {
  double value = 0.0;
  bool imputed = false;
};

// Fills missing entries with the mean of the present ones.
std::map<std::string, Imputed> impute_mean(const std::map<std::string, std::optional<double>>& values);

// ---------------------------------------------------------------------------
// Concreteness via Beta regression
// ---------------------------------------------------------------------------

struct BetaRegOptions {
  double clamp_epsilon = 1e-4;  // targets clamped to [eps, 1 - eps]
  double gradient_tolerance = 1e-6;
  std::size_t max_iterations = 500;
};

struct BetaRegModel {
  std::vector<double> weights;  // intercept first, then one per feature
  double phi = 1.0;             // precision
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  std::size_t clamped = 0;      // targets moved onto the clamp bounds
  double gradient_norm = 0.0;
  std::vector<double> ll_trace;
  std::vector<std::string> warnings;
};

// Maximum likelihood Beta regression with a logit mean link: damped Newton
// on (weights, log phi) with step halving. X excludes the intercept column.
BetaRegModel fit_beta_regression(const Eigen::MatrixXd& X, std::span<const double> y,
                                 const BetaRegOptions& options = {});

// Log-likelihood of the Beta regression at given parameters (y as given).
double beta_log_likelihood(const Eigen::MatrixXd& X, std::span<const double> y, std::span<const double> weights,
                           double phi);

double predict_concreteness(const BetaRegModel& model, std::span<const double> features);
std::optional<double> predict_concreteness(const std::string& word, const EmbeddingSpace& space,
                                           const BetaRegModel& model);

struct ConcretenessRatings {
  std::map<std::string, double> ratings;  // on [0, 1]
  bool rescaled = false;                  // input was min-max mapped onto [0, 1]
  double source_min = 0.0, source_max = 1.0;
};

// Ratings TSV: word<TAB>rating. Ratings outside [0, 1] trigger a min-max
// rescale of the whole file.
ConcretenessRatings load_concreteness(const std::filesystem::path& path);

// Pearson r between predictions and held-out ratings for words in the space.
double eval_concreteness(const BetaRegModel& model, const EmbeddingSpace& space,
                         const std::map<std::string, double>& heldout);

// ---------------------------------------------------------------------------
// Number of meanings
// ---------------------------------------------------------------------------

struct MeaningInterval {
  int first_year = 0;
  std::optional<int> last_year;  // nullopt = still in use
};

struct MeaningsDB {
  std::map<std::string, std::vector<MeaningInterval>> entries;
};

// Meanings TSV: word<TAB>first_year<TAB>last_year (empty last_year = open).
MeaningsDB load_meanings(const std::filesystem::path& path);

struct YearWindow {
  int start = 1800;
  int end = 1810;
};

// Number of meaning intervals overlapping the window; nullopt for words
// absent from the database.
std::optional<std::size_t> num_meanings(const std::string& word, const MeaningsDB& db, YearWindow window = {});

}  // namespace lexdecline
