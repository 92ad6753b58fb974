#include "turnsig/sigcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace turnsig::sig {

std::size_t level_length(std::size_t dim, std::size_t level) {
  std::size_t n = 1;
  for (std::size_t k = 0; k < level; ++k) n *= dim;
  return n;
}

std::size_t sig_length(std::size_t dim, std::size_t level) {
  std::size_t total = 0, n = 1;
  for (std::size_t k = 1; k <= level; ++k) {
    n *= dim;
    total += n;
  }
  return total;
}

Word word_of_index(std::size_t level, std::size_t flat_index, std::size_t dim) {
  if (level < 1) throw std::invalid_argument("word_of_index: level must be >= 1");
  if (dim < 1) throw std::invalid_argument("word_of_index: dim must be >= 1");
  if (flat_index >= level_length(dim, level))
    throw std::out_of_range("word_of_index: flat_index " + std::to_string(flat_index) +
                            " out of range for dim^level");
  Word word(level);
  for (std::size_t k = level; k-- > 0;) {
    word[k] = flat_index % dim;
    flat_index /= dim;
  }
  return word;
}

std::size_t index_of_word(const Word& word, std::size_t dim) {
  if (word.empty()) throw std::invalid_argument("index_of_word: empty word");
  std::size_t idx = 0;
  for (std::size_t letter : word) {
    if (letter >= dim) throw std::out_of_range("index_of_word: letter >= dim");
    idx = idx * dim + letter;
  }
  return idx;
}

namespace {

void check_point(std::span<const double> point, std::size_t dim) {
  if (point.size() != dim)
    throw std::invalid_argument("path point has dimension " + std::to_string(point.size()) +
                                ", expected " + std::to_string(dim));
  for (double v : point)
    if (!std::isfinite(v)) throw std::invalid_argument("path point has non-finite coordinate");
}

}  // namespace

Path::Path(std::size_t dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("Path: dim must be >= 1");
}

Path::Path(std::size_t dim, std::vector<std::vector<double>> points) : Path(dim) {
  for (const auto& p : points) check_point(p, dim);
  points_ = std::move(points);
}

void Path::push_back(std::vector<double> point) {
  check_point(point, dim_);
  points_.push_back(std::move(point));
}

Signature::Signature(std::size_t dim, std::size_t level) : dim_(dim), level_(level) {
  if (dim < 1) throw std::invalid_argument("Signature: dim must be >= 1");
  if (level < 1) throw std::invalid_argument("Signature: level must be >= 1");
  levels_.resize(level);
  for (std::size_t k = 1; k <= level; ++k) levels_[k - 1].assign(level_length(dim, k), 0.0);
}

std::span<const double> Signature::level_coeffs(std::size_t k) const {
  if (k < 1 || k > level_) throw std::out_of_range("Signature::level_coeffs: bad level");
  return levels_[k - 1];
}

double Signature::coeff(const Word& word) const {
  if (word.empty() || word.size() > level_)
    throw std::out_of_range("Signature::coeff: word length outside 1..level");
  return levels_[word.size() - 1][index_of_word(word, dim_)];
}

std::vector<double> Signature::flatten() const {
  std::vector<double> out;
  out.reserve(sig_length(dim_, level_));
  for (const auto& lv : levels_) out.insert(out.end(), lv.begin(), lv.end());
  return out;
}

Signature tensor_exp(std::span<const double> increment, std::size_t level) {
  if (increment.empty()) throw std::invalid_argument("tensor_exp: empty increment");
  for (double v : increment)
    if (!std::isfinite(v)) throw std::invalid_argument("tensor_exp: non-finite increment");
  const std::size_t d = increment.size();
  Signature s(d, level);
  for (std::size_t i = 0; i < d; ++i) s.levels_[0][i] = increment[i];
  for (std::size_t k = 2; k <= level; ++k) {
    const auto& prev = s.levels_[k - 2];
    auto& cur = s.levels_[k - 1];
    const double inv = 1.0 / static_cast<double>(k);
    std::size_t out = 0;
    for (double p : prev)
      for (std::size_t i = 0; i < d; ++i) cur[out++] = p * increment[i] * inv;
  }
  return s;
}

// In-place concatenation product: left becomes left * right. Levels are
// updated top-down so lower levels of `left` are still the old values when
// the cross terms need them.
void concat_in_place(Signature& left, const Signature& right) {
  const std::size_t L = left.level_;
  for (std::size_t n = L; n >= 1; --n) {
    auto& dest = left.levels_[n - 1];
    for (std::size_t k = 1; k < n; ++k) {
      const auto& a = left.levels_[k - 1];
      const auto& b = right.levels_[n - k - 1];
      std::size_t out = 0;
      for (double av : a)
        for (double bv : b) dest[out++] += av * bv;
    }
    const auto& b = right.levels_[n - 1];
    for (std::size_t i = 0; i < dest.size(); ++i) dest[i] += b[i];
  }
}

Signature chen_product(const Signature& a, const Signature& b) {
  if (a.dim() != b.dim() || a.level() != b.level())
    throw std::invalid_argument("chen_product: dimension or level mismatch");
  Signature out = a;
  concat_in_place(out, b);
  return out;
}

Signature path_signature(const Path& path, std::size_t level) {
  if (level < 1) throw std::invalid_argument("path_signature: level must be >= 1");
  const std::size_t d = path.dim();
  Signature acc = Signature::identity(d, level);
  if (path.size() < 2) return acc;
  std::vector<double> increment(d);
  for (std::size_t i = 1; i < path.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) increment[j] = path[i][j] - path[i - 1][j];
    Signature seg = tensor_exp(increment, level);
    if (i == 1)
      acc = std::move(seg);
    else
      concat_in_place(acc, seg);
  }
  return acc;
}

double levy_area(const Signature& s, std::size_t i, std::size_t j) {
  if (s.level() < 2) throw std::invalid_argument("levy_area: signature level must be >= 2");
  if (i == j) throw std::invalid_argument("levy_area: indices must differ");
  if (i >= s.dim() || j >= s.dim()) throw std::out_of_range("levy_area: index >= dim");
  auto lv2 = s.level_coeffs(2);
  return (lv2[i * s.dim() + j] - lv2[j * s.dim() + i]) / 2.0;
}

Path augment_basepoint(const Path& path) {
  std::vector<std::vector<double>> points;
  points.reserve(path.size() + 1);
  points.emplace_back(path.dim(), 0.0);
  points.insert(points.end(), path.points().begin(), path.points().end());
  return Path(path.dim(), std::move(points));
}

}  // namespace turnsig::sig
