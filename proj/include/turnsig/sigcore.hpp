#pragma once
// Truncated path-signature tensor algebra for piecewise-linear paths in
// d dimensions. Signatures are stored as one flat row-major coefficient
// array per level 1..L; the level-0 coefficient is implicitly 1 and never
// stored. All operations are pure and the value types are immutable once
// built, so they are safe to share across threads.

#include <cstddef>
#include <span>
#include <vector>

namespace turnsig::sig {

/// dim^level, the number of coefficients stored at one level.
std::size_t level_length(std::size_t dim, std::size_t level);

/// dim + dim^2 + ... + dim^level, the flattened signature length.
std::size_t sig_length(std::size_t dim, std::size_t level);

/// A signature coefficient index as a tuple of feature letters in [0, dim).
using Word = std::vector<std::size_t>;

/// Row-major decomposition of flat_index into `level` base-dim letters.
/// Inverse of index_of_word. Throws std::out_of_range on a bad index.
Word word_of_index(std::size_t level, std::size_t flat_index, std::size_t dim);

/// Row-major flattening of a word; inverse of word_of_index.
std::size_t index_of_word(const Word& word, std::size_t dim);

/// An ordered stream of d-dimensional points, interpreted as the vertices
/// of a piecewise-linear path. Knows its dimension even when empty.
class Path {
public:
  explicit Path(std::size_t dim);
  Path(std::size_t dim, std::vector<std::vector<double>> points);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<double>& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<std::vector<double>>& points() const { return points_; }

  /// Appends a point; throws std::invalid_argument on dimension mismatch
  /// or non-finite coordinates.
  void push_back(std::vector<double> point);

private:
  std::size_t dim_;
  std::vector<std::vector<double>> points_;
};

/// Truncated signature: levels 1..L of iterated-integral coefficients over
/// a dim-letter alphabet, each level flattened row-major.
class Signature {
public:
  /// The identity element (all stored coefficients zero).
  Signature(std::size_t dim, std::size_t level);
  static Signature identity(std::size_t dim, std::size_t level) { return {dim, level}; }

  std::size_t dim() const { return dim_; }
  std::size_t level() const { return level_; }

  /// Coefficients of one level k in 1..level(), length dim^k.
  std::span<const double> level_coeffs(std::size_t k) const;

  double coeff(const Word& word) const;

  /// Levels 1..L concatenated into one vector (level-0 omitted).
  std::vector<double> flatten() const;

  bool operator==(const Signature& other) const = default;

private:
  std::size_t dim_;
  std::size_t level_;
  std::vector<std::vector<double>> levels_;  // levels_[k-1] has dim^k entries

  friend Signature tensor_exp(std::span<const double>, std::size_t);
  friend Signature chen_product(const Signature&, const Signature&);
  friend Signature path_signature(const Path&, std::size_t);
  friend void concat_in_place(Signature&, const Signature&);
};

/// Signature of a single linear segment with the given displacement:
/// level-k coefficient at word (i1..ik) is (prod of displacements) / k!.
Signature tensor_exp(std::span<const double> increment, std::size_t level);

/// Truncated tensor (concatenation) product: coefficient of word w in the
/// result is the sum of a(u)*b(v) over all splits w = u.v, empty halves
/// contributing the implicit level-0 value 1.
Signature chen_product(const Signature& a, const Signature& b);

/// Signature of a piecewise-linear path: the chen_product fold of the
/// segment signatures. Paths with fewer than two points give the identity.
Signature path_signature(const Path& path, std::size_t level);

/// (coeff(i,j) - coeff(j,i)) / 2, the signed-area functional of
/// coordinates i and j. Requires level >= 2 and i != j.
double levy_area(const Signature& s, std::size_t i, std::size_t j);

/// The path with the origin prepended, pinning absolute feature levels
/// that the signature's translation invariance would otherwise discard.
Path augment_basepoint(const Path& path);

}  // namespace turnsig::sig
