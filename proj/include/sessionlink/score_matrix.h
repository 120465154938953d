#ifndef SESSIONLINK_SCORE_MATRIX_H_
#define SESSIONLINK_SCORE_MATRIX_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace sessionlink {

// Symmetric pairwise scores over n sessions, stored as the condensed upper
// triangle (n(n-1)/2 values). The diagonal is not represented.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  explicit ScoreMatrix(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t pair_count() const { return scores_.size(); }

  double at(std::size_t i, std::size_t j) const { return scores_[Offset(i, j)]; }
  void set(std::size_t i, std::size_t j, double score) {
    scores_[Offset(i, j)] = score;
  }
  const std::vector<double>& condensed() const { return scores_; }

  // Positional ids "0".."n-1" until set.
  const std::vector<std::string>& session_ids() const { return ids_; }
  void set_session_ids(std::vector<std::string> ids);

  bool AllFinite() const;

  friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;

 private:
  std::size_t Offset(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  std::vector<double> scores_;
  std::vector<std::string> ids_;
};

// Three tab-separated columns id_a, id_b, score with id_a < id_b, rows sorted
// lexicographically. Scores use round-trip precision.
void WriteScoreMatrix(const ScoreMatrix& matrix, std::ostream& out);
ScoreMatrix ReadScoreMatrix(std::istream& in);

}  // namespace sessionlink

#endif  // SESSIONLINK_SCORE_MATRIX_H_
