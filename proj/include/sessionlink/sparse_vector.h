#ifndef SESSIONLINK_SPARSE_VECTOR_H_
#define SESSIONLINK_SPARSE_VECTOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sessionlink {

// Content fingerprint. Entries are kept sorted by index with no explicit
// zeros; every weight is finite.
class SparseVector {
 public:
  struct Entry {
    std::uint32_t index = 0;
    double weight = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  SparseVector() = default;
  explicit SparseVector(std::size_t dim) : dim_(dim) {}
  // Duplicate indices are summed. Throws ShapeError for an index >= dim and
  // InvalidSpecError for a non-finite weight.
  SparseVector(std::size_t dim, std::vector<Entry> entries);

  static SparseVector FromDense(std::span<const double> values);

  std::size_t dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  double at(std::size_t index) const;
  std::vector<double> ToDense() const;

  double Dot(const SparseVector& other) const;
  double Norm() const;
  double Sum() const;
  SparseVector Scaled(double factor) const;

  friend SparseVector operator+(const SparseVector& a, const SparseVector& b);
  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace sessionlink

#endif  // SESSIONLINK_SPARSE_VECTOR_H_
