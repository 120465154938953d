#include "sessionlink/sparse_vector.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sessionlink/errors.h"

namespace sessionlink {

SparseVector::SparseVector(std::size_t dim, std::vector<Entry> entries)
    : dim_(dim) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (const Entry& e : entries) {
    if (e.index >= dim_) {
      throw ShapeError("index " + std::to_string(e.index) +
                       " outside dimension " + std::to_string(dim_));
    }
    if (!std::isfinite(e.weight)) {
      throw InvalidSpecError("non-finite weight at index " +
                             std::to_string(e.index));
    }
    if (!entries_.empty() && entries_.back().index == e.index) {
      entries_.back().weight += e.weight;
    } else {
      entries_.push_back(e);
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return e.weight == 0.0; });
}

SparseVector SparseVector::FromDense(std::span<const double> values) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) {
      entries.push_back({static_cast<std::uint32_t>(i), values[i]});
    }
  }
  return SparseVector(values.size(), std::move(entries));
}

double SparseVector::at(std::size_t index) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, std::size_t i) { return e.index < i; });
  return it != entries_.end() && it->index == index ? it->weight : 0.0;
}

std::vector<double> SparseVector::ToDense() const {
  std::vector<double> dense(dim_, 0.0);
  for (const Entry& e : entries_) dense[e.index] = e.weight;
  return dense;
}

double SparseVector::Dot(const SparseVector& other) const {
  double sum = 0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->index < b->index) {
      ++a;
    } else if (b->index < a->index) {
      ++b;
    } else {
      sum += a->weight * b->weight;
      ++a;
      ++b;
    }
  }
  return sum;
}

double SparseVector::Norm() const { return std::sqrt(Dot(*this)); }

double SparseVector::Sum() const {
  double sum = 0;
  for (const Entry& e : entries_) sum += e.weight;
  return sum;
}

SparseVector SparseVector::Scaled(double factor) const {
  std::vector<Entry> scaled = entries_;
  for (Entry& e : scaled) e.weight *= factor;
  return SparseVector(dim_, std::move(scaled));
}

SparseVector operator+(const SparseVector& a, const SparseVector& b) {
  if (a.dim_ != b.dim_) {
    throw ShapeError("adding vectors of dimension " + std::to_string(a.dim_) +
                     " and " + std::to_string(b.dim_));
  }
  std::vector<SparseVector::Entry> sum = a.entries_;
  sum.insert(sum.end(), b.entries_.begin(), b.entries_.end());
  return SparseVector(a.dim_, std::move(sum));
}

}  // namespace sessionlink
