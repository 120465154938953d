#ifndef SESSIONLINK_METRICS_H_
#define SESSIONLINK_METRICS_H_

#include <cstddef>
#include <span>

#include "sessionlink/sessionizer.h"

namespace sessionlink {

struct MetricsResult {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  int reach = 0;
  double cutoff = 0;

  friend bool operator==(const MetricsResult&, const MetricsResult&) = default;
};

// 2PR / (P + R), or 0 when P + R is 0.
double F1Score(double precision, double recall);

// Precision |St ∩ Sp| / |Sp| (0 when Sp is empty), recall |St ∩ Sp| / |St|,
// and reach: the number of users with at least one correctly linked pair.
// Users are recovered as the connected components of the truth pairs over
// `session_count` sessions, so no owner labels are needed. Both pair lists
// may be in any order; duplicates are ignored. Throws InvalidSpecError for
// an empty truth set.
MetricsResult ComputeMetrics(std::span<const SessionPair> predicted,
                             std::span<const SessionPair> truth,
                             std::size_t session_count);

}  // namespace sessionlink

#endif  // SESSIONLINK_METRICS_H_
