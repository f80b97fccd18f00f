#pragma once

#include <string>

#include "regrobust/raa.hpp"

namespace regrobust {

enum class MetricKind { LastLetter, Hamming, ThresholdHamming, Manhattan, Edit, Dtw };

struct MetricSpec {
  MetricKind kind = MetricKind::Hamming;
  Rational threshold;          // threshold_hamming
  Rational subst_cost = 1;     // edit
  Rational insdel_cost = 1;    // edit
};

// "hamming", "manhattan", "edit", "dtw", "last_letter",
// "threshold_hamming:C", "edit:SUBST:INSDEL"
MetricSpec parse_metric(const std::string& name);
std::string metric_name(const MetricSpec& m);

Raa build_metric(const MetricSpec& m);
inline Raa build_metric(MetricKind k) { return build_metric(MetricSpec{k, {}, 1, 1}); }

// Output equals raa's on (v, w) when v is in L(l1) and w in L(l2), else infinity.
Raa restrict_metric(const Raa& raa, const Dra& l1, const Dra& l2);

}  // namespace regrobust
