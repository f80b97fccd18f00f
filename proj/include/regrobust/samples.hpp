#pragma once

// Labelled sample sets and their JSON-lines form:
//   {"seq":["1/1","5/2"],"label":1}

#include <iosfwd>
#include <string>
#include <vector>

#include "regrobust/automata.hpp"

namespace regrobust {

struct SampleSet {
  std::vector<Sequence> positives;
  std::vector<Sequence> negatives;

  std::size_t size() const { return positives.size() + negatives.size(); }
  bool empty() const { return size() == 0; }
  // Throws InvalidArgument on an empty sequence or a sequence in both classes.
  void validate() const;
};

SampleSet read_samples(std::istream& in);
SampleSet load_samples(const std::string& path);
// Positives first, then negatives, each in stored order.
void write_samples(std::ostream& out, const SampleSet& s);
std::string samples_jsonl(const SampleSet& s);

bool consistent(const Dra& dra, const SampleSet& s);

}  // namespace regrobust
