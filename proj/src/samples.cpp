#include "regrobust/samples.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "regrobust/errors.hpp"
#include "regrobust/serialize.hpp"

namespace regrobust {

void SampleSet::validate() const {
  std::set<Sequence> pos;
  for (const auto& s : positives) {
    if (s.empty()) throw InvalidArgument("sample set: empty sequence");
    pos.insert(s);
  }
  for (const auto& s : negatives) {
    if (s.empty()) throw InvalidArgument("sample set: empty sequence");
    if (pos.count(s)) throw InvalidArgument("sample set: " + sequence_str(s) + " is both positive and negative");
  }
}

SampleSet read_samples(std::istream& in) {
  SampleSet s;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = parse_json_text(line);
    } catch (const ParseError& e) {
      throw ParseError("samples: malformed JSON", n, e.column);
    }
    const std::string where = "samples line " + std::to_string(n);
    if (!j.is_object() || !j.contains("seq") || !j.contains("label"))
      throw ParseError(where + ": expected {\"seq\":[...],\"label\":0|1}", n, 1);
    Sequence seq;
    try {
      seq = sequence_from_json(j["seq"], where);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), n, 1);
    }
    const json& l = j["label"];
    int label = -1;
    if (l.is_boolean()) label = l.get<bool>() ? 1 : 0;
    if (l.is_number_integer()) label = l.get<int>();
    if (label != 0 && label != 1) throw ParseError(where + ": label must be 0 or 1", n, 1);
    (label ? s.positives : s.negatives).push_back(std::move(seq));
  }
  return s;
}

SampleSet load_samples(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_samples(in);
}

void write_samples(std::ostream& out, const SampleSet& s) {
  for (int label : {1, 0})
    for (const auto& seq : label ? s.positives : s.negatives)
      out << json{{"seq", sequence_to_json(seq)}, {"label", label}}.dump() << '\n';
}

std::string samples_jsonl(const SampleSet& s) {
  std::ostringstream out;
  write_samples(out, s);
  return out.str();
}

bool consistent(const Dra& dra, const SampleSet& s) {
  for (const auto& w : s.positives)
    if (!accepts(dra, w)) return false;
  for (const auto& w : s.negatives)
    if (accepts(dra, w)) return false;
  return true;
}

}  // namespace regrobust
