#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

#include "regrobust/automata.hpp"
#include "regrobust/raa.hpp"

namespace regrobust {

using json = nlohmann::json;

json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j, const std::string& where = "");
json sequence_to_json(const Sequence& s);
Sequence sequence_from_json(const json& j, const std::string& where = "");
// "0,-1,5.5,3/2"
Sequence parse_sequence(std::string_view text);
std::string sequence_str(const Sequence& s);

json to_json(const Dra& dra);
json to_json(const Raa& raa);
Dra dra_from_json(const json& j);
Raa raa_from_json(const json& j);

std::string serialize(const Dra& dra);
std::string serialize(const Raa& raa);
Dra parse_dra(std::string_view text);
Raa parse_raa(std::string_view text);

json parse_json_text(std::string_view text);  // ParseError with line/column
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
Dra load_dra(const std::string& path);

}  // namespace regrobust
