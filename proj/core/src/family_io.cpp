#include "snf/family_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "snf/json_out.hpp"

namespace snf {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("family file: " + msg); }

Permutation parse_perm(const json& j, int n, const std::string& field) {
  if (!j.is_array() || (int)j.size() != n)
    bad("entry of '" + field + "' is not a permutation of length n");
  std::vector<int> im;
  im.reserve((std::size_t)n);
  for (const auto& v : j) {
    if (!v.is_number_integer()) bad("entry of '" + field + "' is not a permutation (non-integer)");
    im.push_back((int)v.get<std::int64_t>() - 1);  // one-based on disk
  }
  try {
    return Permutation(std::move(im));
  } catch (const std::exception&) {
    bad("entry of '" + field + "' is not a permutation");
  }
}

std::vector<PermRank> parse_perm_list(const json& j, int n, const std::string& field) {
  if (!j.is_array()) bad("'" + field + "' must be an array of permutations");
  std::vector<PermRank> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(parse_perm(e, n, field).rank());
  return out;
}

std::vector<int> parse_index_list(const json& j, int n, const std::string& field) {
  if (!j.is_array()) bad("'" + field + "' must be an array of indices");
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number_integer()) bad("'" + field + "' contains a non-integer index");
    int v = (int)e.get<std::int64_t>() - 1;
    if (v < 0 || v >= n) bad("'" + field + "' index out of range [1, n]");
    out.push_back(v);
  }
  return out;
}

}  // namespace

BooleanFamily parse_family_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  if (!j.contains("n")) bad("missing field 'n'");
  if (!j["n"].is_number_integer()) bad("'n' must be an integer");
  int n = (int)j["n"].get<std::int64_t>();
  if (n < 1 || n > kMaxN) bad("'n' out of supported range");

  if (j.contains("explicit")) {
    const auto& list = j["explicit"];
    if (!list.is_array()) bad("'explicit' must be an array of permutations");
    RankBitset bits(factorial(n));
    for (const auto& e : list) bits.set(parse_perm(e, n, "explicit").rank());
    return BooleanFamily::from_bitset(n, std::move(bits));
  }

  bool row_form = j.contains("row");
  bool col_form = j.contains("column");
  if (row_form == col_form) bad("expected exactly one of 'explicit', 'row', 'column'");
  const char* line_field = row_form ? "row" : "column";
  const char* cross_field = row_form ? "columns" : "rows";
  if (!j[line_field].is_number_integer()) bad(std::string("'") + line_field + "' must be an integer");
  int line = (int)j[line_field].get<std::int64_t>() - 1;
  if (line < 0 || line >= n) bad(std::string("'") + line_field + "' out of range [1, n]");
  if (!j.contains(cross_field)) bad(std::string("missing field '") + cross_field + "'");
  std::vector<int> cross = parse_index_list(j[cross_field], n, cross_field);
  std::vector<PermRank> added, removed;
  if (j.contains("added")) added = parse_perm_list(j["added"], n, "added");
  if (j.contains("removed")) removed = parse_perm_list(j["removed"], n, "removed");
  try {
    return BooleanFamily::coset_union(
        n, row_form ? BooleanFamily::Axis::Row : BooleanFamily::Axis::Column, line,
        std::move(cross), std::move(added), std::move(removed));
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
}

BooleanFamily load_family(const std::string& path) { return parse_family_json(read_file(path)); }

namespace {

void write_perm(JsonWriter& w, const Permutation& p) {
  w.begin_array();
  for (int i = 0; i < p.n(); ++i) w.value(p(i) + 1);
  w.end_array();
}

}  // namespace

std::string family_to_json(const BooleanFamily& F) {
  JsonWriter w;
  w.begin_object();
  w.key("n").value(F.n());
  if (F.is_explicit()) {
    w.key("explicit").begin_array();
    F.bits().for_each_set([&](PermRank k) { write_perm(w, Permutation::unrank(k, F.n())); });
    w.end_array();
  } else {
    bool row = F.axis() == BooleanFamily::Axis::Row;
    w.key(row ? "row" : "column").value(F.line() + 1);
    w.key(row ? "columns" : "rows").begin_array();
    for (int x : F.cross()) w.value(x + 1);
    w.end_array();
    if (!F.added().empty()) {
      w.key("added").begin_array();
      for (PermRank k : F.added()) write_perm(w, Permutation::unrank(k, F.n()));
      w.end_array();
    }
    if (!F.removed().empty()) {
      w.key("removed").begin_array();
      for (PermRank k : F.removed()) write_perm(w, Permutation::unrank(k, F.n()));
      w.end_array();
    }
  }
  w.end_object();
  return w.str();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::invalid_argument("cannot write file: " + path);
  f << content;
}

}  // namespace snf
