#include "xoscc/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "xoscc/errors.hpp"

namespace xoscc {
namespace {

Json header(const char* format) {
  Json j;
  j["format"] = format;
  j["version"] = kFormatVersion;
  return j;
}

void expect_format(const Json& j, const char* format) {
  if (!j.is_object() || !j.contains("format") || j["format"] != format) {
    throw InvalidArgument(std::string("expected a '") + format + "' document");
  }
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() > kFormatVersion) {
    throw InvalidArgument(std::string("unsupported '") + format + "' version");
  }
}

template <typename T>
T field(const Json& j, const char* name) {
  if (!j.contains(name)) throw InvalidArgument(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad field '") + name + "': " + e.what());
  }
}

Json bits_rows(const std::vector<Bits>& row) {
  Json out = Json::array();
  for (const auto& b : row) out.push_back(to_string(b));
  return out;
}

}  // namespace

Json to_json(const XOSValuation& v) {
  Json j;
  j["clauses"] = v.clauses;
  Json prov = Json::array();
  for (const auto& p : v.provenance) prov.push_back(p.path);
  j["provenance"] = prov;
  return j;
}

Json to_json(const Instance& inst) {
  Json j = header("xoscc.instance");
  j["level"] = inst.level;
  j["k"] = inst.k;
  j["n"] = inst.n;
  j["m"] = inst.m;
  Json vals = Json::array();
  for (const auto& v : inst.valuations) vals.push_back(to_json(v));
  j["valuations"] = vals;
  return j;
}

Json to_json(const GroundTruth& truth) {
  Json j = header("xoscc.ground_truth");
  j["level"] = truth.level;
  j["k"] = truth.k;
  j["q"] = truth.q;
  j["t"] = truth.t;
  j["theta_star"] = truth.theta_star;
  j["j_star"] = truth.j_star;
  j["special_slots"] = truth.special_slots;
  j["sigma"] = truth.sigma;
  j["groups"] = truth.groups;
  j["special_items"] = truth.special_items;
  j["x_vectors"] = truth.x_vectors;
  j["special_trace"] = truth.special_trace ? to_json(*truth.special_trace) : Json(nullptr);
  return j;
}

Json to_json(const IntersectingFamily& family) {
  Json j = header("xoscc.family");
  j["p"] = family.p;
  j["q"] = family.q;
  j["t"] = family.t;
  j["l"] = family.l;
  j["sets"] = family.sets;
  return j;
}

Json to_json(const FamilyLadder& ladder) {
  Json j = header("xoscc.family_ladder");
  Json fams = Json::array();
  for (const auto& f : ladder) fams.push_back(to_json(f));
  j["families"] = fams;
  return j;
}

Json to_json(const Sample& sample) {
  Json j = header("xoscc.sample");
  j["instance"] = to_json(sample.instance);
  j["truth"] = to_json(sample.truth);
  return j;
}

Json to_json(const Transcript& transcript) {
  Json j = header("xoscc.transcript");
  Json rounds = Json::array();
  for (const auto& round : transcript.messages) rounds.push_back(bits_rows(round));
  j["messages"] = rounds;
  j["output"] = transcript.output;
  j["realized_bits"] = transcript.realized_bits;
  j["worst_case_bits"] = transcript.worst_case_bits;
  j["seed"] = transcript.seed;
  return j;
}

Json to_json(const FamilyReport& report) {
  Json j;
  j["ok"] = report.ok;
  j["worst_intersection"] = report.worst_intersection;
  j["worst_pair"] = report.worst_pair ? Json::array({report.worst_pair->first, report.worst_pair->second}) : Json(nullptr);
  return j;
}

Json to_json(const DirectSumReport& report) {
  Json j;
  j["protocol"] = report.protocol;
  j["k"] = report.k;
  j["p"] = report.p;
  j["outcomes"] = report.outcomes;
  j["total_mi"] = report.total_mi;
  j["sum_player_mi"] = report.sum_player_mi;
  j["subadditive"] = report.subadditive;
  Json players = Json::array();
  for (const auto& t : report.players) {
    players.push_back({{"player", t.player}, {"mi", t.mi}, {"bits", t.bits}, {"bound", t.bound}, {"ok", t.ok}});
  }
  j["players"] = players;
  j["ok"] = report.ok;
  return j;
}

Json to_json(const ProductReport& report) {
  Json j;
  j["protocol"] = report.protocol;
  j["sampler"] = report.sampler;
  j["r"] = report.r;
  j["k"] = report.k;
  j["p"] = report.p;
  j["window"] = report.window;
  j["outcomes"] = report.outcomes;
  Json terms = Json::array();
  for (const auto& t : report.terms) terms.push_back({{"player", t.player}, {"mi", t.mi}});
  j["terms"] = terms;
  j["max_mi"] = report.max_mi;
  j["ok"] = report.ok;
  return j;
}

Json to_json(const EmbeddingLawReport& report) {
  Json j;
  j["protocol"] = report.protocol;
  j["k"] = report.k;
  j["p"] = report.p;
  j["j_star"] = report.j_star;
  j["round_one"] = bits_rows(report.round_one);
  j["tvd"] = report.tvd;
  j["lower_shift"] = report.lower_shift;
  j["ok"] = report.ok;
  return j;
}

Json to_json(const OutputLawReport& report) {
  Json j;
  j["protocol"] = report.protocol;
  j["trials"] = report.trials;
  j["values"] = report.values;
  j["embedded_law"] = report.embedded_law;
  j["direct_law"] = report.direct_law;
  j["tvd"] = report.tvd;
  j["mean_acceptance"] = report.mean_acceptance;
  return j;
}

XOSValuation valuation_from_json(const Json& j) {
  XOSValuation v;
  v.clauses = field<std::vector<ItemSet>>(j, "clauses");
  if (j.contains("provenance")) {
    for (const auto& path : j["provenance"]) v.provenance.push_back(Provenance{path.get<std::vector<int>>()});
  }
  if (!v.provenance.empty() && v.provenance.size() != v.clauses.size()) {
    throw InvalidArgument("provenance must be empty or have one entry per clause");
  }
  return v;
}

Instance instance_from_json(const Json& j) {
  expect_format(j, "xoscc.instance");
  Instance inst;
  inst.level = field<int>(j, "level");
  inst.k = field<int>(j, "k");
  inst.n = field<int>(j, "n");
  inst.m = field<int>(j, "m");
  for (const auto& v : field<Json>(j, "valuations")) inst.valuations.push_back(valuation_from_json(v));
  inst.validate();
  return inst;
}

GroundTruth truth_from_json(const Json& j) {
  expect_format(j, "xoscc.ground_truth");
  GroundTruth t;
  t.level = field<int>(j, "level");
  t.k = field<int>(j, "k");
  t.q = field<int>(j, "q");
  t.t = field<int>(j, "t");
  t.theta_star = field<int>(j, "theta_star");
  t.j_star = field<int>(j, "j_star");
  t.special_slots = field<ItemSet>(j, "special_slots");
  t.sigma = field<std::vector<Item>>(j, "sigma");
  t.groups = field<std::vector<std::vector<int>>>(j, "groups");
  t.special_items = field<std::vector<ItemSet>>(j, "special_items");
  t.x_vectors = field<std::vector<std::vector<std::uint8_t>>>(j, "x_vectors");
  if (j.contains("special_trace") && !j["special_trace"].is_null()) {
    t.special_trace = std::make_shared<const GroundTruth>(truth_from_json(j["special_trace"]));
  }
  return t;
}

IntersectingFamily family_from_json(const Json& j) {
  expect_format(j, "xoscc.family");
  IntersectingFamily f;
  f.p = field<int>(j, "p");
  f.q = field<int>(j, "q");
  f.t = field<int>(j, "t");
  f.l = field<int>(j, "l");
  f.sets = field<std::vector<ItemSet>>(j, "sets");
  if (static_cast<int>(f.sets.size()) != f.p) throw InvalidArgument("family must hold exactly p sets");
  for (const auto& s : f.sets) {
    if (static_cast<int>(s.size()) != f.t || !is_normalized(s) || (!s.empty() && static_cast<int>(s.back()) >= f.q)) {
      throw InvalidArgument("family sets must be sorted t-subsets of [q]");
    }
  }
  return f;
}

FamilyLadder ladder_from_json(const Json& j) {
  if (j.is_object() && j.contains("format") && j["format"] == "xoscc.family") return {family_from_json(j)};
  expect_format(j, "xoscc.family_ladder");
  FamilyLadder out;
  for (const auto& f : field<Json>(j, "families")) out.push_back(family_from_json(f));
  return out;
}

Sample sample_from_json(const Json& j) {
  expect_format(j, "xoscc.sample");
  return Sample{instance_from_json(field<Json>(j, "instance")), truth_from_json(field<Json>(j, "truth"))};
}

Instance read_instance_document(const Json& j) {
  if (j.is_object() && j.contains("format") && j["format"] == "xoscc.sample") {
    return instance_from_json(field<Json>(j, "instance"));
  }
  return instance_from_json(j);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
}

}  // namespace xoscc
