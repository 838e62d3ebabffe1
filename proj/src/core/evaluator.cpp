// Copyright 2026 The kbqa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_map>

#include "error.hpp"
#include "jsonl.hpp"
#include "text.hpp"

namespace kbqa {

namespace {

std::vector<std::string> string_list(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw DataError(std::string("'") + field + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw DataError(std::string("'") + field + "' must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::optional<std::size_t> opt_rank(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || j[field].is_null()) return std::nullopt;
  if (!j[field].is_number_unsigned() && !j[field].is_number_integer())
    throw DataError(std::string("'") + field + "' must be an integer");
  long long v = j[field].get<long long>();
  if (v < 0) throw DataError(std::string("'") + field + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::optional<std::string> normalize_category(const std::string& raw) {
  std::string c = text::to_lower_ascii(text::normalize_whitespace(raw));
  if (c == "iid" || c == "i.i.d." || c == "i.i.d") return "iid";
  if (c == "compositional") return "compositional";
  if (c == "zero-shot" || c == "zero_shot" || c == "zeroshot") return "zero-shot";
  return std::nullopt;
}

DatasetExample example_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("dataset row must be an object");
  if (!j.contains("qid") || !j.contains("question") || !j.contains("answers"))
    throw DataError("dataset row needs qid, question and answers");
  DatasetExample ex;
  ex.qid = j["qid"].is_string() ? j["qid"].get<std::string>() : j["qid"].dump();
  ex.question = j["question"].get<std::string>();
  ex.gold_answers = AnswerSet(string_list(j["answers"], "answers"));
  if (j.contains("s_expression") && j["s_expression"].is_string()) ex.gold_lf = j["s_expression"].get<std::string>();
  if (j.contains("category") && j["category"].is_string()) {
    ex.category = normalize_category(j["category"].get<std::string>());
    if (!ex.category) throw DataError("unknown category '" + j["category"].get<std::string>() + "'");
  }
  return ex;
}

std::vector<DatasetExample> read_dataset(const std::string& path) {
  std::vector<DatasetExample> out;
  std::set<std::string> seen;
  for_each_jsonl(path, [&](const nlohmann::json& row, std::size_t) {
    DatasetExample ex = example_from_json(row);
    if (!seen.insert(ex.qid).second) throw DataError("duplicate qid '" + ex.qid + "'");
    out.push_back(std::move(ex));
  });
  return out;
}

nlohmann::json prediction_to_json(const Prediction& p) {
  nlohmann::json j;
  j["qid"] = p.qid;
  j["answers"] = p.answers.items();
  j["source"] = p.source;
  j["lf_rank"] = p.lf_rank ? nlohmann::json(*p.lf_rank) : nlohmann::json(nullptr);
  j["gen_rank"] = p.gen_rank ? nlohmann::json(*p.gen_rank) : nlohmann::json(nullptr);
  if (p.num_executable) j["num_executable"] = *p.num_executable;
  if (p.failed) {
    j["failed"] = true;
    j["error"] = p.error;
  }
  return j;
}

Prediction prediction_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("qid") || !j.contains("answers"))
    throw DataError("prediction row needs qid and answers");
  Prediction p;
  p.qid = j["qid"].is_string() ? j["qid"].get<std::string>() : j["qid"].dump();
  p.answers = AnswerSet(string_list(j["answers"], "answers"));
  if (j.contains("source") && j["source"].is_string()) p.source = j["source"].get<std::string>();
  p.lf_rank = opt_rank(j, "lf_rank");
  p.gen_rank = opt_rank(j, "gen_rank");
  p.num_executable = opt_rank(j, "num_executable");
  if (j.contains("failed") && j["failed"].is_boolean()) p.failed = j["failed"].get<bool>();
  if (j.contains("error") && j["error"].is_string()) p.error = j["error"].get<std::string>();
  return p;
}

std::vector<Prediction> read_predictions(const std::string& path) {
  std::vector<Prediction> out;
  for_each_jsonl(path, [&](const nlohmann::json& row, std::size_t) { out.push_back(prediction_from_json(row)); });
  return out;
}

ExampleScore score_example(const AnswerSet& pred, const AnswerSet& gold) {
  if (gold.empty()) throw ContractError("gold answer set is empty");
  ExampleScore s;
  if (pred.empty()) return s;
  s.hits1 = gold.contains(pred.top()) ? 1 : 0;
  std::size_t overlap = 0;
  for (const auto& a : pred.items())
    if (gold.contains(a)) ++overlap;
  if (overlap == 0) return s;
  double p = static_cast<double>(overlap) / static_cast<double>(pred.size());
  double r = static_cast<double>(overlap) / static_cast<double>(gold.size());
  s.f1 = 2.0 * p * r / (p + r);
  return s;
}

bool contains_answer_name(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  const std::string h = text::to_lower_ascii(haystack);
  const std::string n = text::to_lower_ascii(needle);
  const bool check_left = text::is_alnum(n.front());
  const bool check_right = text::is_alnum(n.back());
  for (std::size_t pos = h.find(n); pos != std::string::npos; pos = h.find(n, pos + 1)) {
    const std::size_t end = pos + n.size();
    if (check_left && pos > 0 && text::is_alnum(h[pos - 1])) continue;
    if (check_right && end < h.size() && text::is_alnum(h[end])) continue;
    return true;
  }
  return false;
}

RetrievalScore retrieval_metrics(std::span<const RetrievedPassage> retrieved, const PassageLookup& passages,
                                 const AnswerSet& gold, std::size_t k) {
  if (k == 0) throw ContractError("k must be >= 1");
  RetrievalScore s;
  if (gold.empty() || retrieved.empty()) return s;
  const std::size_t n = std::min(k, retrieved.size());
  std::size_t found = 0;
  for (const auto& g : gold.items()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (contains_answer_name(passages.at(retrieved[i].passage_id).body, g)) {
        ++found;
        break;
      }
    }
  }
  s.hits = found > 0 ? 1 : 0;
  s.recall = static_cast<double>(found) / static_cast<double>(gold.size());
  return s;
}

EvalReport aggregate(std::span<const DatasetExample> examples, std::span<const Prediction> preds) {
  std::unordered_map<std::string, const Prediction*> by_qid;
  std::vector<std::string> problems;
  for (const auto& p : preds)
    if (!by_qid.emplace(p.qid, &p).second) problems.push_back("duplicate prediction for qid " + p.qid);
  std::set<std::string> dataset_qids;
  for (const auto& ex : examples) {
    dataset_qids.insert(ex.qid);
    if (!by_qid.count(ex.qid)) problems.push_back("no prediction for qid " + ex.qid);
  }
  for (const auto& p : preds)
    if (!dataset_qids.count(p.qid)) problems.push_back("prediction for unknown qid " + p.qid);
  if (!problems.empty()) throw DataError("predictions do not align with dataset: " + text::join(problems, "; "));

  EvalReport rep;
  std::size_t non_exec = 0;
  for (const auto& ex : examples) {
    const Prediction& p = *by_qid.at(ex.qid);
    ExampleScore s = score_example(p.answers, ex.gold_answers);
    ++rep.count;
    rep.hits_at_1 += s.hits1;
    rep.f1 += s.f1;
    if (p.failed) ++rep.failed;
    const bool none_executed = p.num_executable ? *p.num_executable == 0 : (p.failed || p.source != "lf");
    if (none_executed) ++non_exec;
    if (ex.category) {
      CategoryStats& c = rep.per_category[*ex.category];
      ++c.count;
      c.hits_at_1 += s.hits1;
      c.f1 += s.f1;
    }
  }
  if (rep.count) {
    const double n = static_cast<double>(rep.count);
    rep.hits_at_1 /= n;
    rep.f1 /= n;
    rep.non_executable_rate = static_cast<double>(non_exec) / n;
  }
  for (auto& [name, c] : rep.per_category) {
    c.hits_at_1 /= static_cast<double>(c.count);
    c.f1 /= static_cast<double>(c.count);
  }
  return rep;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["count"] = count;
  j["hits_at_1"] = hits_at_1;
  j["f1"] = f1;
  j["non_executable_rate"] = non_executable_rate;
  j["failed"] = failed;
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [name, c] : per_category)
    cats[name] = {{"count", c.count}, {"hits_at_1", c.hits_at_1}, {"f1", c.f1}};
  j["per_category"] = cats;
  return j;
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "%-16s %8s %8s %8s\n", "split", "count", "hits@1", "f1");
  os << line;
  std::snprintf(line, sizeof line, "%-16s %8zu %8s %8s\n", "overall", count, fmt(hits_at_1).c_str(), fmt(f1).c_str());
  os << line;
  for (const auto& [name, c] : per_category) {
    std::snprintf(line, sizeof line, "%-16s %8zu %8s %8s\n", name.c_str(), c.count, fmt(c.hits_at_1).c_str(),
                  fmt(c.f1).c_str());
    os << line;
  }
  os << "non-executable rate " << fmt(non_executable_rate) << "\n";
  os << "failed questions    " << failed << "\n";
  return os.str();
}

std::string EvalReport::to_svg() const {
  std::vector<std::pair<std::string, double>> bars{{"overall", f1}};
  for (const auto& [name, c] : per_category) bars.emplace_back(name, c.f1);
  const int bar_w = 60, gap = 30, height = 200, top = 20, bottom = 40;
  const int width = gap + static_cast<int>(bars.size()) * (bar_w + gap);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << (height + top + bottom)
     << "\">\n";
  os << "<line x1=\"0\" y1=\"" << (top + height) << "\" x2=\"" << width << "\" y2=\"" << (top + height)
     << "\" stroke=\"black\"/>\n";
  int x = gap;
  for (const auto& [name, v] : bars) {
    const int h = static_cast<int>(v * height + 0.5);
    os << "<rect x=\"" << x << "\" y=\"" << (top + height - h) << "\" width=\"" << bar_w << "\" height=\"" << h
       << "\" fill=\"steelblue\"/>\n";
    os << "<text x=\"" << (x + bar_w / 2) << "\" y=\"" << (top + height - h - 4)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    os << "<text x=\"" << (x + bar_w / 2) << "\" y=\"" << (top + height + 16)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << name << "</text>\n";
    x += bar_w + gap;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace kbqa
