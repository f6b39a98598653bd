#include "docreward/bench.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "docreward/errors.hpp"

namespace docreward {

double overall_score(double text_edit, double table_teds, double formula_score) {
  if (!(text_edit >= 0.0 && text_edit <= 1.0))
    throw ContractError("overall_score: text edit distance must lie in [0, 1]");
  if (!(table_teds >= 0.0 && table_teds <= 100.0))
    throw ContractError("overall_score: table TEDS must lie in [0, 100]");
  if (!(formula_score >= 0.0 && formula_score <= 100.0))
    throw ContractError("overall_score: formula score must lie in [0, 100]");
  return ((1.0 - text_edit) * 100.0 + table_teds + formula_score) / 3.0;
}

namespace {

class Mean {
 public:
  void add(double x) {
    sum_ += x;
    ++n_;
  }
  std::optional<double> get(double scale = 1.0) const {
    if (n_ == 0) return std::nullopt;
    return scale * (sum_ / static_cast<double>(n_));
  }

 private:
  double sum_ = 0.0;
  std::size_t n_ = 0;
};

}  // namespace

BenchReport aggregate_report(std::vector<ScoredRecord> records) {
  if (records.empty()) throw ReportError("cannot build a report from zero records");

  BenchReport report;
  for (Domain d : kAllDomains) report.domain_counts[d] = 0;
  for (ScoredRecord& r : records) {
    std::string id = r.id;
    if (!report.per_record.emplace(id, std::move(r)).second)
      throw ContractError("aggregate_report: duplicate record id '" + id + "'");
  }

  Mean plain, formula, table_teds, table_teds_s, text_aggregate, vision, format;
  CorpusMetrics& c = report.corpus;
  for (const auto& [id, r] : report.per_record) {
    ++report.domain_counts[r.domain];
    for (const std::string& w : r.warnings) report.warnings.push_back(id + ": " + w);
    if (r.text) {
      for (const std::string& w : r.text->warnings) report.warnings.push_back(id + ": " + w);
      if (r.text->plain_text) plain.add(*r.text->plain_text);
      if (r.text->formula) formula.add(*r.text->formula);
      if (r.text->table) table_teds_s.add(*r.text->table);
      if (r.text->table_teds) table_teds.add(*r.text->table_teds);
      if (r.text->scoreable) text_aggregate.add(r.text->aggregate);
    }
    if (r.vision) {
      if (r.vision->visual) vision.add(*r.vision->visual);
      format.add(r.vision->format_alignment);
      if (r.vision->render_attempted) {
        ++c.render_attempts;
        if (r.vision->render_succeeded) ++c.render_successes;
      }
    }
  }

  if (auto p = plain.get()) c.text_edit_mean = 1.0 - *p;
  c.formula_score_mean = formula.get(100.0);
  c.table_teds_mean = table_teds.get(100.0);
  c.table_teds_s_mean = table_teds_s.get(100.0);
  c.text_reward_mean = text_aggregate.get();
  c.vision_reward_mean = vision.get();
  c.format_alignment_mean = format.get();
  if (c.render_attempts > 0)
    c.exec_rate = 100.0 * static_cast<double>(c.render_successes) /
                  static_cast<double>(c.render_attempts);

  if (c.text_edit_mean && c.table_teds_mean && c.formula_score_mean) {
    c.overall = overall_score(*c.text_edit_mean, *c.table_teds_mean, *c.formula_score_mean);
  } else {
    std::string missing;
    if (!c.text_edit_mean) missing += " text";
    if (!c.table_teds_mean) missing += " table";
    if (!c.formula_score_mean) missing += " formula";
    report.warnings.push_back("overall score omitted: no records with component(s):" + missing);
  }
  return report;
}

namespace {

using Json = nlohmann::ordered_json;

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json text_json(const TextRewardBreakdown& t) {
  Json j;
  j["plain_text"] = opt(t.plain_text);
  j["formula"] = opt(t.formula);
  j["table"] = opt(t.table);
  j["table_teds"] = opt(t.table_teds);
  j["aggregate"] = t.aggregate;
  j["scoreable"] = t.scoreable;
  return j;
}

Json vision_json(const VisionBreakdown& v) {
  Json j;
  j["visual"] = opt(v.visual);
  j["global"] = opt(v.global);
  j["local_mean"] = opt(v.local_mean);
  j["format_alignment"] = v.format_alignment;
  j["expected_format"] = v.expected_format;
  j["detected_format"] = v.detected_format.empty() ? Json(nullptr) : Json(v.detected_format);
  j["render_attempted"] = v.render_attempted;
  j["render_succeeded"] = v.render_succeeded;
  j["render_status"] = v.render_status.empty() ? Json(nullptr) : Json(v.render_status);
  return j;
}

std::string fmt(const std::optional<double>& v, int precision) {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, *v);
  return buf;
}

}  // namespace

std::string report_to_json(const BenchReport& report) {
  const CorpusMetrics& c = report.corpus;
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  Json corpus;
  corpus["overall"] = opt(c.overall);
  corpus["text_edit_mean"] = opt(c.text_edit_mean);
  corpus["formula_score_mean"] = opt(c.formula_score_mean);
  corpus["table_teds_mean"] = opt(c.table_teds_mean);
  corpus["table_teds_s_mean"] = opt(c.table_teds_s_mean);
  corpus["text_reward_mean"] = opt(c.text_reward_mean);
  corpus["vision_reward_mean"] = opt(c.vision_reward_mean);
  corpus["format_alignment_mean"] = opt(c.format_alignment_mean);
  corpus["exec_rate"] = opt(c.exec_rate);
  corpus["render_attempts"] = c.render_attempts;
  corpus["render_successes"] = c.render_successes;
  j["corpus"] = std::move(corpus);

  Json counts = Json::object();
  for (const auto& [d, n] : report.domain_counts) counts[std::string(to_string(d))] = n;
  j["domain_counts"] = std::move(counts);

  Json records = Json::array();
  for (const auto& [id, r] : report.per_record) {
    Json rec;
    rec["id"] = id;
    rec["domain"] = std::string(to_string(r.domain));
    rec["text"] = r.text ? text_json(*r.text) : Json(nullptr);
    rec["vision"] = r.vision ? vision_json(*r.vision) : Json(nullptr);
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string report_to_table(const BenchReport& report) {
  const CorpusMetrics& c = report.corpus;
  std::ostringstream out;
  out << "records: " << report.per_record.size() << "\n";
  out << "  Overall              " << fmt(c.overall, 2) << "\n";
  out << "  Text edit (lower)    " << fmt(c.text_edit_mean, 3) << "\n";
  out << "  Formula (BLEU x100)  " << fmt(c.formula_score_mean, 2) << "\n";
  out << "  Table TEDS           " << fmt(c.table_teds_mean, 2) << "\n";
  out << "  Table TEDS-S         " << fmt(c.table_teds_s_mean, 2) << "\n";
  out << "  Text reward          " << fmt(c.text_reward_mean, 4) << "\n";
  out << "  Vision reward        " << fmt(c.vision_reward_mean, 4) << "\n";
  out << "  Format alignment     " << fmt(c.format_alignment_mean, 4) << "\n";
  out << "  Exec rate (%)        " << fmt(c.exec_rate, 2);
  if (c.render_attempts > 0) out << "  (" << c.render_successes << "/" << c.render_attempts << ")";
  out << "\n";
  out << "domains:";
  for (const auto& [d, n] : report.domain_counts)
    if (n > 0) out << " " << to_string(d) << "=" << n;
  out << "\n";
  if (!report.warnings.empty()) {
    out << "warnings (" << report.warnings.size() << "):\n";
    for (const auto& w : report.warnings) out << "  " << w << "\n";
  }
  return out.str();
}

}  // namespace docreward
