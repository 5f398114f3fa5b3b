#include "crn/metrics/report.hpp"

#include "crn/errors.hpp"

#include <fmt/format.h>

#include <cmath>

#ifndef CRN_DATA_DIR
#define CRN_DATA_DIR "data"
#endif

namespace crn {
namespace {

std::vector<double> row_of(const json& published, const std::string& model, const std::string& method,
                           const std::string& path) {
  const auto& acc = require_field(published, "accuracy", "published");
  const auto& m = require_field(acc, model, path);
  const auto& arr = require_array(m, method, path + "." + model);
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw SchemaError(path + "." + model + "." + method + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

int decimals_of(double v) {
  for (int d = 0; d < 6; ++d) {
    double scaled = v * std::pow(10.0, d);
    if (std::abs(scaled - std::round(scaled)) < 1e-9) return d;
  }
  return 6;
}

// A reported value is reproduced when the recomputation rounds to it.
bool reproduces(double recomputed, double reported) {
  double unit = std::pow(10.0, -decimals_of(reported));
  return std::abs(recomputed - reported) <= 0.5 * unit + 1e-12;
}

std::string fixed(double v, int places = 2) { return fmt::format("{:.{}f}", v, places); }

}  // namespace

std::vector<RecomputedTest> recompute_paired_tests(const json& published) {
  std::vector<RecomputedTest> out;
  const auto& tests = require_array(published, "paired_tests", "published");
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const auto path = "published.paired_tests[" + std::to_string(i) + "]";
    const auto& t = tests[i];
    RecomputedTest r;
    r.comparison = require_string(t, "comparison", path);
    r.model = require_string(t, "model", path);
    auto a = row_of(published, r.model, require_string(t, "a", path), "published.accuracy");
    auto b = row_of(published, r.model, require_string(t, "b", path), "published.accuracy");
    r.recomputed = paired_ttest(a, b);
    r.reported = t.value("reported", json::object());
    const auto& rc = r.recomputed;
    auto check = [&](const char* key, double value) {
      if (r.reported.contains(key) && r.reported[key].is_number() && !reproduces(value, r.reported[key].get<double>()))
        r.mismatches.push_back(key);
    };
    check("mean_diff", rc.mean_diff);
    check("sd", rc.sd);
    check("t", rc.t);
    check("p", rc.p);
    check("cohens_d", rc.cohens_d);
    if (r.reported.contains("ci95") && r.reported["ci95"].is_array() && r.reported["ci95"].size() == 2) {
      if (!reproduces(rc.ci_low, r.reported["ci95"][0].get<double>()) ||
          !reproduces(rc.ci_high, r.reported["ci95"][1].get<double>()))
        r.mismatches.push_back("ci95");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string render_report(const json& published, const json& run) {
  auto tests = recompute_paired_tests(published);
  json block;
  block["paired_tests"] = json::array();
  for (const auto& t : tests) {
    block["paired_tests"].push_back({{"comparison", t.comparison},
                                     {"model", t.model},
                                     {"recomputed", ttest_to_json(t.recomputed)},
                                     {"reported", t.reported},
                                     {"mismatches", t.mismatches}});
  }
  block["accuracy"] = published.at("accuracy");
  if (!run.is_null()) block["run"] = run;

  std::string out = "# Results report\n\n```json\n" + block.dump(2) + "\n```\n\n";

  std::vector<std::string> datasets = published.value("datasets", std::vector<std::string>{});
  json methods = published.value("methods", json{{"s1", "S1"}, {"sllm", "S-LLM"}, {"crn", "CRN"}});
  out += "## Accuracy (%)\n\n";
  std::string header = fmt::format("{:<14}", "Model");
  for (const auto& d : datasets) {
    for (const auto& [key, name] : methods.items())
      header += fmt::format(" {:>10}", d.substr(0, 5) + "/" + name.get<std::string>());
  }
  out += "```\n" + header + "\n";
  for (const auto& [model, cols] : published.at("accuracy").items()) {
    std::string line = fmt::format("{:<14}", model);
    for (std::size_t i = 0; i < datasets.size(); ++i) {
      for (const auto& [key, _] : methods.items()) {
        const auto& arr = cols.at(key);
        line += fmt::format(" {:>10}", i < arr.size() ? fixed(arr[i].get<double>()) : "-");
      }
    }
    out += line + "\n";
  }
  out += "```\n\n## Paired two-sided t-tests\n\n```\n";
  out += fmt::format("{:<14} {:<13} {:>8} {:>6} {:>6} {:>7} {:>16} {:>6}  {}\n", "Comparison", "Source", "Delta",
                     "SD", "t", "p", "95% CI", "d", "Sig.");
  for (const auto& t : tests) {
    const auto& r = t.recomputed;
    out += fmt::format("{:<14} {:<13} {:>8} {:>6} {:>6} {:>7} {:>16} {:>6}  {}\n", t.comparison, "recomputed",
                       fmt::format("{:+.3f}", r.mean_diff), fixed(r.sd), fixed(r.t), fixed(r.p, 3),
                       fmt::format("[{}, {}]", fixed(r.ci_low, 1), fixed(r.ci_high, 1)), fixed(r.cohens_d),
                       r.p < 0.05 ? "Yes" : "No");
    const auto& rep = t.reported;
    auto num = [&](const char* k, int places) {
      return rep.contains(k) ? fixed(rep[k].get<double>(), places) : std::string("-");
    };
    std::string ci = "-";
    if (rep.contains("ci95") && rep["ci95"].size() == 2)
      ci = fmt::format("[{}, {}]", fixed(rep["ci95"][0].get<double>(), 1), fixed(rep["ci95"][1].get<double>(), 1));
    out += fmt::format("{:<14} {:<13} {:>8} {:>6} {:>6} {:>7} {:>16} {:>6}\n", "", "reported",
                       rep.contains("mean_diff") ? fmt::format("{:+.2f}", rep["mean_diff"].get<double>()) : "-",
                       num("sd", 2), num("t", 2), num("p", 3), ci, num("cohens_d", 2));
  }
  out += "```\n\n";
  bool any = false;
  for (const auto& t : tests) {
    if (t.mismatches.empty()) continue;
    if (!any) out += "## Discrepancies\n\n";
    any = true;
    std::string fields;
    for (const auto& f : t.mismatches) fields += (fields.empty() ? "" : ", ") + f;
    out += fmt::format(
        "- {} ({}): recomputing from the accuracy table does not reproduce the reported {}. The recomputed "
        "values above come from the rounded accuracies shown in the table.\n",
        t.comparison, t.model, fields);
  }
  if (any) out += "\n";

  if (!run.is_null()) out += "## Local run\n\n```json\n" + run.dump(2) + "\n```\n";
  return out;
}

std::filesystem::path default_published_path() {
  return std::filesystem::path(CRN_DATA_DIR) / "published_accuracies.json";
}

}  // namespace crn
