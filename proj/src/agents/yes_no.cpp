#include "crn/agents/yes_no.hpp"

#include "crn/errors.hpp"

#include <cctype>
#include <cmath>
#include <optional>

namespace crn {

std::string normalize_token(std::string_view token) {
  std::string s(token);
  for (std::string_view marker : {std::string_view("\xE2\x96\x81"), std::string_view("\xC4\xA0")}) {
    for (auto pos = s.find(marker); pos != std::string::npos; pos = s.find(marker)) s.erase(pos, marker.size());
  }
  std::string out;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  while (!out.empty() && (out.back() == '.' || out.back() == ',' || out.back() == '!')) out.pop_back();
  return out;
}

double yes_probability(double logprob_yes, double logprob_no) {
  double d = logprob_yes - logprob_no;
  if (d >= 0.0) return 1.0 / (1.0 + std::exp(-d));
  return 1.0 - 1.0 / (1.0 + std::exp(d));
}

YesNoScore score_yes_no(const AgentReply& reply, double missing_gap) {
  std::optional<double> yes, no;
  for (const auto& alt : reply.first_token_alternatives) {
    auto t = normalize_token(alt.token);
    if (t == "yes" && (!yes || alt.logprob > *yes)) yes = alt.logprob;
    if (t == "no" && (!no || alt.logprob > *no)) no = alt.logprob;
  }
  if (!yes && !no) throw VerifierUnusable("neither \"yes\" nor \"no\" among first-token alternatives");
  YesNoScore out;
  out.degraded = !yes || !no;
  if (!yes) yes = *no - missing_gap;
  if (!no) no = *yes - missing_gap;
  out.p_yes = yes_probability(*yes, *no);
  return out;
}

}  // namespace crn
