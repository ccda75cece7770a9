#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace gcrp::stats {

template <class Key>
ChiSquare chi_square_gof(const std::map<Key, std::int64_t>& observed, const std::map<Key, double>& probs,
                         double min_expected) {
  std::int64_t total = 0;
  for (const auto& [key, count] : observed) total += count;
  ChiSquare out;
  if (total == 0) return out;
  for (const auto& [key, count] : observed) {
    if (count > 0 && probs.find(key) == probs.end()) {
      out.statistic = std::numeric_limits<double>::infinity();
      out.p_value = 0.0;
      return out;
    }
  }
  const auto n = static_cast<double>(total);
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double obs = 0.0;
  double exp = 0.0;
  for (const auto& [key, p] : probs) {
    auto it = observed.find(key);
    obs += it == observed.end() ? 0.0 : static_cast<double>(it->second);
    exp += p * n;
    if (exp >= min_expected) {
      cells.emplace_back(obs, exp);
      obs = exp = 0.0;
    }
  }
  if (exp > 0.0 || obs > 0.0) {
    if (cells.empty()) {
      cells.emplace_back(obs, exp);
    } else {
      cells.back().first += obs;
      cells.back().second += exp;
    }
  }
  for (const auto& [o, e] : cells) {
    if (e > 0.0) out.statistic += (o - e) * (o - e) / e;
  }
  out.dof = std::max(static_cast<int>(cells.size()) - 1, 0);
  out.p_value = out.dof == 0 ? 1.0 : chi_square_survival(out.statistic, out.dof);
  return out;
}

}  // namespace gcrp::stats
