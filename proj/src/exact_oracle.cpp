#include "gcrp/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gcrp/error.hpp"
#include "gcrp/normalizers.hpp"
#include "gcrp/stats.hpp"

namespace gcrp {
namespace {

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

Shape join_part(const Shape& s, std::size_t index) {
  Shape out = s;
  ++out[index];
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Shape add_part(const Shape& s) {
  Shape out = s;
  out.push_back(1);
  return out;
}

void fill_marginals(ExactLaw& law, const ModelParams& params) {
  std::map<std::int64_t, Kahan> v, mean_count;
  std::map<std::int64_t, std::map<std::int64_t, Kahan>> counts;
  Kahan mean_v;
  for (const auto& [shape, p] : law.probs) {
    const auto parts = static_cast<std::int64_t>(shape.size());
    v[parts].add(p);
    mean_v.add(p * static_cast<double>(parts));
    std::map<std::int64_t, std::int64_t> by_size;
    for (auto s : shape) ++by_size[s];
    for (std::int64_t k = 1; k <= law.n; ++k) {
      const auto it = by_size.find(k);
      const std::int64_t c = it == by_size.end() ? 0 : it->second;
      counts[k][c].add(p);
      mean_count[k].add(p * static_cast<double>(c));
    }
  }
  law.v_marginal.clear();
  law.count_marginal.clear();
  law.mean_count.clear();
  for (auto& [key, acc] : v) law.v_marginal[key] = acc.sum;
  for (auto& [k, m] : counts) {
    for (auto& [c, acc] : m) law.count_marginal[k][c] = acc.sum;
  }
  for (auto& [k, acc] : mean_count) law.mean_count[k] = acc.sum;
  law.mean_v = mean_v.sum;
  law.mean_v_over_phi = params.polynomial() ? law.mean_v / phi(law.n, params) : 0.0;
}

}  // namespace

SizeClassState shape_to_state(const Shape& shape) {
  SizeClassState st;
  for (auto s : shape) {
    ++st.counts[s];
    st.n += s;
  }
  st.num_parts = static_cast<std::int64_t>(shape.size());
  return st;
}

Shape state_to_shape(const SizeClassState& state) {
  Shape s;
  for (auto it = state.counts.rbegin(); it != state.counts.rend(); ++it) {
    s.insert(s.end(), static_cast<std::size_t>(it->second), it->first);
  }
  return s;
}

double ExactLaw::total() const {
  Kahan k;
  for (const auto& [s, p] : probs) k.add(p);
  return k.sum;
}

std::int64_t ShapeHistogram::total() const {
  std::int64_t t = 0;
  for (const auto& [s, c] : counts) t += c;
  return t;
}

ExactLaw push_forward(const ExactLaw& law, const ModelParams& params) {
  const double a = params.alpha();
  const double t = params.theta();
  const auto n = static_cast<double>(law.n);
  std::map<Shape, Kahan> next;
  Kahan mean_increment;  // E[zeta_{n+1}] in the V decomposition
  const double phi_next = params.polynomial() ? phi(law.n + 1, params) : 1.0;
  for (const auto& [shape, p] : law.probs) {
    const auto parts = static_cast<double>(shape.size());
    const double p_new = (a * parts + t) / (n + t);
    if (p_new > 0.0) next[add_part(shape)].add(p * p_new);
    for (std::size_t i = 0; i < shape.size(); ++i) {
      // Parts are treated individually; equal sizes land on the same shape.
      const double w = (static_cast<double>(shape[i]) - a) / (n + t);
      if (w > 0.0) next[join_part(shape, i)].add(p * w);
    }
    mean_increment.add(p * (p_new * (1.0 - p_new) + (1.0 - p_new) * (0.0 - p_new)) / phi_next);
  }
  ExactLaw out;
  out.n = law.n + 1;
  for (auto& [s, acc] : next) out.probs.emplace(s, acc.sum);
  out.mean_martingale = params.polynomial() ? law.mean_martingale + mean_increment.sum : 0.0;
  fill_marginals(out, params);
  return out;
}

std::vector<ExactLaw> enumerate(const ModelParams& params, std::int64_t n_max, std::int64_t cap) {
  if (n_max < 1) throw DomainError("enumerate: n_max must be >= 1");
  if (n_max > cap) {
    throw CapExceeded("enumerate: n_max " + std::to_string(n_max) + " exceeds cap " + std::to_string(cap));
  }
  std::vector<ExactLaw> laws;
  ExactLaw first;
  first.n = 1;
  first.probs[{1}] = 1.0;
  fill_marginals(first, params);
  laws.push_back(std::move(first));
  while (laws.back().n < n_max) laws.push_back(push_forward(laws.back(), params));
  return laws;
}

OracleComparison compare_to_mc(const ExactLaw& exact, const ShapeHistogram& samples) {
  if (samples.n != exact.n) throw DomainError("compare_to_mc: histogram and law differ in n");
  OracleComparison out;
  out.samples = samples.total();
  if (out.samples == 0) throw DomainError("compare_to_mc: empty histogram");
  const auto total = static_cast<double>(out.samples);

  std::map<std::int64_t, double> emp_v, emp_n1;
  std::map<std::int64_t, std::int64_t> obs_v;
  double tv_shape = 0.0;
  for (const auto& [shape, c] : samples.counts) {
    const double f = static_cast<double>(c) / total;
    const auto parts = static_cast<std::int64_t>(shape.size());
    emp_v[parts] += f;
    obs_v[parts] += c;
    emp_n1[std::count(shape.begin(), shape.end(), 1)] += f;
    auto it = exact.probs.find(shape);
    tv_shape += std::abs(f - (it == exact.probs.end() ? 0.0 : it->second));
  }
  for (const auto& [shape, p] : exact.probs) {
    if (samples.counts.find(shape) == samples.counts.end()) tv_shape += p;
  }
  out.tv_shape = 0.5 * tv_shape;
  out.tv_v = stats::tv_distance(emp_v, exact.v_marginal);
  out.tv_n1 = stats::tv_distance(emp_n1, exact.count_marginal.at(1));
  out.chi_square_p_v = stats::chi_square_gof(obs_v, exact.v_marginal).p_value;
  out.chi_square_p_shape = stats::chi_square_gof(samples.counts, exact.probs).p_value;
  return out;
}

}  // namespace gcrp
