#include "gcrp/chain.hpp"

#include <algorithm>
#include <bit>

#include "gcrp/error.hpp"

namespace gcrp {

SizeClassSampler::SizeClassSampler(std::int64_t capacity_hint)
    : capacity_(std::max<std::int64_t>(capacity_hint, 1)),
      counts_(capacity_ + 1, 0),
      tree_(capacity_ + 1) {}

void SizeClassSampler::grow(std::int64_t min_capacity) {
  std::int64_t cap = capacity_;
  while (cap < min_capacity) cap *= 2;
  capacity_ = cap;
  counts_.resize(cap + 1, 0);
  tree_.assign(cap + 1, Node{});
  rebuild();
}

void SizeClassSampler::rebuild() {
  tree_.assign(capacity_ + 1, Node{});
  for (std::int64_t i = 1; i <= capacity_; ++i) {
    tree_[i].mass += i * counts_[i];
    tree_[i].parts += counts_[i];
    const std::int64_t parent = i + (i & -i);
    if (parent <= capacity_) {
      tree_[parent].mass += tree_[i].mass;
      tree_[parent].parts += tree_[i].parts;
    }
  }
}

void SizeClassSampler::add(std::int64_t k, std::int64_t delta) {
  if (k > capacity_) grow(k);
  counts_[k] += delta;
  if (delta > 0 && k > max_size_) {
    max_size_ = k;
  } else if (k == max_size_ && counts_[k] == 0) {
    while (max_size_ > 0 && counts_[max_size_] == 0) --max_size_;
  }
  const std::int64_t dmass = k * delta;
  for (std::int64_t i = k; i <= capacity_; i += i & -i) {
    tree_[i].mass += dmass;
    tree_[i].parts += delta;
  }
}

std::int64_t SizeClassSampler::find(double u, double alpha) const {
  std::int64_t pos = 0;
  double rem = u;
  for (std::int64_t step = std::bit_floor(static_cast<std::uint64_t>(capacity_)); step > 0;
       step >>= 1) {
    const std::int64_t next = pos + step;
    if (next > capacity_) continue;
    const Node& node = tree_[next];
    const double w = static_cast<double>(node.mass) - alpha * static_cast<double>(node.parts);
    if (w <= rem) {
      pos = next;
      rem -= w;
    }
  }
  const std::int64_t k = pos + 1;
  return (k <= capacity_ && counts_[k] > 0) ? k : 0;
}

Chain::Chain(const ModelParams& params, std::int64_t capacity_hint)
    : params_(params), sampler_(capacity_hint) {
  sampler_.add(1, 1);
}

double Chain::new_part_prob() const {
  return (params_.alpha() * static_cast<double>(num_parts_) + params_.theta()) /
         (static_cast<double>(n_) + params_.theta());
}

double Chain::join_prob(std::int64_t k) const {
  return (static_cast<double>(k) - params_.alpha()) * static_cast<double>(count(k)) /
         (static_cast<double>(n_) + params_.theta());
}

Move Chain::sample(Rng& rng) const {
  const double alpha = params_.alpha();
  const double join_total = static_cast<double>(n_) - alpha * static_cast<double>(num_parts_);
  const double total = static_cast<double>(n_) + params_.theta();
  for (;;) {
    const double u = rng.uniform() * total;
    if (u >= join_total) return Move::new_part();
    // A zero return means floating-point drift between the node sums and
    // join_total landed on an empty class (probability ~1e-16); redraw.
    if (const std::int64_t k = sampler_.find(u, alpha); k != 0) return Move::join(k);
  }
}

void Chain::apply(const Move& move) {
  if (move.is_new_part()) {
    sampler_.add(1, 1);
    ++num_parts_;
  } else {
    if (sampler_.count(move.size) <= 0) {
      throw IllegalMove("IllegalMove: no part of size " + std::to_string(move.size));
    }
    // Grow first so max_size never has to scan down past the joined class.
    sampler_.add(move.size + 1, 1);
    sampler_.add(move.size, -1);
  }
  ++n_;
}

SizeClassState Chain::to_state() const {
  SizeClassState state{n_, {}, num_parts_};
  for (std::int64_t k = 1; k <= sampler_.max_size(); ++k) {
    if (const auto c = sampler_.count(k); c > 0) state.counts[k] = c;
  }
  return state;
}

}  // namespace gcrp
