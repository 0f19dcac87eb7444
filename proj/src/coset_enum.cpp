#include <algorithm>
#include <deque>
#include <numeric>

#include "soficlab/error.hpp"
#include "soficlab/sofic.hpp"

namespace soficlab {

CosetTable::CosetTable(std::size_t rank, std::size_t index, std::vector<std::uint32_t> entries)
    : rank_(rank), index_(index), entries_(std::move(entries)) {
  if (entries_.size() != index_ * columns()) throw InvalidInput("coset table has wrong shape");
}

std::uint32_t CosetTable::trace(std::uint32_t coset, const Word& w) const {
  for (const Letter& x : w.letters()) coset = at(coset, x);
  return coset;
}

bool CosetTable::is_valid_for(const Presentation& presentation) const {
  const auto cols = columns();
  for (std::uint32_t c = 0; c < index_; ++c)
    for (std::size_t x = 0; x < cols; ++x) {
      const std::uint32_t d = entries_[c * cols + x];
      if (d >= index_) return false;
      if (entries_[d * cols + (x ^ 1)] != c) return false;
    }
  for (std::uint32_t c = 0; c < index_; ++c)
    for (const Word& r : presentation.relators)
      if (trace(c, r) != c) return false;
  std::vector<bool> seen(index_, false);
  std::deque<std::uint32_t> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const auto c = queue.front();
    queue.pop_front();
    for (std::size_t x = 0; x < cols; ++x) {
      const auto d = entries_[c * cols + x];
      if (!seen[d]) {
        seen[d] = true;
        ++reached;
        queue.push_back(d);
      }
    }
  }
  return reached == index_;
}

namespace {

// Holt-style HLT enumeration over a fixed index space of `cap` cosets.
class Enumerator {
 public:
  static constexpr std::int64_t kUndefined = -1;

  Enumerator(const Presentation& pres, std::size_t cap)
      : cols_(2 * pres.alphabet.rank()), cap_(cap) {
    for (const Word& r : pres.relators) relators_.push_back(to_columns(r));
    for (const auto& r : relators_) per_coset_budget_ += r.size();
    table_.reserve(std::min<std::size_t>(cap_, 1u << 16) * cols_);
    new_coset();
  }

  std::vector<std::size_t> to_columns(const Word& w) const {
    std::vector<std::size_t> out;
    for (const Letter& x : w.letters()) out.push_back(CosetTable::column_of(x));
    return out;
  }

  CosetTable run(std::span<const Word> subgroup_generators) {
    for (const Word& h : subgroup_generators) {
      const auto cols = to_columns(h);
      ensure_room(0, cols.size());
      scan_and_fill(0, cols);
    }
    for (std::size_t c = 0; c < next_; ++c) {
      if (!alive(c)) continue;
      c = ensure_room(c, per_coset_budget_ + cols_);
      for (const auto& r : relators_) {
        scan_and_fill(c, r);
        if (!alive(c)) break;
      }
      if (!alive(c)) continue;
      for (std::size_t x = 0; x < cols_; ++x)
        if (entry(c, x) == kUndefined) define(c, x);
    }
    compact();
    std::vector<std::uint32_t> entries(table_.size());
    for (std::size_t k = 0; k < table_.size(); ++k) entries[k] = static_cast<std::uint32_t>(table_[k]);
    return CosetTable(cols_ / 2, next_, std::move(entries));
  }

 private:
  std::int64_t& entry(std::size_t c, std::size_t x) { return table_[c * cols_ + x]; }
  bool alive(std::size_t c) const { return forward_[c] == static_cast<std::int64_t>(c); }

  std::size_t new_coset() {
    const std::size_t c = next_++;
    table_.resize(next_ * cols_, kUndefined);
    forward_.push_back(static_cast<std::int64_t>(c));
    ++live_;
    return c;
  }

  void define(std::size_t c, std::size_t x) {
    if (next_ >= cap_) throw CapExceeded("coset enumeration exceeded cap of " + std::to_string(cap_) + " cosets");
    const std::size_t d = new_coset();
    entry(c, x) = static_cast<std::int64_t>(d);
    entry(d, x ^ 1) = static_cast<std::int64_t>(c);
  }

  // Guarantees `needed` free coset slots before processing coset c, running a
  // lookahead pass and compacting when space is short. Returns c renumbered.
  std::size_t ensure_room(std::size_t c, std::size_t needed) {
    if (next_ + needed <= cap_) return c;
    lookahead();
    if (!alive(c)) c = static_cast<std::size_t>(rep(c));
    c = compact(c);
    if (next_ + needed > cap_)
      throw CapExceeded("coset enumeration exceeded cap of " + std::to_string(cap_) + " cosets");
    return c;
  }

  void lookahead() {
    for (std::size_t c = 0; c < next_; ++c) {
      for (const auto& r : relators_) {
        if (!alive(c)) break;
        scan_only(c, r);
      }
    }
  }

  std::int64_t rep(std::size_t c) {
    std::size_t root = c;
    while (forward_[root] != static_cast<std::int64_t>(root)) root = static_cast<std::size_t>(forward_[root]);
    while (forward_[c] != static_cast<std::int64_t>(root)) {
      const auto next = static_cast<std::size_t>(forward_[c]);
      forward_[c] = static_cast<std::int64_t>(root);
      c = next;
    }
    return static_cast<std::int64_t>(root);
  }

  void merge(std::size_t a, std::size_t b) {
    const auto ra = rep(a), rb = rep(b);
    if (ra == rb) return;
    const auto lo = std::min(ra, rb), hi = std::max(ra, rb);
    forward_[static_cast<std::size_t>(hi)] = lo;
    --live_;
    queue_.push_back(static_cast<std::size_t>(hi));
  }

  void coincidence(std::size_t a, std::size_t b) {
    queue_.clear();
    merge(a, b);
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      const std::size_t g = queue_[qi];
      for (std::size_t x = 0; x < cols_; ++x) {
        const std::int64_t d = entry(g, x);
        if (d == kUndefined) continue;
        entry(static_cast<std::size_t>(d), x ^ 1) = kUndefined;
        entry(g, x) = kUndefined;
        const auto mu = static_cast<std::size_t>(rep(g));
        const auto nu = static_cast<std::size_t>(rep(static_cast<std::size_t>(d)));
        if (entry(mu, x) != kUndefined) {
          merge(nu, static_cast<std::size_t>(entry(mu, x)));
        } else if (entry(nu, x ^ 1) != kUndefined) {
          merge(mu, static_cast<std::size_t>(entry(nu, x ^ 1)));
        } else {
          entry(mu, x) = static_cast<std::int64_t>(nu);
          entry(nu, x ^ 1) = static_cast<std::int64_t>(mu);
        }
      }
    }
  }

  // Without Fill, a scan that leaves a gap of more than one letter is a no-op.
  template <bool Fill>
  void scan(std::size_t alpha, const std::vector<std::size_t>& w) {
    if (w.empty()) return;
    std::size_t f = alpha, b = alpha;
    std::size_t i = 0, j = w.size();  // unscanned letters are w[i..j)
    while (true) {
      while (i < j && entry(f, w[i]) != kUndefined) f = static_cast<std::size_t>(entry(f, w[i++]));
      if (i == j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j > i && entry(b, w[j - 1] ^ 1) != kUndefined) b = static_cast<std::size_t>(entry(b, w[--j] ^ 1));
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        entry(f, w[i]) = static_cast<std::int64_t>(b);
        entry(b, w[i] ^ 1) = static_cast<std::int64_t>(f);
        return;
      }
      if constexpr (!Fill) return;
      define(f, w[i]);
    }
  }

  void scan_and_fill(std::size_t alpha, const std::vector<std::size_t>& w) { scan<true>(alpha, w); }
  void scan_only(std::size_t alpha, const std::vector<std::size_t>& w) { scan<false>(alpha, w); }

  // Renumbers live cosets 0..live-1 in index order; returns the new index of c.
  std::size_t compact(std::size_t c = 0) {
    std::vector<std::int64_t> renumber(next_, kUndefined);
    std::size_t n = 0;
    for (std::size_t k = 0; k < next_; ++k)
      if (alive(k)) renumber[k] = static_cast<std::int64_t>(n++);
    std::vector<std::int64_t> table(n * cols_, kUndefined);
    for (std::size_t k = 0; k < next_; ++k) {
      if (!alive(k)) continue;
      for (std::size_t x = 0; x < cols_; ++x) {
        const auto d = entry(k, x);
        if (d != kUndefined)
          table[static_cast<std::size_t>(renumber[k]) * cols_ + x] =
              renumber[static_cast<std::size_t>(rep(static_cast<std::size_t>(d)))];
      }
    }
    const std::size_t new_c = static_cast<std::size_t>(renumber[c]);
    table_ = std::move(table);
    next_ = n;
    live_ = n;
    forward_.resize(n);
    std::iota(forward_.begin(), forward_.end(), std::int64_t{0});
    return new_c;
  }

  std::size_t cols_;
  std::size_t cap_;
  std::vector<std::vector<std::size_t>> relators_;
  std::size_t per_coset_budget_ = 0;
  std::vector<std::int64_t> table_;
  std::vector<std::int64_t> forward_;
  std::vector<std::size_t> queue_;
  std::size_t next_ = 0;
  std::size_t live_ = 0;
};

}  // namespace

CosetTable todd_coxeter(const Presentation& presentation, std::span<const Word> subgroup_generators,
                        std::size_t coset_cap) {
  if (coset_cap == 0) throw InvalidInput("coset cap must be at least 1");
  Enumerator e(presentation, coset_cap);
  return e.run(subgroup_generators);
}

}  // namespace soficlab
