#include "soficlab/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "soficlab/complex.hpp"
#include "soficlab/error.hpp"
#include "soficlab/fflinalg.hpp"

namespace soficlab {

namespace {

void validate_group_table(const PatternSystem::Table& t, std::uint32_t q) {
  if (t.size() != q) throw InvalidInput("multiplication table must have one row per symbol");
  for (const auto& row : t) {
    if (row.size() != q) throw InvalidInput("multiplication table must be square");
    for (auto v : row)
      if (v >= q) throw InvalidInput("multiplication table entry out of range");
  }
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = 0; y < q; ++y)
      for (std::uint32_t z = 0; z < q; ++z)
        if (t[t[x][y]][z] != t[x][t[y][z]]) throw InvalidInput("multiplication table is not associative");
  std::optional<std::uint32_t> e;
  for (std::uint32_t x = 0; x < q && !e; ++x) {
    bool ok = true;
    for (std::uint32_t y = 0; y < q && ok; ++y) ok = t[x][y] == y && t[y][x] == y;
    if (ok) e = x;
  }
  if (!e) throw InvalidInput("multiplication table has no identity");
  for (std::uint32_t x = 0; x < q; ++x)
    if (std::find(t[x].begin(), t[x].end(), *e) == t[x].end())
      throw InvalidInput("multiplication table has an element without inverse");
}

void check_window(const std::vector<Word>& window) {
  if (window.empty()) throw InvalidInput("pattern window is empty");
  if (std::none_of(window.begin(), window.end(), [](const Word& w) { return w.is_identity(); }))
    throw InvalidInput("pattern window must contain the identity");
  std::vector<Word> sorted = window;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidInput("pattern window has repeated words");
}

}  // namespace

PatternSystem PatternSystem::explicit_patterns(std::uint32_t alphabet_size, std::vector<Word> window,
                                               std::set<Pattern> patterns, std::optional<Table> multiplication) {
  if (alphabet_size == 0) throw InvalidInput("alphabet must be nonempty");
  check_window(window);
  for (const auto& p : patterns) {
    if (p.size() != window.size()) throw InvalidInput("pattern length differs from window size");
    for (auto v : p)
      if (v >= alphabet_size) throw InvalidInput("pattern symbol out of range");
  }
  if (multiplication) validate_group_table(*multiplication, alphabet_size);
  PatternSystem ps;
  ps.alphabet_size_ = alphabet_size;
  ps.window_ = std::move(window);
  ps.patterns_ = std::move(patterns);
  ps.table_ = std::move(multiplication);
  return ps;
}

PatternSystem PatternSystem::kernel_condition(const GroupRingMatrix& m, std::uint32_t prime) {
  if (!is_prime(prime)) throw InvalidInput(std::to_string(prime) + " is not prime");
  if (m.rows() == 0) throw InvalidInput("kernel condition needs at least one component");
  PatternSystem ps;
  ps.prime_ = prime;
  ps.components_ = m.rows();
  std::uint64_t q = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    q *= prime;
    if (q > (std::uint64_t{1} << 24)) throw CapExceeded("kernel alphabet GF(p)^r is too large for the oracle");
  }
  ps.alphabet_size_ = static_cast<std::uint32_t>(q);

  std::map<Word, std::size_t> position;
  position.emplace(Word{}, 0);
  ps.window_.push_back(Word{});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (const auto& [h, c] : m.at(i, j).terms())
        if (position.emplace(h, ps.window_.size()).second) ps.window_.push_back(h);

  ps.equations_.resize(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (const auto& [h, c] : m.at(i, j).terms()) {
        Integer r = c % prime;
        if (r < 0) r += prime;
        if (r != 0) ps.equations_[j].push_back({position.at(h), i, static_cast<std::uint32_t>(r)});
      }

  ps.digits_.resize(ps.alphabet_size_);
  for (std::uint32_t x = 0; x < ps.alphabet_size_; ++x) {
    std::uint32_t v = x;
    for (std::size_t i = 0; i < ps.components_; ++i) {
      ps.digits_[x].push_back(v % prime);
      v /= prime;
    }
  }
  return ps;
}

std::uint32_t PatternSystem::identity() const {
  if (!table_) return 0;
  const auto& t = *table_;
  for (std::uint32_t x = 0; x < alphabet_size_; ++x)
    if (t[x][x] == x) return x;
  return 0;
}

std::uint32_t PatternSystem::multiply(std::uint32_t x, std::uint32_t y) const {
  if (!table_) throw InvalidInput("pattern system has no group structure");
  return (*table_).at(x).at(y);
}

bool PatternSystem::allows(const Pattern& pattern) const {
  if (!is_linear()) return patterns_.contains(pattern);
  for (const auto& eq : equations_) {
    std::uint64_t sum = 0;
    for (const auto& t : eq) sum += static_cast<std::uint64_t>(t.coeff) * digits_[pattern[t.position]][t.component];
    if (sum % prime_ != 0) return false;
  }
  return true;
}

namespace {

class Search {
 public:
  Search(const PatternSystem& ps, const SoficApproximation& s) : ps_(ps), n_(s.size()) {
    order_ = bfs_order(s);
    std::vector<std::size_t> rank(n_);
    for (std::size_t k = 0; k < n_; ++k) rank[order_[k]] = k;

    const auto& window = ps.window();
    support_.assign(n_, std::vector<std::uint32_t>(window.size()));
    checks_at_.resize(n_);
    for (std::uint32_t delta = 0; delta < n_; ++delta) {
      std::size_t last = 0;
      for (std::size_t w = 0; w < window.size(); ++w) {
        const std::uint32_t pt = s.apply(window[w], delta);
        support_[delta][w] = pt;
        last = std::max(last, rank[pt]);
      }
      checks_at_[last].push_back(delta);
    }
    label_.assign(n_, 0);
    pattern_.resize(window.size());
  }

  std::uint64_t count() { return descend(0); }

 private:
  static std::vector<std::uint32_t> bfs_order(const SoficApproximation& s) {
    const std::size_t n = s.size();
    std::vector<bool> seen(n, false);
    std::vector<std::uint32_t> order;
    order.reserve(n);
    for (std::uint32_t root = 0; root < n; ++root) {
      if (seen[root]) continue;
      std::deque<std::uint32_t> queue{root};
      seen[root] = true;
      while (!queue.empty()) {
        const std::uint32_t x = queue.front();
        queue.pop_front();
        order.push_back(x);
        for (std::uint32_t g = 0; g < s.rank(); ++g)
          for (bool inv : {false, true}) {
            const std::uint32_t y = s.apply(Letter{g, inv}, x);
            if (!seen[y]) {
              seen[y] = true;
              queue.push_back(y);
            }
          }
      }
    }
    return order;
  }

  bool consistent(std::size_t k) {
    for (std::uint32_t delta : checks_at_[k]) {
      for (std::size_t w = 0; w < pattern_.size(); ++w) pattern_[w] = label_[support_[delta][w]];
      if (!ps_.allows(pattern_)) return false;
    }
    return true;
  }

  std::uint64_t descend(std::size_t k) {
    if (k == n_) return 1;
    const std::uint32_t pt = order_[k];
    std::uint64_t total = 0;
    for (std::uint32_t x = 0; x < ps_.alphabet_size(); ++x) {
      label_[pt] = x;
      if (consistent(k)) total += descend(k + 1);
    }
    return total;
  }

  const PatternSystem& ps_;
  std::size_t n_;
  std::vector<std::uint32_t> order_;
  std::vector<std::vector<std::uint32_t>> support_;
  std::vector<std::vector<std::uint32_t>> checks_at_;  // BFS position -> constraints completed there
  std::vector<std::uint32_t> label_;
  PatternSystem::Pattern pattern_;
};

std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

}  // namespace

std::uint64_t brute_force_fix_count(const PatternSystem& ps, const SoficApproximation& s, std::uint64_t cap) {
  const std::uint64_t space = checked_power(ps.alphabet_size(), s.size(), cap);
  if (space > cap)
    throw CapExceeded("oracle search space |K|^N = " + std::to_string(ps.alphabet_size()) + "^" +
                      std::to_string(s.size()) + " exceeds cap " + std::to_string(cap));
  for (const auto& w : ps.window())
    for (const auto& x : w.letters())
      if (x.gen >= s.rank()) throw InvalidInput("pattern window uses a generator the level does not have");
  return Search(ps, s).count();
}

OracleCheck cross_check_kernel(const GroupRingMatrix& m, const SoficApproximation& s, std::uint32_t prime,
                               std::uint64_t cap) {
  const PatternSystem ps = PatternSystem::kernel_condition(m, prime);
  OracleCheck out;
  out.brute_count = brute_force_fix_count(ps, s, cap);
  out.kernel_dim = rank_gf(sigma_matrix(m, s, prime)).kernel_dim;
  out.linear_count = checked_power(prime, out.kernel_dim, cap);
  if (out.linear_count != out.brute_count) throw OracleMismatch(out.linear_count, out.brute_count);
  return out;
}

}  // namespace soficlab
