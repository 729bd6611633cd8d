#include "aasg/multiindex.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aasg {

int MultiIndex::total_degree() const {
  int s = 0;
  for (int d : deg) s += d;
  return s;
}

std::vector<int> MultiIndex::support() const {
  std::vector<int> out;
  for (std::size_t t = 0; t < deg.size(); ++t)
    if (deg[t] != 0) out.push_back(static_cast<int>(t) + 1);
  return out;
}

bool AnovaSet::contains(int dim) const {
  return std::binary_search(members.begin(), members.end(), dim);
}

std::string to_string(const MultiIndex& mi) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < mi.deg.size(); ++i) {
    if (i) os << ',';
    os << mi.deg[i];
  }
  os << ')';
  return os.str();
}

std::string to_string(const AnovaSet& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    if (i) os << ',';
    os << s.members[i];
  }
  os << '}';
  return os.str();
}

std::vector<AnovaSet> enumerate_anova_sets(int k, int N) {
  if (k < 0 || N < 0 || k > N)
    throw std::domain_error("enumerate_anova_sets: need 0 <= k <= N");
  std::vector<AnovaSet> out;
  if (k == 0) {
    out.push_back(AnovaSet{});
    return out;
  }
  // Lexicographic successor walk over k-combinations of {1..N}.
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i + 1;
  while (true) {
    out.push_back(AnovaSet{c});
    int i = k - 1;
    while (i >= 0 && c[i] == N - (k - 1 - i)) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

std::vector<MultiIndex> component_multiindices(const AnovaSet& T, int p, int N) {
  for (int t : T.members)
    if (t < 1 || t > N)
      throw std::invalid_argument("component_multiindices: set not within {1..N}");
  const int k = T.order();
  std::vector<MultiIndex> out;
  if (k > p) return out;  // no index of degree <= p has k nonzero slots
  if (k == 0) {
    out.push_back(MultiIndex{std::vector<int>(N, 0)});
    return out;
  }
  // Degree >= 1 on each member of T, zero elsewhere, total degree <= p.
  std::vector<int> d(k, 1);
  auto recurse = [&](auto&& self, int pos, int used) -> void {
    if (pos == k) {
      MultiIndex mi{std::vector<int>(N, 0)};
      for (int i = 0; i < k; ++i) mi.deg[T.members[i] - 1] = d[i];
      out.push_back(std::move(mi));
      return;
    }
    const int remaining_mins = k - pos - 1;
    for (int v = 1; used + v + remaining_mins <= p; ++v) {
      d[pos] = v;
      self(self, pos + 1, used + v);
    }
  };
  recurse(recurse, 0, 0);
  std::sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
    const int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    return a.deg < b.deg;
  });
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > UINT64_MAX / num) return UINT64_MAX;
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::ptrdiff_t IndexCatalog::position(const MultiIndex& mi) const {
  auto it = position_.find(mi);
  return it == position_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

bool IndexCatalog::has_set(const AnovaSet& T) const {
  for (const auto& r : ranges_)
    if (r.set == T) return true;
  return false;
}

const IndexCatalog::SetRange& IndexCatalog::range(const AnovaSet& T) const {
  for (const auto& r : ranges_)
    if (r.set == T) return r;
  throw std::invalid_argument("catalog: set " + to_string(T) + " not present");
}

IndexCatalog build_catalog(const std::vector<std::vector<AnovaSet>>& active,
                           int p, int N) {
  IndexCatalog cat;
  cat.N_ = N;
  cat.p_ = p;

  std::set<AnovaSet> seen;
  cat.entries_.push_back(MultiIndex{std::vector<int>(N, 0)});

  std::vector<std::vector<AnovaSet>> by_order = active;
  for (auto& order_sets : by_order) std::sort(order_sets.begin(), order_sets.end());

  for (const auto& order_sets : by_order) {
    for (const auto& T : order_sets) {
      if (!seen.insert(T).second)
        throw std::invalid_argument("build_catalog: duplicate set " + to_string(T));
      IndexCatalog::SetRange r;
      r.set = T;
      r.begin = cat.entries_.size();
      auto indices = component_multiindices(T, p, N);
      r.count = indices.size();
      for (auto& mi : indices) cat.entries_.push_back(std::move(mi));
      cat.ranges_.push_back(std::move(r));
    }
  }
  for (std::size_t j = 0; j < cat.entries_.size(); ++j) {
    if (!cat.position_.emplace(cat.entries_[j], j).second)
      throw std::invalid_argument("build_catalog: duplicate multi-index");
  }
  return cat;
}

IndexCatalog full_catalog(int p, int N) {
  std::vector<std::vector<AnovaSet>> active;
  const int kmax = std::min(N, p);
  for (int k = 1; k <= kmax; ++k) active.push_back(enumerate_anova_sets(k, N));
  return build_catalog(active, p, N);
}

std::vector<AnovaSet> admissible_next(const std::vector<AnovaSet>& retained,
                                      int N) {
  std::set<AnovaSet> have(retained.begin(), retained.end());
  if (retained.empty()) return {};
  const int k = retained.front().order();
  for (const auto& s : retained)
    if (s.order() != k)
      throw std::invalid_argument("admissible_next: mixed cardinalities");

  std::vector<AnovaSet> out;
  for (const auto& cand : enumerate_anova_sets(k + 1, N)) {
    bool ok = true;
    AnovaSet sub;
    sub.members.resize(k);
    for (int drop = 0; drop <= k && ok; ++drop) {
      int w = 0;
      for (int i = 0; i <= k; ++i)
        if (i != drop) sub.members[w++] = cand.members[i];
      ok = have.count(sub) > 0;
    }
    if (ok) out.push_back(cand);
  }
  return out;
}

std::string IndexCatalog::to_json() const {
  nlohmann::json j;
  j["N"] = N_;
  j["p"] = p_;
  auto orders = nlohmann::json::array();
  {
    nlohmann::json zero;
    zero["set"] = nlohmann::json::array();
    zero["indices"] = nlohmann::json::array({entries_[0].deg});
    orders.push_back(zero);
  }
  for (const auto& r : ranges_) {
    nlohmann::json o;
    o["set"] = r.set.members;
    auto idx = nlohmann::json::array();
    for (std::size_t i = 0; i < r.count; ++i) idx.push_back(entries_[r.begin + i].deg);
    o["indices"] = idx;
    orders.push_back(o);
  }
  j["orders"] = orders;
  return j.dump(2);
}

IndexCatalog IndexCatalog::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  IndexCatalog cat;
  cat.N_ = j.at("N").get<int>();
  cat.p_ = j.at("p").get<int>();
  for (const auto& o : j.at("orders")) {
    AnovaSet T{o.at("set").get<std::vector<int>>()};
    if (T.order() == 0) {
      for (const auto& idx : o.at("indices"))
        cat.entries_.push_back(MultiIndex{idx.get<std::vector<int>>()});
      continue;
    }
    SetRange r;
    r.set = T;
    r.begin = cat.entries_.size();
    for (const auto& idx : o.at("indices")) {
      cat.entries_.push_back(MultiIndex{idx.get<std::vector<int>>()});
      ++r.count;
    }
    cat.ranges_.push_back(std::move(r));
  }
  for (std::size_t jpos = 0; jpos < cat.entries_.size(); ++jpos)
    cat.position_.emplace(cat.entries_[jpos], jpos);
  return cat;
}

}  // namespace aasg
