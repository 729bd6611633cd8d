#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

// Multi-index and ANOVA-set bookkeeping: enumeration of the total-degree
// index sets attached to each ANOVA component, the global basis catalog, and
// the admissibility rule that builds order k+1 candidates from retained
// order-k sets.

namespace aasg {

// Dense vector of polynomial degrees, one slot per random dimension.
struct MultiIndex {
  std::vector<int> deg;

  int total_degree() const;
  std::vector<int> support() const;  // 1-based dimension labels with deg != 0
  auto operator<=>(const MultiIndex&) const = default;
};

// Strictly increasing 1-based dimension labels; empty = order-0 component.
struct AnovaSet {
  std::vector<int> members;

  int order() const { return static_cast<int>(members.size()); }
  bool contains(int dim) const;
  auto operator<=>(const AnovaSet&) const = default;
};

std::string to_string(const MultiIndex& mi);
std::string to_string(const AnovaSet& s);

// All C(N,k) subsets of {1..N} with cardinality k, lexicographic.
std::vector<AnovaSet> enumerate_anova_sets(int k, int N);

// Multi-indices supported exactly on T with total degree <= p; there are
// C(p,|T|) of them. Graded-lexicographic order (degree, then lex).
std::vector<MultiIndex> component_multiindices(const AnovaSet& T, int p, int N);

// Exact binomial in unsigned 64-bit; saturates at UINT64_MAX on overflow.
std::uint64_t binomial(int n, int k);

// Ordered gPC basis catalog. Entry 0 is the zero index; then ANOVA order
// ascending, sets lexicographic within an order, indices graded-lex within a
// set. Growing the active sets by appending orders extends the catalog by a
// suffix, which is what makes solver warm starts an injection by position.
class IndexCatalog {
 public:
  IndexCatalog() = default;

  struct SetRange {
    AnovaSet set;
    std::size_t begin = 0;  // first slot of this component's indices
    std::size_t count = 0;
  };

  std::size_t size() const { return entries_.size(); }
  const MultiIndex& entry(std::size_t j) const { return entries_[j]; }
  const std::vector<MultiIndex>& entries() const { return entries_; }
  const std::vector<SetRange>& ranges() const { return ranges_; }

  // Slot of a multi-index, or -1 when absent.
  std::ptrdiff_t position(const MultiIndex& mi) const;
  bool has_set(const AnovaSet& T) const;
  const SetRange& range(const AnovaSet& T) const;  // throws if absent

  int dimension() const { return N_; }
  int degree() const { return p_; }

  std::string to_json() const;
  static IndexCatalog from_json(const std::string& text);

  friend IndexCatalog build_catalog(const std::vector<std::vector<AnovaSet>>&,
                                    int, int);

 private:
  int N_ = 0;
  int p_ = 0;
  std::vector<MultiIndex> entries_;
  std::vector<SetRange> ranges_;  // excludes the zero entry
  std::map<MultiIndex, std::size_t> position_;
};

// Catalog over the union of the given active sets (orders 1..k as produced by
// the adaptive loop). Throws std::invalid_argument on duplicate sets.
IndexCatalog build_catalog(const std::vector<std::vector<AnovaSet>>& active,
                           int p, int N);

// Full total-degree catalog: every ANOVA set of order <= min(N,p) active.
IndexCatalog full_catalog(int p, int N);

// Sets of cardinality k+1 all of whose k-subsets were retained.
std::vector<AnovaSet> admissible_next(const std::vector<AnovaSet>& retained,
                                      int N);

}  // namespace aasg
