#pragma once

// Feature signatures, polarities, value sets and polarized feature
// structures.  Feature names and atomic values are interned against a
// Signature; value sets are bitmasks over a feature's domain.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ig {

using FeatureId = std::uint16_t;
using ValueIndex = std::uint8_t;

inline constexpr std::size_t kMaxDomainSize = 64;

enum class Polarity : std::uint8_t { Positive, Negative, Virtual, Neutral };

bool is_active(Polarity p) noexcept;
std::string_view polarity_symbol(Polarity p) noexcept;
std::optional<Polarity> parse_polarity(std::string_view symbol) noexcept;

// A set of atomic values of one feature.  Never empty once it leaves the
// grammar loader; emptiness only appears transiently as a clash.
class ValueSet {
 public:
  constexpr ValueSet() = default;

  static constexpr ValueSet from_bits(std::uint64_t bits) { return ValueSet(bits); }
  static constexpr ValueSet single(ValueIndex v) { return ValueSet(std::uint64_t{1} << v); }
  static ValueSet full(std::size_t domain_size);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(ValueIndex v) const { return (bits_ >> v) & 1u; }
  constexpr bool subset_of(ValueSet other) const { return (bits_ & ~other.bits_) == 0; }
  std::size_t size() const;
  bool is_singleton() const { return size() == 1; }
  // Least member; the set must not be empty.
  ValueIndex first() const;
  std::vector<ValueIndex> members() const;

  constexpr ValueSet operator&(ValueSet o) const { return ValueSet(bits_ & o.bits_); }
  constexpr ValueSet operator|(ValueSet o) const { return ValueSet(bits_ | o.bits_); }
  constexpr auto operator<=>(const ValueSet&) const = default;

 private:
  constexpr explicit ValueSet(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

// Set intersection; nullopt is the CLASH outcome.
std::optional<ValueSet> intersect_values(ValueSet a, ValueSet b);

class Signature {
 public:
  // Throws ig::Error(VALIDATION_ERROR) on duplicate names, empty or oversized
  // domains, and duplicate values.
  FeatureId add_feature(const std::string& name, const std::vector<std::string>& values);

  std::size_t size() const { return names_.size(); }
  std::optional<FeatureId> find(std::string_view name) const;
  const std::string& name(FeatureId f) const { return names_.at(f); }
  const std::vector<std::string>& values(FeatureId f) const { return domains_.at(f); }
  std::size_t domain_size(FeatureId f) const { return domains_.at(f).size(); }
  std::optional<ValueIndex> value_index(FeatureId f, std::string_view value) const;
  const std::string& value_name(FeatureId f, ValueIndex v) const { return domains_.at(f).at(v); }
  ValueSet full(FeatureId f) const { return ValueSet::full(domain_size(f)); }

  // "np|pp" or "?" for the full domain.
  std::string format_values(FeatureId f, ValueSet values) const;
  // Accepts "?" and pipe-separated lists; nullopt on unknown values.
  std::optional<ValueSet> parse_values(FeatureId f, std::string_view text) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> domains_;
};

// Multiset of polarities, stored as counts.
struct PolarityCounts {
  std::uint8_t positive = 0;
  std::uint8_t negative = 0;
  std::uint8_t virtual_ = 0;
  std::uint8_t neutral = 0;

  static PolarityCounts of(Polarity p);
  void add(Polarity p);
  PolarityCounts operator+(const PolarityCounts& o) const;
  int active() const { return positive + negative; }
  bool only_virtual() const { return positive == 0 && negative == 0 && neutral == 0 && virtual_ > 0; }
  std::vector<Polarity> expand() const;
  friend auto operator<=>(const PolarityCounts&, const PolarityCounts&) = default;
};

bool globally_saturated(const PolarityCounts& counts);
bool globally_saturated(std::span<const Polarity> polarities);

// Co-reference tag.  The scope is the IPTD instance that owns the tag, so
// two anchorings of one template never share tags.
struct CorefTag {
  std::uint32_t scope = 0;
  std::uint32_t tag = 0;
  friend auto operator<=>(const CorefTag&, const CorefTag&) = default;
};

struct PolarizedFeature {
  FeatureId name = 0;
  Polarity polarity = Polarity::Neutral;
  ValueSet values;
  std::optional<CorefTag> coref;
  friend bool operator==(const PolarizedFeature&, const PolarizedFeature&) = default;
};

// Polarized features keyed by name, at most one per name.
class PolarizedFeatureStructure {
 public:
  // Returns false when the name is already present.
  bool insert(const PolarizedFeature& feature);
  const PolarizedFeature* find(FeatureId name) const;
  PolarizedFeature* find(FeatureId name);
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  friend bool operator==(const PolarizedFeatureStructure&, const PolarizedFeatureStructure&) = default;

 private:
  std::vector<PolarizedFeature> items_;  // sorted by name
};

// All polarities neutral.  Used for large-dominance filters and anchoring
// interfaces.
class FilterStructure {
 public:
  FilterStructure() = default;
  // nullopt when some polarity is not neutral.
  static std::optional<FilterStructure> from(const PolarizedFeatureStructure& fs);

  bool insert(FeatureId name, ValueSet values, std::optional<CorefTag> coref = std::nullopt);
  const PolarizedFeatureStructure& features() const { return fs_; }
  bool empty() const { return fs_.empty(); }
  friend bool operator==(const FilterStructure&, const FilterStructure&) = default;

 private:
  PolarizedFeatureStructure fs_;
};

using AtomicFeatureStructure = std::map<FeatureId, ValueIndex>;

// phi is compatible with psi when every name defined on both sides maps to
// a value admitted by psi.
bool compatible(const AtomicFeatureStructure& phi, const FilterStructure& psi);

}  // namespace ig
