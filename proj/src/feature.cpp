#include "ig/feature.hpp"

#include <algorithm>
#include <bit>

#include "ig/error.hpp"

namespace ig {

bool is_active(Polarity p) noexcept {
  return p == Polarity::Positive || p == Polarity::Negative;
}

std::string_view polarity_symbol(Polarity p) noexcept {
  switch (p) {
    case Polarity::Positive: return "+";
    case Polarity::Negative: return "-";
    case Polarity::Virtual: return "~";
    case Polarity::Neutral: return "=";
  }
  return "?";
}

std::optional<Polarity> parse_polarity(std::string_view symbol) noexcept {
  if (symbol == "+" || symbol == "->") return Polarity::Positive;
  if (symbol == "-" || symbol == "<-") return Polarity::Negative;
  if (symbol == "~") return Polarity::Virtual;
  if (symbol == "=") return Polarity::Neutral;
  return std::nullopt;
}

ValueSet ValueSet::full(std::size_t domain_size) {
  if (domain_size >= 64) return ValueSet(~std::uint64_t{0});
  return ValueSet((std::uint64_t{1} << domain_size) - 1);
}

std::size_t ValueSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

ValueIndex ValueSet::first() const { return static_cast<ValueIndex>(std::countr_zero(bits_)); }

std::vector<ValueIndex> ValueSet::members() const {
  std::vector<ValueIndex> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<ValueIndex>(std::countr_zero(b)));
  }
  return out;
}

std::optional<ValueSet> intersect_values(ValueSet a, ValueSet b) {
  ValueSet r = a & b;
  if (r.empty()) return std::nullopt;
  return r;
}

FeatureId Signature::add_feature(const std::string& name, const std::vector<std::string>& values) {
  if (name.empty()) throw Error("VALIDATION_ERROR", "empty feature name");
  if (find(name)) throw Error("VALIDATION_ERROR", "duplicate feature name '" + name + "'");
  if (values.empty()) throw Error("VALIDATION_ERROR", "feature '" + name + "' has an empty domain");
  if (values.size() > kMaxDomainSize) {
    throw Error("VALIDATION_ERROR", "feature '" + name + "' has more than 64 values");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].empty() || values[i] == "?" || values[i].find('|') != std::string::npos) {
      throw Error("VALIDATION_ERROR", "feature '" + name + "' has an invalid value '" + values[i] + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (values[i] == values[j]) {
        throw Error("VALIDATION_ERROR", "feature '" + name + "' repeats value '" + values[i] + "'");
      }
    }
  }
  names_.push_back(name);
  domains_.push_back(values);
  return static_cast<FeatureId>(names_.size() - 1);
}

std::optional<FeatureId> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<FeatureId>(i);
  }
  return std::nullopt;
}

std::optional<ValueIndex> Signature::value_index(FeatureId f, std::string_view value) const {
  const auto& dom = domains_.at(f);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (dom[i] == value) return static_cast<ValueIndex>(i);
  }
  return std::nullopt;
}

std::string Signature::format_values(FeatureId f, ValueSet values) const {
  if (values == full(f) && domain_size(f) > 1) return "?";
  std::string out;
  for (ValueIndex v : values.members()) {
    if (!out.empty()) out += '|';
    out += value_name(f, v);
  }
  return out;
}

std::optional<ValueSet> Signature::parse_values(FeatureId f, std::string_view text) const {
  if (text == "?") return full(f);
  ValueSet out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t bar = text.find('|', start);
    std::string_view item = text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
    auto idx = value_index(f, item);
    if (!idx) return std::nullopt;
    out = out | ValueSet::single(*idx);
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

PolarityCounts PolarityCounts::of(Polarity p) {
  PolarityCounts c;
  c.add(p);
  return c;
}

void PolarityCounts::add(Polarity p) {
  switch (p) {
    case Polarity::Positive: ++positive; break;
    case Polarity::Negative: ++negative; break;
    case Polarity::Virtual: ++virtual_; break;
    case Polarity::Neutral: ++neutral; break;
  }
}

PolarityCounts PolarityCounts::operator+(const PolarityCounts& o) const {
  PolarityCounts c;
  c.positive = static_cast<std::uint8_t>(positive + o.positive);
  c.negative = static_cast<std::uint8_t>(negative + o.negative);
  c.virtual_ = static_cast<std::uint8_t>(virtual_ + o.virtual_);
  c.neutral = static_cast<std::uint8_t>(neutral + o.neutral);
  return c;
}

std::vector<Polarity> PolarityCounts::expand() const {
  std::vector<Polarity> out;
  out.insert(out.end(), positive, Polarity::Positive);
  out.insert(out.end(), negative, Polarity::Negative);
  out.insert(out.end(), virtual_, Polarity::Virtual);
  out.insert(out.end(), neutral, Polarity::Neutral);
  return out;
}

bool globally_saturated(const PolarityCounts& c) {
  if (c.positive == 1 && c.negative == 1) return true;
  if (c.positive == 0 && c.negative == 0) {
    // The empty multiset imposes nothing.
    if (c.virtual_ == 0 && c.neutral == 0) return true;
    return c.neutral >= 1;
  }
  return false;
}

bool globally_saturated(std::span<const Polarity> polarities) {
  PolarityCounts c;
  for (Polarity p : polarities) c.add(p);
  return globally_saturated(c);
}

bool PolarizedFeatureStructure::insert(const PolarizedFeature& feature) {
  auto it = std::lower_bound(items_.begin(), items_.end(), feature.name,
                             [](const PolarizedFeature& a, FeatureId n) { return a.name < n; });
  if (it != items_.end() && it->name == feature.name) return false;
  items_.insert(it, feature);
  return true;
}

const PolarizedFeature* PolarizedFeatureStructure::find(FeatureId name) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), name,
                             [](const PolarizedFeature& a, FeatureId n) { return a.name < n; });
  if (it != items_.end() && it->name == name) return &*it;
  return nullptr;
}

PolarizedFeature* PolarizedFeatureStructure::find(FeatureId name) {
  auto it = std::lower_bound(items_.begin(), items_.end(), name,
                             [](const PolarizedFeature& a, FeatureId n) { return a.name < n; });
  if (it != items_.end() && it->name == name) return &*it;
  return nullptr;
}

std::optional<FilterStructure> FilterStructure::from(const PolarizedFeatureStructure& fs) {
  FilterStructure out;
  for (const auto& f : fs) {
    if (f.polarity != Polarity::Neutral) return std::nullopt;
    out.fs_.insert(f);
  }
  return out;
}

bool FilterStructure::insert(FeatureId name, ValueSet values, std::optional<CorefTag> coref) {
  return fs_.insert(PolarizedFeature{name, Polarity::Neutral, values, coref});
}

bool compatible(const AtomicFeatureStructure& phi, const FilterStructure& psi) {
  for (const auto& f : psi.features()) {
    auto it = phi.find(f.name);
    if (it != phi.end() && !f.values.contains(it->second)) return false;
  }
  return true;
}

}  // namespace ig
