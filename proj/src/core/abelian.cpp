#include "addforms/abelian.hpp"

#include "addforms/error.hpp"
#include "addforms/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <bit>
#include <fstream>
#include <numeric>
#include <sstream>

namespace addforms {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::uint32_t> moduli, std::uint64_t max_order)
    : moduli_(std::move(moduli)) {
  if (moduli_.empty()) fail(ErrorCode::invalid_argument, "a group needs at least one cyclic factor");
  const std::uint64_t hard_cap = std::min<std::uint64_t>(max_order, UINT32_MAX);
  std::uint64_t order = 1;
  std::uint64_t exponent = 1;
  for (std::uint32_t n : moduli_) {
    if (n == 0) fail(ErrorCode::invalid_argument, "cyclic factor Z0 is not finite");
    order *= n;
    if (order > hard_cap) {
      fail(ErrorCode::cap_exceeded, "group order exceeds the configured cap of " + std::to_string(hard_cap));
    }
    exponent = std::lcm(exponent, std::uint64_t{n});
  }
  order_ = static_cast<std::uint32_t>(order);
  exponent_ = static_cast<std::uint32_t>(exponent);
  strides_.assign(moduli_.size(), 1);
  for (std::size_t t = moduli_.size() - 1; t > 0; --t) strides_[t - 1] = strides_[t] * moduli_[t];
  if (moduli_.size() > 1) {
    digits_.resize(std::size_t{order_} * moduli_.size());
    for (std::uint32_t i = 0; i < order_; ++i) {
      std::uint32_t rest = i;
      for (std::size_t t = 0; t < moduli_.size(); ++t) {
        digits_[std::size_t{i} * moduli_.size() + t] = rest / strides_[t];
        rest %= strides_[t];
      }
    }
  }
}

std::uint32_t FiniteAbelianGroup::residue(ElementIndex a, std::size_t factor) const {
  if (digits_.empty()) return a;
  return digits_[std::size_t{a} * moduli_.size() + factor];
}

std::vector<std::uint32_t> FiniteAbelianGroup::residues(ElementIndex a) const {
  std::vector<std::uint32_t> out(moduli_.size());
  for (std::size_t t = 0; t < moduli_.size(); ++t) out[t] = residue(a, t);
  return out;
}

ElementIndex FiniteAbelianGroup::index_of(std::span<const std::int64_t> residues) const {
  if (residues.size() != moduli_.size()) {
    fail(ErrorCode::invalid_argument, "element has " + std::to_string(residues.size()) + " residues but group " +
                                          to_string() + " has " + std::to_string(moduli_.size()) + " factors");
  }
  std::uint64_t index = 0;
  for (std::size_t t = 0; t < moduli_.size(); ++t) {
    std::int64_t r = residues[t] % static_cast<std::int64_t>(moduli_[t]);
    if (r < 0) r += moduli_[t];
    index += static_cast<std::uint64_t>(r) * strides_[t];
  }
  return static_cast<ElementIndex>(index);
}

ElementIndex FiniteAbelianGroup::add(ElementIndex a, ElementIndex b) const {
  if (digits_.empty()) {
    std::uint32_t s = a + b;
    return s >= order_ ? s - order_ : s;
  }
  const std::size_t m = moduli_.size();
  const std::uint32_t* da = &digits_[std::size_t{a} * m];
  const std::uint32_t* db = &digits_[std::size_t{b} * m];
  std::uint32_t index = 0;
  for (std::size_t t = 0; t < m; ++t) {
    std::uint32_t s = da[t] + db[t];
    if (s >= moduli_[t]) s -= moduli_[t];
    index += s * strides_[t];
  }
  return index;
}

ElementIndex FiniteAbelianGroup::negate(ElementIndex a) const {
  if (digits_.empty()) return a == 0 ? 0 : order_ - a;
  const std::size_t m = moduli_.size();
  const std::uint32_t* da = &digits_[std::size_t{a} * m];
  std::uint32_t index = 0;
  for (std::size_t t = 0; t < m; ++t) index += (da[t] == 0 ? 0 : moduli_[t] - da[t]) * strides_[t];
  return index;
}

ElementIndex FiniteAbelianGroup::scale(std::int64_t c, ElementIndex a) const {
  std::int64_t reduced = c % static_cast<std::int64_t>(exponent_);
  if (reduced < 0) reduced += exponent_;
  const auto cu = static_cast<std::uint64_t>(reduced);
  if (digits_.empty()) return static_cast<ElementIndex>((cu * a) % order_);
  const std::size_t m = moduli_.size();
  std::uint32_t index = 0;
  for (std::size_t t = 0; t < m; ++t) {
    index += static_cast<std::uint32_t>((cu * digits_[std::size_t{a} * m + t]) % moduli_[t]) * strides_[t];
  }
  return index;
}

std::string FiniteAbelianGroup::format_element(ElementIndex a) const {
  if (moduli_.size() == 1) return std::to_string(a);
  std::string out = "(";
  for (std::size_t t = 0; t < moduli_.size(); ++t) {
    if (t) out += ',';
    out += std::to_string(residue(a, t));
  }
  return out + ")";
}

std::string FiniteAbelianGroup::to_string() const {
  std::string out;
  for (std::size_t t = 0; t < moduli_.size(); ++t) {
    if (t) out += " x ";
    out += "Z" + std::to_string(moduli_[t]);
  }
  return out;
}

GroupPtr make_group(std::vector<std::uint32_t> moduli, std::uint64_t max_order) {
  return std::make_shared<const FiniteAbelianGroup>(std::move(moduli), max_order);
}

GroupPtr parse_group(std::string_view input, std::uint64_t max_order) {
  text::Cursor cur(input);
  std::vector<std::uint32_t> moduli;
  do {
    if (!cur.accept('Z')) cur.error("expected 'Z' starting a cyclic factor");
    // The modulus must follow the 'Z' directly, "Z 9" is rejected.
    if (!std::isdigit(static_cast<unsigned char>(input.size() > cur.offset() ? input[cur.offset()] : '\0'))) {
      cur.error("expected modulus immediately after 'Z'");
    }
    BigInt n = cur.integer();
    if (n == 0 || n > UINT32_MAX) cur.error("modulus out of range");
    moduli.push_back(static_cast<std::uint32_t>(n));
  } while (cur.accept('x') || cur.accept('*'));
  cur.expect_end();
  return make_group(std::move(moduli), max_order);
}

void require_same_group(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
  if (!(a == b)) fail(ErrorCode::group_mismatch, "group mismatch: " + a.to_string() + " vs " + b.to_string());
}

GroupElement::GroupElement(GroupPtr group, ElementIndex index) : group_(std::move(group)), index_(index) {
  if (index_ >= group_->order()) fail(ErrorCode::invalid_argument, "element index out of range");
}

GroupElement GroupElement::from_residues(GroupPtr group, std::span<const std::int64_t> residues) {
  ElementIndex index = group->index_of(residues);
  return GroupElement(std::move(group), index);
}

GroupElement element_add(const GroupElement& a, const GroupElement& b) {
  require_same_group(*a.group(), *b.group());
  return GroupElement(a.group(), a.group()->add(a.index(), b.index()));
}

GroupElement element_scale(std::int64_t c, const GroupElement& a) {
  return GroupElement(a.group(), a.group()->scale(c, a.index()));
}

// ---------------------------------------------------------------------------

namespace {

std::size_t word_count(std::uint32_t order) { return (std::size_t{order} + 63) / 64; }

}  // namespace

GroupSubset::GroupSubset(GroupPtr group) : group_(std::move(group)), words_(word_count(group_->order()), 0) {}

GroupSubset::GroupSubset(GroupPtr group, std::vector<std::uint64_t> words)
    : group_(std::move(group)), words_(std::move(words)) {
  const std::uint32_t tail = group_->order() % 64;
  if (tail != 0) words_.back() &= (std::uint64_t{1} << tail) - 1;
  for (std::uint64_t w : words_) size_ += static_cast<std::size_t>(std::popcount(w));
}

GroupSubset GroupSubset::full(GroupPtr group) {
  std::vector<std::uint64_t> words(word_count(group->order()), ~std::uint64_t{0});
  return GroupSubset(std::move(group), std::move(words));
}

GroupSubset GroupSubset::from_indices(GroupPtr group, std::span<const ElementIndex> indices) {
  std::vector<std::uint64_t> words(word_count(group->order()), 0);
  for (ElementIndex i : indices) {
    if (i >= group->order()) fail(ErrorCode::invalid_argument, "element index out of range");
    words[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return GroupSubset(std::move(group), std::move(words));
}

GroupSubset GroupSubset::from_predicate(GroupPtr group, const std::function<bool(ElementIndex)>& member) {
  std::vector<std::uint64_t> words(word_count(group->order()), 0);
  for (ElementIndex i = 0; i < group->order(); ++i) {
    if (member(i)) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return GroupSubset(std::move(group), std::move(words));
}

GroupSubset GroupSubset::from_mask(GroupPtr group, std::uint64_t mask) {
  if (group->order() > 64) fail(ErrorCode::invalid_argument, "mask construction needs order <= 64");
  return GroupSubset(std::move(group), std::vector<std::uint64_t>{mask});
}

std::vector<ElementIndex> GroupSubset::elements() const {
  std::vector<ElementIndex> out;
  out.reserve(size_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      out.push_back(static_cast<ElementIndex>(w * 64 + std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

GroupSubset GroupSubset::negated() const {
  std::vector<std::uint64_t> words(words_.size(), 0);
  for (ElementIndex a : elements()) {
    ElementIndex n = group_->negate(a);
    words[n >> 6] |= std::uint64_t{1} << (n & 63);
  }
  return GroupSubset(group_, std::move(words));
}

GroupSubset GroupSubset::translated(ElementIndex by) const {
  std::vector<std::uint64_t> words(words_.size(), 0);
  for (ElementIndex a : elements()) {
    ElementIndex n = group_->add(a, by);
    words[n >> 6] |= std::uint64_t{1} << (n & 63);
  }
  return GroupSubset(group_, std::move(words));
}

GroupSubset GroupSubset::complement() const {
  std::vector<std::uint64_t> words(words_);
  for (auto& w : words) w = ~w;
  return GroupSubset(group_, std::move(words));
}

GroupSubset GroupSubset::intersect(const GroupSubset& other) const {
  require_same_group(*group_, *other.group_);
  std::vector<std::uint64_t> words(words_);
  for (std::size_t i = 0; i < words.size(); ++i) words[i] &= other.words_[i];
  return GroupSubset(group_, std::move(words));
}

GroupSubset GroupSubset::unite(const GroupSubset& other) const {
  require_same_group(*group_, *other.group_);
  std::vector<std::uint64_t> words(words_);
  for (std::size_t i = 0; i < words.size(); ++i) words[i] |= other.words_[i];
  return GroupSubset(group_, std::move(words));
}

bool GroupSubset::operator==(const GroupSubset& other) const {
  return *group_ == *other.group_ && words_ == other.words_;
}

GroupSubset sumset(const GroupSubset& a, const GroupSubset& b) {
  require_same_group(*a.group(), *b.group());
  const auto& g = *a.group();
  std::vector<ElementIndex> out;
  std::vector<char> seen(g.order(), 0);
  const auto ea = a.elements();
  const auto eb = b.elements();
  std::size_t found = 0;
  for (ElementIndex x : ea) {
    for (ElementIndex y : eb) {
      ElementIndex s = g.add(x, y);
      if (!seen[s]) {
        seen[s] = 1;
        out.push_back(s);
        ++found;
      }
    }
    if (found == g.order()) break;
  }
  return GroupSubset::from_indices(a.group(), out);
}

GroupSubset signed_iterated_sumset(const GroupSubset& b, unsigned r, unsigned s) {
  if (r + s == 0) fail(ErrorCode::invalid_argument, "rB - sB needs r + s >= 1");
  const GroupSubset minus = b.negated();
  GroupSubset acc = r > 0 ? b : minus;
  for (unsigned i = 1; i < r; ++i) acc = sumset(acc, b);
  for (unsigned i = r > 0 ? 0 : 1; i < s; ++i) acc = sumset(acc, minus);
  return acc;
}

GroupSubset stabilizer(const GroupSubset& s) {
  const auto& g = *s.group();
  if (s.empty() || s.size() == g.order()) return GroupSubset::full(s.group());
  // Any stabilizing g maps the first element s0 into S, so g lies in S - s0.
  const auto elems = s.elements();
  const ElementIndex s0 = elems.front();
  std::vector<ElementIndex> stab;
  for (ElementIndex x : elems) {
    ElementIndex candidate = g.subtract(x, s0);
    bool fixes = std::all_of(elems.begin(), elems.end(), [&](ElementIndex y) { return s.contains(g.add(y, candidate)); });
    if (fixes) stab.push_back(candidate);
  }
  return GroupSubset::from_indices(s.group(), stab);
}

std::vector<std::uint64_t> representation_counts(const GroupSubset& a) {
  const auto& g = *a.group();
  std::vector<std::uint64_t> r(g.order(), 0);
  const auto elems = a.elements();
  for (ElementIndex x : elems) {
    for (ElementIndex y : elems) ++r[g.add(x, y)];
  }
  return r;
}

std::uint64_t additive_energy_raw(const GroupSubset& a) {
  std::uint64_t total = 0;
  for (std::uint64_t c : representation_counts(a)) total += c * c;
  return total;
}

Rational additive_energy(const GroupSubset& a) {
  const BigInt order = a.group()->order();
  return Rational(BigInt(additive_energy_raw(a)), order * order * order);
}

Rational doubling_constant(const GroupSubset& a) {
  if (a.empty()) fail(ErrorCode::invalid_argument, "doubling constant of the empty set is undefined");
  return Rational(sumset(a, a).size(), a.size());
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t signed_integer(text::Cursor& cur) {
  bool negative = cur.accept('-');
  BigInt v = cur.integer();
  if (v > INT64_MAX) cur.error("integer out of range");
  auto out = static_cast<std::int64_t>(v);
  return negative ? -out : out;
}

ElementIndex checked_index(const FiniteAbelianGroup& g, const std::vector<std::int64_t>& residues, text::Cursor& cur) {
  if (residues.size() != g.rank()) {
    cur.error("element has " + std::to_string(residues.size()) + " residues, group " + g.to_string() + " needs " +
              std::to_string(g.rank()));
  }
  for (std::size_t t = 0; t < residues.size(); ++t) {
    if (residues[t] < 0 || residues[t] >= static_cast<std::int64_t>(g.moduli()[t])) {
      cur.error("residue " + std::to_string(residues[t]) + " out of range for Z" + std::to_string(g.moduli()[t]));
    }
  }
  return g.index_of(residues);
}

}  // namespace

GroupSubset parse_subset_literal(GroupPtr group, std::string_view input) {
  text::Cursor cur(input);
  cur.expect('{');
  std::vector<ElementIndex> members;
  if (!cur.accept('}')) {
    do {
      std::vector<std::int64_t> residues;
      if (cur.accept('(')) {
        do {
          residues.push_back(signed_integer(cur));
        } while (cur.accept(','));
        cur.expect(')');
      } else {
        residues.push_back(signed_integer(cur));
      }
      members.push_back(checked_index(*group, residues, cur));
    } while (cur.accept(','));
    cur.expect('}');
  }
  cur.expect_end();
  return GroupSubset::from_indices(std::move(group), members);
}

std::vector<ElementIndex> parse_element_list(const FiniteAbelianGroup& group, std::string_view input) {
  text::Cursor cur(input);
  std::vector<ElementIndex> out;
  do {
    std::vector<std::int64_t> residues;
    if (cur.accept('(')) {
      do {
        residues.push_back(signed_integer(cur));
      } while (cur.accept(','));
      cur.expect(')');
    } else {
      residues.push_back(signed_integer(cur));
    }
    out.push_back(checked_index(group, residues, cur));
  } while (cur.accept(','));
  cur.expect_end();
  return out;
}

GroupSubset parse_subset_file(GroupPtr group, std::string_view contents) {
  std::size_t first = contents.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && contents[first] == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(contents);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::parse_error, std::string("subset JSON: ") + e.what());
    }
    if (!doc.is_array()) fail(ErrorCode::parse_error, "subset JSON must be an array of residue arrays");
    std::vector<ElementIndex> members;
    for (const auto& item : doc) {
      std::vector<std::int64_t> residues;
      if (item.is_number_integer()) {
        residues.push_back(item.get<std::int64_t>());
      } else if (item.is_array()) {
        for (const auto& r : item) {
          if (!r.is_number_integer()) fail(ErrorCode::parse_error, "subset JSON residues must be integers");
          residues.push_back(r.get<std::int64_t>());
        }
      } else {
        fail(ErrorCode::parse_error, "subset JSON must be an array of residue arrays");
      }
      text::Cursor dummy(contents);
      members.push_back(checked_index(*group, residues, dummy));
    }
    return GroupSubset::from_indices(std::move(group), members);
  }

  std::vector<ElementIndex> members;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= contents.size()) {
    std::size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    text::Cursor cur(line);
    if (!cur.at_end()) {
      std::vector<std::int64_t> residues;
      try {
        do {
          residues.push_back(signed_integer(cur));
        } while (cur.accept(','));
        cur.expect_end();
        members.push_back(checked_index(*group, residues, cur));
      } catch (const ParseError& e) {
        throw ParseError(e.detail(), line_no, e.column());
      }
    }
    start = end + 1;
  }
  return GroupSubset::from_indices(std::move(group), members);
}

GroupSubset parse_subset(GroupPtr group, std::string_view input) {
  std::size_t first = input.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && input[first] == '{') return parse_subset_literal(std::move(group), input);
  return parse_subset_file(std::move(group), input);
}

GroupSubset load_subset(GroupPtr group, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open subset file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_subset(std::move(group), buffer.str());
}

std::string format_subset_file(const GroupSubset& a) {
  const auto& g = *a.group();
  std::string out = "# subset of " + g.to_string() + ", " + std::to_string(a.size()) + " elements\n";
  for (ElementIndex x : a.elements()) {
    for (std::size_t t = 0; t < g.rank(); ++t) {
      if (t) out += ',';
      out += std::to_string(g.residue(x, t));
    }
    out += '\n';
  }
  return out;
}

std::string format_subset_literal(const GroupSubset& a) {
  std::string out = "{";
  bool first = true;
  for (ElementIndex x : a.elements()) {
    if (!first) out += ',';
    first = false;
    out += a.group()->format_element(x);
  }
  return out + "}";
}

}  // namespace addforms
