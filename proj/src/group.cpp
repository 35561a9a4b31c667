#include "arithreg/group.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <sstream>

#include "arithreg/errors.hpp"

namespace arithreg {

namespace {

constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 62;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidSpecError("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

std::size_t max_enumerable_order() {
  if (const char* env = std::getenv("ARITHREG_MAX_N")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{1} << 24;
}

GroupSpec::GroupSpec(std::vector<std::uint64_t> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidSpecError("group needs at least one factor");
  std::uint64_t n = 1;
  std::uint64_t l = 1;
  for (auto m : factors_) {
    if (m == 0) throw InvalidSpecError("group factors must be positive");
    if (n > kMaxOrder / m) throw InvalidSpecError("group order overflows");
    n *= m;
    l = std::lcm(l, m);
  }
  order_ = n;
  lcm_ = l;
  strides_.assign(factors_.size(), 1);
  for (std::size_t j = factors_.size(); j-- > 1;) strides_[j - 1] = strides_[j] * factors_[j];
  phase_scale_.resize(factors_.size());
  for (std::size_t j = 0; j < factors_.size(); ++j) phase_scale_[j] = lcm_ / factors_[j];
  elementary2_ = true;
  for (auto m : factors_) elementary2_ = elementary2_ && m == 2;
}

GroupSpec GroupSpec::parse(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw InvalidSpecError("empty group spec");
  std::vector<std::uint64_t> factors;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find_first_of("xX", pos);
    std::string_view tok = text.substr(pos, next == std::string_view::npos ? text.npos : next - pos);
    std::size_t caret = tok.find('^');
    std::int64_t base = parse_int(tok.substr(0, caret), "group factor");
    std::int64_t power = caret == std::string_view::npos ? 1 : parse_int(tok.substr(caret + 1), "group exponent");
    if (base <= 0) throw InvalidSpecError("group factors must be positive");
    if (power <= 0 || power > 64) throw InvalidSpecError("group exponent out of range");
    for (std::int64_t i = 0; i < power; ++i) factors.push_back(static_cast<std::uint64_t>(base));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return GroupSpec(std::move(factors));
}

GroupSpec GroupSpec::elementary2(int n) {
  if (n < 1) throw InvalidSpecError("(Z/2)^n needs n >= 1");
  return GroupSpec(std::vector<std::uint64_t>(static_cast<std::size_t>(n), 2));
}

GroupSpec GroupSpec::cyclic(std::uint64_t n) { return GroupSpec(std::vector<std::uint64_t>{n}); }

GroupSpec make_group(std::vector<std::uint64_t> factors) { return GroupSpec(std::move(factors)); }

int GroupSpec::f2_dim() const {
  if (!elementary2_) throw DomainError("group " + to_string() + " is not (Z/2)^n");
  return static_cast<int>(factors_.size());
}

std::string GroupSpec::to_string() const {
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < factors_.size()) {
    std::size_t j = i;
    while (j < factors_.size() && factors_[j] == factors_[i]) ++j;
    if (!first) os << 'x';
    first = false;
    os << factors_[i];
    if (j - i > 1) os << '^' << (j - i);
    i = j;
  }
  return os.str();
}

void GroupSpec::require_enumerable() const {
  if (order_ > max_enumerable_order()) {
    throw ResourceError("group order " + std::to_string(order_) + " exceeds the enumeration limit " +
                        std::to_string(max_enumerable_order()) + " (set ARITHREG_MAX_N to raise it)");
  }
}

GroupElement GroupSpec::element(std::size_t index) const {
  if (index >= order_) throw DomainError("element index out of range");
  GroupElement x;
  x.coords.resize(factors_.size());
  for (std::size_t j = 0; j < factors_.size(); ++j) x.coords[j] = (index / strides_[j]) % factors_[j];
  return x;
}

std::size_t GroupSpec::index_of(const GroupElement& x) const {
  check_member(x);
  std::size_t idx = 0;
  for (std::size_t j = 0; j < factors_.size(); ++j) idx += x.coords[j] * strides_[j];
  return idx;
}

Character GroupSpec::character(std::size_t index) const { return Character{element(index).coords}; }

std::size_t GroupSpec::index_of(const Character& gamma) const {
  check_member(gamma);
  return index_of(GroupElement{gamma.freqs});
}

GroupElement GroupSpec::identity() const { return GroupElement{std::vector<std::uint64_t>(factors_.size(), 0)}; }

void GroupSpec::check_member(const GroupElement& x) const {
  if (x.coords.size() != factors_.size()) throw DomainError("element does not belong to group " + to_string());
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    if (x.coords[j] >= factors_[j]) throw DomainError("element does not belong to group " + to_string());
  }
}

void GroupSpec::check_member(const Character& gamma) const {
  if (gamma.freqs.size() != factors_.size()) throw DomainError("character does not belong to group " + to_string());
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    if (gamma.freqs[j] >= factors_[j]) throw DomainError("character does not belong to group " + to_string());
  }
}

GroupElement GroupSpec::add(const GroupElement& a, const GroupElement& b) const {
  check_member(a);
  check_member(b);
  GroupElement r = a;
  for (std::size_t j = 0; j < factors_.size(); ++j) r.coords[j] = (a.coords[j] + b.coords[j]) % factors_[j];
  return r;
}

GroupElement GroupSpec::neg(const GroupElement& a) const {
  check_member(a);
  GroupElement r = a;
  for (std::size_t j = 0; j < factors_.size(); ++j) r.coords[j] = (factors_[j] - a.coords[j]) % factors_[j];
  return r;
}

GroupElement GroupSpec::sub(const GroupElement& a, const GroupElement& b) const { return add(a, neg(b)); }

GroupElement GroupSpec::scalar_mul(std::int64_t k, const GroupElement& a) const {
  check_member(a);
  GroupElement r = a;
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    const std::uint64_t m = factors_[j];
    const std::int64_t km = k % static_cast<std::int64_t>(m);
    const std::uint64_t kk = static_cast<std::uint64_t>(km < 0 ? km + static_cast<std::int64_t>(m) : km);
    r.coords[j] = mod_mul(kk, a.coords[j], m);
  }
  return r;
}

std::size_t GroupSpec::add(std::size_t a, std::size_t b) const {
  if (elementary2_) return a ^ b;
  if (factors_.size() == 1) {
    std::size_t s = a + b;
    return s >= order_ ? s - order_ : s;
  }
  std::size_t r = 0;
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    const std::uint64_t m = factors_[j];
    const std::uint64_t s = (a / strides_[j]) % m + (b / strides_[j]) % m;
    r += (s >= m ? s - m : s) * strides_[j];
  }
  return r;
}

std::size_t GroupSpec::neg(std::size_t a) const {
  if (elementary2_) return a;
  if (factors_.size() == 1) return a == 0 ? 0 : order_ - a;
  std::size_t r = 0;
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    const std::uint64_t m = factors_[j];
    const std::uint64_t c = (a / strides_[j]) % m;
    r += (c == 0 ? 0 : m - c) * strides_[j];
  }
  return r;
}

std::size_t GroupSpec::sub(std::size_t a, std::size_t b) const { return add(a, neg(b)); }

std::size_t GroupSpec::scalar_mul(std::int64_t k, std::size_t a) const {
  return index_of(scalar_mul(k, element(a)));
}

std::uint64_t GroupSpec::phase(std::size_t gamma, std::size_t x) const {
  if (factors_.size() == 1) return mod_mul(gamma, x, order_);
  if (elementary2_) return static_cast<std::uint64_t>(__builtin_popcountll(gamma & x) & 1);
  std::uint64_t t = 0;
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    const std::uint64_t m = factors_[j];
    const std::uint64_t c = (gamma / strides_[j]) % m;
    const std::uint64_t v = (x / strides_[j]) % m;
    const std::uint64_t term = mod_mul(mod_mul(c, v, m), phase_scale_[j], lcm_);
    t += term;
    if (t >= lcm_) t -= lcm_;
  }
  return t;
}

std::complex<double> GroupSpec::char_eval(std::size_t gamma, std::size_t x) const {
  const std::uint64_t t = phase(gamma, x);
  if (t == 0) return {1.0, 0.0};
  if (2 * t == lcm_) return {-1.0, 0.0};
  const double angle = 2.0 * std::numbers::pi * (static_cast<double>(t) / static_cast<double>(lcm_));
  return std::polar(1.0, angle);
}

std::complex<double> GroupSpec::char_eval(const Character& gamma, const GroupElement& x) const {
  return char_eval(index_of(gamma), index_of(x));
}

double GroupSpec::arg_norm(std::size_t gamma, std::size_t x) const {
  const std::uint64_t t = phase(gamma, x);
  const std::uint64_t folded = std::min(t, lcm_ - t);
  return static_cast<double>(folded) / static_cast<double>(lcm_);
}

std::string GroupSpec::format(const GroupElement& x) const {
  std::string out;
  for (std::size_t j = 0; j < x.coords.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(x.coords[j]);
  }
  return out;
}

std::string GroupSpec::format(const Character& gamma) const { return format(GroupElement{gamma.freqs}); }

GroupElement GroupSpec::parse_element(std::string_view text) const {
  text = trim(text);
  GroupElement x;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    const std::int64_t v = parse_int(tok, "element residue");
    const std::size_t j = x.coords.size();
    if (j >= factors_.size()) throw InvalidSpecError("element '" + std::string(text) + "' has too many coordinates");
    const auto m = static_cast<std::int64_t>(factors_[j]);
    x.coords.push_back(static_cast<std::uint64_t>(((v % m) + m) % m));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (x.coords.size() != factors_.size()) {
    throw InvalidSpecError("element '" + std::string(text) + "' needs " + std::to_string(factors_.size()) +
                           " coordinates");
  }
  return x;
}

Character GroupSpec::parse_character(std::string_view text) const { return Character{parse_element(text).coords}; }

double char_arg_norm(const GroupSpec& g, std::span<const std::size_t> gammas, std::size_t x) {
  double best = 0.0;
  for (auto gamma : gammas) best = std::max(best, g.arg_norm(gamma, x));
  return best;
}

double char_arg_norm(const GroupSpec& g, std::span<const Character> gammas, const GroupElement& x) {
  const std::size_t xi = g.index_of(x);
  double best = 0.0;
  for (const auto& gamma : gammas) best = std::max(best, g.arg_norm(g.index_of(gamma), xi));
  return best;
}

}  // namespace arithreg
