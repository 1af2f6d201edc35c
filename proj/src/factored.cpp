#include "kls/factored.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace kls {

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : kSmall) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a deterministic witness set below 3.3e24.
  for (auto a : kSmall) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger::FactoredInteger(std::vector<PrimePower> factors) : factors_(std::move(factors)), value_(1) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = factors_[i];
    if (i > 0 && factors_[i - 1].prime >= f.prime) {
      throw std::invalid_argument("primes must be strictly increasing");
    }
    if (f.exponent == 0) throw std::invalid_argument("exponents must be >= 1");
    if (!is_prime_u64(f.prime)) {
      throw std::invalid_argument("not a prime: " + std::to_string(f.prime));
    }
    BigInt pk;
    mpz_pow_ui(pk.get_mpz_t(), from_u64(f.prime).get_mpz_t(), f.exponent);
    value_ *= pk;
  }
}

FactoredInteger FactoredInteger::factor(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("cannot factor 0");
  if (n >= kTrialDivisionLimit) {
    throw std::invalid_argument("trial division limited to values below 2^48; supply the factorization");
  }
  std::vector<PrimePower> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return FactoredInteger(std::move(out));
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t parse_u64(const std::string& s, std::string_view whole) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ParseError("malformed factored integer '" + std::string(whole) + "'");
  }
  const BigInt v = parse_bigint(s);
  if (!fits_u64(v)) throw ParseError("factor exceeds 64 bits in '" + std::string(whole) + "'");
  return to_u64(v);
}

}  // namespace

FactoredInteger FactoredInteger::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ParseError("empty factored integer");
  if (s.find_first_of("^*") == std::string::npos) {
    const auto n = parse_u64(s, text);
    if (n == 0) throw ParseError("modulus must be positive");
    try {
      return factor(n);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  if (s.front() == '*' || s.back() == '*' || s.find("**") != std::string::npos) {
    throw ParseError("empty factor in '" + s + "'");
  }
  std::vector<PrimePower> raw;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, '*')) {
    item = trim(item);
    std::uint64_t p = 0;
    std::uint64_t e = 1;
    if (const auto caret = item.find('^'); caret != std::string::npos) {
      p = parse_u64(trim(item.substr(0, caret)), text);
      e = parse_u64(trim(item.substr(caret + 1)), text);
    } else {
      p = parse_u64(item, text);
    }
    if (e == 0 || e > 1'000'000) throw ParseError("exponent out of range in '" + s + "'");
    if (!is_prime_u64(p)) throw ParseError("not a prime: " + std::to_string(p));
    raw.push_back({p, static_cast<unsigned>(e)});
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.prime < b.prime; });
  std::vector<PrimePower> merged;
  for (const auto& f : raw) {
    if (!merged.empty() && merged.back().prime == f.prime) {
      merged.back().exponent += f.exponent;
    } else {
      merged.push_back(f);
    }
  }
  return FactoredInteger(std::move(merged));
}

unsigned FactoredInteger::exponent_of(std::uint64_t prime) const {
  for (const auto& f : factors_) {
    if (f.prime == prime) return f.exponent;
  }
  return 0;
}

std::string FactoredInteger::to_string() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& f : factors_) {
    if (!out.empty()) out += '*';
    out += std::to_string(f.prime);
    if (f.exponent != 1) out += '^' + std::to_string(f.exponent);
  }
  return out;
}

double FactoredInteger::log() const {
  double acc = 0.0;
  for (const auto& f : factors_) acc += f.exponent * std::log(static_cast<double>(f.prime));
  return acc;
}

bool FactoredInteger::divides(const FactoredInteger& other) const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [&](const PrimePower& f) { return other.exponent_of(f.prime) >= f.exponent; });
}

FactoredInteger operator*(const FactoredInteger& a, const FactoredInteger& b) {
  std::vector<PrimePower> out;
  std::size_t i = 0, j = 0;
  while (i < a.factors_.size() || j < b.factors_.size()) {
    if (j == b.factors_.size() || (i < a.factors_.size() && a.factors_[i].prime < b.factors_[j].prime)) {
      out.push_back(a.factors_[i++]);
    } else if (i == a.factors_.size() || b.factors_[j].prime < a.factors_[i].prime) {
      out.push_back(b.factors_[j++]);
    } else {
      out.push_back({a.factors_[i].prime, a.factors_[i].exponent + b.factors_[j].exponent});
      ++i;
      ++j;
    }
  }
  return FactoredInteger(std::move(out));
}

FactoredInteger kernel(const FactoredInteger& q) {
  std::vector<PrimePower> out;
  out.reserve(q.num_primes());
  for (const auto& f : q.factors()) out.push_back({f.prime, 1});
  return FactoredInteger(std::move(out));
}

SmoothingModulus q_epsilon(const FactoredInteger& q, const Rational& eps) {
  if (eps <= Rational(0) || eps >= Rational(1)) {
    throw std::invalid_argument("eps must satisfy 0 < eps < 1, got " + eps.to_string());
  }
  SmoothingModulus out;
  std::vector<PrimePower> factors;
  for (const auto& f : q.factors()) {
    const BigInt b = (eps * Rational(static_cast<long>(f.exponent))).floor();
    const auto beta = static_cast<unsigned>(b.get_ui());
    out.beta.push_back(beta);
    factors.push_back({f.prime, beta + 1});
  }
  out.value = FactoredInteger(std::move(factors));
  return out;
}

BigInt mod_inverse(const BigInt& n, const BigInt& q) {
  if (q < 2) throw std::invalid_argument("mod_inverse: modulus must be >= 2");
  BigInt out;
  const BigInt r = mod_floor(n, q);
  if (mpz_invert(out.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t()) == 0) {
    throw NotCoprime("mod_inverse: gcd(" + n.get_str() + ", " + q.get_str() + ") > 1");
  }
  return out;
}

std::uint64_t mod_inverse_u64(std::uint64_t n, std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("mod_inverse: modulus must be >= 2");
  if (q >> 63) return to_u64(mod_inverse(from_u64(n), from_u64(q)));
  // Extended Euclid on (q, n mod q) tracking only the coefficient of n.
  std::int64_t t0 = 0, t1 = 1;
  std::uint64_t r0 = q, r1 = n % q;
  while (r1 != 0) {
    const std::uint64_t quot = r0 / r1;
    const std::uint64_t r2 = r0 - quot * r1;
    r0 = r1;
    r1 = r2;
    const std::int64_t t2 = t0 - static_cast<std::int64_t>(quot) * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) throw NotCoprime("mod_inverse: gcd(" + std::to_string(n) + ", " + std::to_string(q) + ") > 1");
  return t0 < 0 ? static_cast<std::uint64_t>(t0 + static_cast<std::int64_t>(q)) : static_cast<std::uint64_t>(t0);
}

}  // namespace kls
