#include "nilgraph/quadratic.hpp"

#include <cctype>
#include <utility>

#include "nilgraph/errors.hpp"

namespace nilgraph {

std::string to_string(const Rational& value) { return value.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto valid = !s.empty();
  for (std::size_t i = 0; i < s.size() && valid; ++i) {
    const char c = s[i];
    valid = std::isdigit(static_cast<unsigned char>(c)) || c == '/' ||
            ((c == '-' || c == '+') && i == 0);
  }
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  Rational r;
  if (!valid || r.set_str(s, 10) != 0 || r.get_den() == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "not a rational number: '" + std::string(text) + "'");
  }
  r.canonicalize();
  return r;
}

namespace {

// Splits n > 0 as square * rest with rest squarefree as far as trial
// division up to 10^5 can tell. Returns {sqrt(square), rest}.
std::pair<mpz_class, mpz_class> split_square(mpz_class n) {
  mpz_class root = 1;
  for (unsigned long p = 2; p < 100000; ++p) {
    const mpz_class pp = p * p;
    if (pp > n) break;
    while (n % pp == 0) {
      n /= pp;
      root *= p;
    }
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return {root * r, 1};
  }
  return {root, n};
}

std::optional<Rational> rational_sqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  const mpz_class num = x.get_num();
  const mpz_class den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

}  // namespace

QuadraticNumber::QuadraticNumber(const Rational& rational,
                                 const Rational& irrational,
                                 const mpz_class& radicand)
    : rational_(rational), irrational_(irrational), radicand_(radicand) {
  if (radicand_ <= 0) {
    throw Error(ErrorCode::InvalidArgument, "radicand must be positive");
  }
  normalize();
}

void QuadraticNumber::normalize() {
  if (irrational_ == 0) {
    radicand_ = 1;
    return;
  }
  auto [root, rest] = split_square(radicand_);
  irrational_ *= root;
  radicand_ = rest;
  if (radicand_ == 1) {
    rational_ += irrational_;
    irrational_ = 0;
  }
}

const mpz_class& QuadraticNumber::common_radicand(
    const QuadraticNumber& o) const {
  if (o.irrational_ == 0) return radicand_;
  if (irrational_ == 0) return o.radicand_;
  if (radicand_ != o.radicand_) {
    throw Error(ErrorCode::InvalidArgument,
                "mixing sqrt(" + radicand_.get_str() + ") and sqrt(" +
                    o.radicand_.get_str() + ")");
  }
  return radicand_;
}

int QuadraticNumber::sign() const {
  const int sa = sgn(rational_);
  const int sb = sgn(irrational_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const Rational a2 = rational_ * rational_;
  const Rational db2 = Rational(radicand_) * irrational_ * irrational_;
  return a2 > db2 ? sa : sb;
}

double QuadraticNumber::to_double() const {
  if (irrational_ == 0) return rational_.get_d();
  mpf_class root(radicand_, 256);
  root = ::sqrt(root);
  mpf_class v(rational_, 256);
  mpf_class w(irrational_, 256);
  v += w * root;
  return v.get_d();
}

std::string QuadraticNumber::to_string() const {
  if (irrational_ == 0) return rational_.get_str();
  std::string root = "*sqrt(" + radicand_.get_str() + ")";
  if (rational_ == 0) return irrational_.get_str() + root;
  if (irrational_ < 0) {
    return rational_.get_str() + "-" + Rational(-irrational_).get_str() + root;
  }
  return rational_.get_str() + "+" + irrational_.get_str() + root;
}

QuadraticNumber QuadraticNumber::parse(std::string_view text) {
  const auto fail = [&] {
    return Error(ErrorCode::InvalidArgument,
                 "not a quadratic number: '" + std::string(text) + "'");
  };
  const auto pos = text.find("*sqrt(");
  if (pos == std::string_view::npos) return QuadraticNumber(parse_rational(text));
  if (text.empty() || text.back() != ')') throw fail();
  const std::string_view radicand_text =
      text.substr(pos + 6, text.size() - pos - 7);
  mpz_class radicand;
  if (radicand_text.empty() ||
      radicand.set_str(std::string(radicand_text), 10) != 0) {
    throw fail();
  }
  const std::string_view head = text.substr(0, pos);
  // Split "a+b" / "a-b" at the last sign that is not leading.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = head.size(); i-- > 1;) {
    if (head[i] == '+' || head[i] == '-') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) {
    return QuadraticNumber(0, parse_rational(head), radicand);
  }
  const Rational a = parse_rational(head.substr(0, split));
  const Rational b = parse_rational(head.substr(split));
  return QuadraticNumber(a, b, radicand);
}

std::optional<QuadraticNumber> QuadraticNumber::sqrt(const QuadraticNumber& x) {
  if (x.sign() < 0) return std::nullopt;
  if (x.is_zero()) return QuadraticNumber(0);
  if (x.is_rational()) {
    if (auto r = rational_sqrt(x.rational_)) return QuadraticNumber(*r);
    // sqrt(p/q) = sqrt(p*q)/q
    const mpz_class pq = x.rational_.get_num() * x.rational_.get_den();
    Rational coeff(1, x.rational_.get_den());
    coeff.canonicalize();
    return QuadraticNumber(0, coeff, pq);
  }
  // (u + v sqrt d)^2 = u^2 + d v^2 + 2uv sqrt d
  const Rational& a = x.rational_;
  const Rational& b = x.irrational_;
  const Rational d(x.radicand_);
  const Rational disc = a * a - d * b * b;
  const auto root = rational_sqrt(disc);
  if (!root) return std::nullopt;
  for (const int s : {1, -1}) {
    const Rational u2 = (a + s * *root) / 2;
    const auto u = rational_sqrt(u2);
    if (!u || *u == 0) continue;
    const Rational v = b / (2 * *u);
    QuadraticNumber candidate(*u, v, x.radicand_);
    if (candidate.sign() >= 0 && candidate * candidate == x) return candidate;
    candidate = -candidate;
    if (candidate.sign() >= 0 && candidate * candidate == x) return candidate;
  }
  return std::nullopt;
}

QuadraticNumber QuadraticNumber::operator-() const {
  QuadraticNumber r = *this;
  r.rational_ = -r.rational_;
  r.irrational_ = -r.irrational_;
  return r;
}

QuadraticNumber QuadraticNumber::conjugate() const {
  QuadraticNumber r = *this;
  r.irrational_ = -r.irrational_;
  return r;
}

QuadraticNumber& QuadraticNumber::operator+=(const QuadraticNumber& o) {
  const mpz_class d = common_radicand(o);
  rational_ += o.rational_;
  irrational_ += o.irrational_;
  radicand_ = d;
  if (irrational_ == 0) radicand_ = 1;
  return *this;
}

QuadraticNumber& QuadraticNumber::operator-=(const QuadraticNumber& o) {
  return *this += -o;
}

QuadraticNumber& QuadraticNumber::operator*=(const QuadraticNumber& o) {
  const mpz_class d = common_radicand(o);
  const Rational a = rational_ * o.rational_ + Rational(d) * irrational_ * o.irrational_;
  const Rational b = rational_ * o.irrational_ + irrational_ * o.rational_;
  rational_ = a;
  irrational_ = b;
  radicand_ = d;
  if (irrational_ == 0) radicand_ = 1;
  return *this;
}

QuadraticNumber& QuadraticNumber::operator/=(const QuadraticNumber& o) {
  if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero");
  const mpz_class d = common_radicand(o);
  const Rational norm = o.rational_ * o.rational_ - Rational(d) * o.irrational_ * o.irrational_;
  *this *= o.conjugate();
  rational_ /= norm;
  irrational_ /= norm;
  return *this;
}

QuadraticNumber abs(const QuadraticNumber& x) { return x.sign() < 0 ? -x : x; }

}  // namespace nilgraph
