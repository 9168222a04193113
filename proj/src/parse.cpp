#include "facteq/parse.hpp"

#include <cctype>
#include <map>

namespace facteq {

namespace {

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

[[noreturn]] void fail(std::string_view text, std::string_view why) {
  throw InputError("cannot parse '" + std::string(text) + "': " + std::string(why));
}

mpq_class parse_rational(std::string_view tok, std::string_view whole) {
  if (tok.empty()) fail(whole, "empty number");
  mpq_class q;
  const std::string s(tok);
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) fail(whole, "sign without digits");
  bool slash = false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] == '/' && !slash && k > i && k + 1 < s.size()) {
      slash = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) fail(whole, "bad number '" + s + "'");
  }
  if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) fail(whole, "bad number '" + s + "'");
  if (q.get_den() == 0) fail(whole, "zero denominator");
  q.canonicalize();
  return q;
}

std::string trim_brackets(std::string_view list) {
  std::string s = strip(list);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') fail(list, "unbalanced bracket");
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

ParsedTarget build(std::vector<mpq_class> desc, TargetKind kind, std::string_view text) {
  const auto cleared = clear_denominators(desc);
  ParsedTarget out;
  out.scaling = cleared.multiplier;
  try {
    if (kind == TargetKind::Form) {
      out.rhs = BinaryForm(cleared.coeffs);
    } else {
      out.rhs = UnivariatePoly::from_descending(cleared.coeffs);
      if (std::get<UnivariatePoly>(out.rhs).degree() < 1) fail(text, "polynomial must have degree >= 1");
    }
  } catch (const InputError& e) {
    fail(text, e.what());
  }
  return out;
}

}  // namespace

std::vector<mpq_class> parse_rational_list(std::string_view list) {
  const std::string s = trim_brackets(list);
  if (s.empty()) fail(list, "empty coefficient list");
  std::vector<mpq_class> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(parse_rational(std::string_view(s).substr(start, comma - start), list));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::uint64_t> parse_u64_list(std::string_view list) {
  std::vector<std::uint64_t> out;
  for (const auto& q : parse_rational_list(list)) {
    if (q.get_den() != 1 || q < 0 || !mpz_fits_ulong_p(q.get_num_mpz_t())) fail(list, "expected nonnegative integers");
    out.push_back(mpz_get_ui(q.get_num_mpz_t()));
  }
  return out;
}

ParsedTarget parse_target_coeffs(std::string_view list, TargetKind kind) {
  return build(parse_rational_list(list), kind, list);
}

ParsedTarget parse_target(std::string_view text, TargetKind kind) {
  const std::string s = strip(text);
  if (s.empty()) fail(text, "empty expression");
  std::map<std::pair<unsigned, unsigned>, mpq_class> terms;  // (deg x, deg y) -> coefficient
  std::size_t i = 0;
  bool first = true;
  auto read_uint = [&](unsigned& v) {
    const std::size_t b = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == b) return false;
    if (i - b > 4) fail(text, "exponent too large");
    v = static_cast<unsigned>(std::stoul(s.substr(b, i - b)));
    return true;
  };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      fail(text, "expected + or - between terms");
    }
    first = false;
    mpq_class coef = 1;
    bool have_coef = false;
    const std::size_t b = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
    if (i > b) {
      coef = parse_rational(std::string_view(s).substr(b, i - b), text);
      have_coef = true;
      if (i < s.size() && s[i] == '*') ++i;
    }
    unsigned ex = 0, ey = 0;
    bool have_var = false;
    while (i < s.size() && (s[i] == 'x' || s[i] == 'y')) {
      const char var = s[i++];
      if (var == 'y' && kind == TargetKind::Poly) fail(text, "polynomials use the variable x only");
      unsigned e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        if (!read_uint(e)) fail(text, "missing exponent after ^");
      } else {
        unsigned v;
        if (read_uint(v)) e = v;
      }
      (var == 'x' ? ex : ey) += e;
      have_var = true;
      if (i < s.size() && s[i] == '*') {
        ++i;
        if (i >= s.size() || (s[i] != 'x' && s[i] != 'y')) fail(text, "dangling *");
      }
    }
    if (!have_coef && !have_var) fail(text, "unexpected character at position " + std::to_string(i));
    terms[{ex, ey}] += sign * coef;
  }

  unsigned d = 0;
  for (const auto& [k, c] : terms)
    if (c != 0) d = std::max(d, k.first + k.second);
  if (d >= 5) fail(text, "degree >= 5 needs an explicit coefficient list (--coeffs)");
  if (d == 0) fail(text, "constant expression");

  std::vector<mpq_class> desc(d + 1, mpq_class(0));
  for (const auto& [k, c] : terms) {
    if (c == 0) continue;
    if (kind == TargetKind::Form) {
      if (k.first + k.second != d) fail(text, "form is not homogeneous");
      desc[d - k.first] = c;
    } else {
      desc[d - k.first] = c;
    }
  }
  return build(std::move(desc), kind, text);
}

FactorList parse_factor_list(std::string_view text) {
  const std::string s = strip(text);
  FactorList fl;
  fl.declared = true;
  std::size_t i = 0;
  if (i < s.size() && s[i] != '[') {
    const auto star = s.find('*');
    if (star == std::string::npos) fail(text, "expected [coefficients]");
    const auto u = parse_rational(std::string_view(s).substr(0, star), text);
    if (u.get_den() != 1 || u == 0) fail(text, "unit must be a nonzero integer");
    fl.unit = u.get_num();
    i = star + 1;
  }
  while (i < s.size()) {
    if (s[i] != '[') fail(text, "expected [");
    const auto close = s.find(']', i);
    if (close == std::string::npos) fail(text, "unbalanced bracket");
    FactorEntry e;
    for (const auto& q : parse_rational_list(std::string_view(s).substr(i, close - i + 1))) {
      if (q.get_den() != 1) fail(text, "factor coefficients must be integers");
      e.coeffs.push_back(q.get_num());
    }
    i = close + 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      const std::size_t b = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i == b || i - b > 4) fail(text, "bad multiplicity");
      e.multiplicity = static_cast<std::uint32_t>(std::stoul(s.substr(b, i - b)));
      if (e.multiplicity == 0) fail(text, "multiplicity must be positive");
    }
    fl.entries.push_back(std::move(e));
    if (i < s.size()) {
      if (s[i] != '*') fail(text, "expected * between factors");
      ++i;
    }
  }
  if (fl.entries.empty()) fail(text, "no factors");
  return fl;
}

}  // namespace facteq
