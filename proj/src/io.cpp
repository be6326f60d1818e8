#include "twistor/io.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>

namespace twistor {

namespace {

class ExpressionParser {
 public:
  ExpressionParser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  GaussPoly parse() {
    GaussPoly p = sum();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  GaussPoly sum() {
    skip_space();
    bool negate = false;
    if (peek('+') || peek('-')) negate = s_[pos_++] == '-';
    GaussPoly p = product();
    if (negate) p = -p;
    while (true) {
      skip_space();
      if (peek('+')) {
        ++pos_;
        p += product();
      } else if (peek('-')) {
        ++pos_;
        p -= product();
      } else {
        return p;
      }
    }
  }

  GaussPoly product() {
    GaussPoly p = power();
    while (true) {
      skip_space();
      if (peek('*')) {
        ++pos_;
        p *= power();
      } else if (peek('/')) {
        ++pos_;
        GaussPoly d = power();
        if (d.total_degree() != 0) fail("division by a non-constant");
        p *= d.coefficient(Exponents(vars_.size(), 0)).inverse();
      } else if (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '(')) {
        p *= power();  // juxtaposition
      } else {
        return p;
      }
    }
  }

  GaussPoly power() {
    GaussPoly base = atom();
    skip_space();
    if (!peek('^')) return base;
    ++pos_;
    skip_space();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an exponent after '^'");
    if (pos_ - start > 3) fail("exponent too large");
    return base.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
  }

  GaussPoly atom() {
    skip_space();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      GaussPoly p = sum();
      skip_space();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return GaussPoly::constant(vars_, GaussRational(Rational(Integer(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "i") return GaussPoly::constant(vars_, GaussRational::i());
      for (std::size_t k = 0; k < vars_.size(); ++k) {
        if (vars_[k] == name) return GaussPoly::variable(vars_, k);
      }
      fail("unknown symbol '" + name + "'");
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

GaussPoly parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
  return ExpressionParser(text, vars).parse();
}

Surface load_surface(const std::string& source) {
  if (source == "preset:fermat") return fermat_cubic();
  if (source == "preset:transformed-fermat") return transformed_fermat_cubic();
  if (source.rfind("preset:", 0) == 0) throw std::invalid_argument("unknown preset '" + source + "'");

  const auto z = default_vars(4, "z");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(source, ec)) return Surface(parse_polynomial(source, z));

  std::ifstream in(source);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return Surface(parse_polynomial(text, z));

  Json j = Json::parse(text);
  const auto ring = parse_ring_name(j.at("ring").get<std::string>());
  GaussPoly f;
  if (ring == RingTag::Int) {
    f = poly_from_json<Integer>(j).map_coefficients<GaussRational>(
        [](const Integer& c) { return GaussRational(Rational(c)); });
  } else if (ring == RingTag::GaussRat) {
    f = poly_from_json<GaussRational>(j);
  } else {
    throw std::invalid_argument("surface coefficients must be integers or Gaussian rationals");
  }
  if (f.vars() != z) throw std::invalid_argument("surface polynomial must use variables z1..z4");
  return Surface(std::move(f));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace twistor
