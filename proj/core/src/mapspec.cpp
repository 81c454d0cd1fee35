#include "chainrec/mapspec.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>

#include "chainrec/errors.hpp"
#include "chainrec/example31.hpp"
#include "chainrec/example34.hpp"

namespace chainrec {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MapSpecPtr parse() {
    MapSpecPtr out = spec();
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return out;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(pos_, expected);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace((unsigned char)text_[pos_]))
      ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("'" + std::string(tok) + "'");
  }

  double number() {
    skip_ws();
    // strtod handles sign, decimals, and exponents; whitespace was skipped
    // so the match starts exactly at pos_.
    const std::string buf(text_.substr(pos_));
    const char* begin = buf.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || !std::isfinite(v)) fail("number");
    pos_ += (size_t)(end - begin);
    return v;
  }

  MapSpecPtr spec() {
    skip_ws();
    if (eat("example31"))
      return std::make_shared<MapSpecAst>(MapSpecAst{Example31Node{}});
    if (eat("example34"))
      return std::make_shared<MapSpecAst>(MapSpecAst{Example34Node{}});
    if (eat("trans:")) {
      const double dx = number();
      expect(",");
      const double dy = number();
      return std::make_shared<MapSpecAst>(
          MapSpecAst{TranslationNode{dx, dy}});
    }
    if (eat("rot:")) {
      const double cx = number();
      expect(",");
      const double cy = number();
      expect(",");
      const double theta = number();
      return std::make_shared<MapSpecAst>(
          MapSpecAst{RotationNode{cx, cy, theta}});
    }
    if (eat("inv(")) {
      MapSpecPtr a = spec();
      expect(")");
      return std::make_shared<MapSpecAst>(MapSpecAst{InverseNode{a}});
    }
    if (eat("comp(")) {
      MapSpecPtr a = spec();
      expect(";");
      MapSpecPtr b = spec();
      expect(")");
      return std::make_shared<MapSpecAst>(MapSpecAst{ComposeNode{a, b}});
    }
    if (eat("conj(")) {
      MapSpecPtr a = spec();
      expect(";");
      MapSpecPtr h = spec();
      expect(")");
      return std::make_shared<MapSpecAst>(MapSpecAst{ConjugateNode{a, h}});
    }
    fail("one of example31, example34, trans:, rot:, inv(, comp(, conj(");
  }
};

std::string render_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MapSpecPtr parse_map_spec(std::string_view text) {
  return Parser(text).parse();
}

std::string pretty_print(const MapSpecAst& ast) {
  struct V {
    std::string operator()(const Example31Node&) const { return "example31"; }
    std::string operator()(const Example34Node&) const { return "example34"; }
    std::string operator()(const TranslationNode& n) const {
      return "trans:" + render_num(n.dx) + "," + render_num(n.dy);
    }
    std::string operator()(const RotationNode& n) const {
      return "rot:" + render_num(n.cx) + "," + render_num(n.cy) + "," +
             render_num(n.theta);
    }
    std::string operator()(const InverseNode& n) const {
      return "inv(" + pretty_print(*n.a) + ")";
    }
    std::string operator()(const ComposeNode& n) const {
      return "comp(" + pretty_print(*n.a) + ";" + pretty_print(*n.b) + ")";
    }
    std::string operator()(const ConjugateNode& n) const {
      return "conj(" + pretty_print(*n.a) + ";" + pretty_print(*n.h) + ")";
    }
  };
  return std::visit(V{}, ast.node);
}

MapHandle build_handle(const MapSpecAst& ast) {
  struct V {
    MapHandle operator()(const Example31Node&) const {
      return example31_handle();
    }
    MapHandle operator()(const Example34Node&) const {
      return example34_handle();
    }
    MapHandle operator()(const TranslationNode& n) const {
      return translation(n.dx, n.dy);
    }
    MapHandle operator()(const RotationNode& n) const {
      return rotation(n.cx, n.cy, n.theta);
    }
    MapHandle operator()(const InverseNode& n) const {
      return inverse_of(build_handle(*n.a));
    }
    MapHandle operator()(const ComposeNode& n) const {
      return compose(build_handle(*n.a), build_handle(*n.b));
    }
    MapHandle operator()(const ConjugateNode& n) const {
      return conjugate(build_handle(*n.a), build_handle(*n.h));
    }
  };
  return std::visit(V{}, ast.node);
}

}  // namespace chainrec
