#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "chainrec/maps.hpp"

namespace chainrec {

struct MapSpecAst;
using MapSpecPtr = std::shared_ptr<const MapSpecAst>;

struct Example31Node {};
struct Example34Node {};
struct TranslationNode {
  double dx, dy;
};
struct RotationNode {
  double cx, cy, theta;
};
struct InverseNode {
  MapSpecPtr a;
};
struct ComposeNode {  // a after b
  MapSpecPtr a, b;
};
struct ConjugateNode {  // h . a . h^-1
  MapSpecPtr a, h;
};

struct MapSpecAst {
  std::variant<Example31Node, Example34Node, TranslationNode, RotationNode,
               InverseNode, ComposeNode, ConjugateNode>
      node;
};

/// Grammar (whitespace-insensitive):
///   spec := "example31" | "example34"
///         | "trans:" num "," num
///         | "rot:" num "," num "," num
///         | "inv(" spec ")"
///         | "comp(" spec ";" spec ")"   -- first argument applied last
///         | "conj(" spec ";" spec ")"
/// Throws ParseError carrying the byte offset and the expected tokens.
MapSpecPtr parse_map_spec(std::string_view text);

/// Canonical rendering; pretty_print(parse(s)) is a fixed point of
/// parse-then-print.
std::string pretty_print(const MapSpecAst& ast);

MapHandle build_handle(const MapSpecAst& ast);

}  // namespace chainrec
