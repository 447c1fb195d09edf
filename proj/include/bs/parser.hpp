#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bs/ast.hpp"
#include "bs/lexer.hpp"

namespace bs {

// Builds a desugared Chunk. Method definitions come out as plain functions
// with a leading `self` parameter and colon calls as ordinary calls.
// Throws Error(ParseError) with "expected X near Y" messages.
Chunk parse(std::span<const Token> tokens, std::string chunk_name = "main");

// tokenize + parse
Chunk parse_source(std::string_view source, std::string chunk_name = "main");

// Rewrites `receiver:method(args...)` into `receiver["method"](receiver, args...)`.
// A receiver that is not a plain variable is evaluated once into `temp_slot`.
ExprPtr desugar_colon_call(ExprPtr receiver, std::string method, std::vector<ExprPtr> args,
                           int line, int temp_slot);

// Source text that re-parses to a structurally identical chunk.
std::string to_source(const Chunk& chunk);

// Line-free structural rendering, used to compare trees.
std::string dump(const Chunk& chunk);

}  // namespace bs
