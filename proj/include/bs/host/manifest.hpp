#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

#include "bs/host/registry.hpp"

namespace bs {

// Native callables a manifest may bind to, by key ("Point.move").
using NativeTable = std::unordered_map<std::string, MethodBody>;

// Registers every class of a JSON manifest:
//
//   {"classes": [{"name": "Point", "kind": "class", "base": null,
//                 "fields": [{"name": "x", "type": "float", "static": false, "initial": 0}],
//                 "constructors": [{"params": [], "native": "Point.<init>"}],
//                 "methods": [{"name": "move", "params": ["float", "float"],
//                              "returns": "void", "static": false, "native": "Point.move"}]}]}
//
// Throws InvalidDescriptor on malformed records or unknown native keys.
void load_manifest(Registry& registry, std::string_view json_text, const NativeTable& natives);

}  // namespace bs
