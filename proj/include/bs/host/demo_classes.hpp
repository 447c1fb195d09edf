#pragma once

#include <memory>
#include <string_view>

#include "bs/host/manifest.hpp"
#include "bs/host/registry.hpp"

namespace bs {

// The shipped host classes: Point, the line-based console components
// (demo.*), and the benchmark targets (bench.*).
std::string_view demo_manifest();
const NativeTable& demo_natives();

void register_demo_classes(Registry& registry);

// A fresh registry holding the demo classes, already frozen.
std::shared_ptr<const Registry> demo_registry();

}  // namespace bs
