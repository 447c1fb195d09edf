#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bs/host/registry.hpp"

namespace bs {

// Executes host-side behavior over a frozen registry: object creation,
// method invocation, field and array access. One per interpreter.
class HostRuntime {
public:
    // Throws NotFrozen unless the registry is frozen.
    explicit HostRuntime(std::shared_ptr<const Registry> registry);
    HostRuntime(std::shared_ptr<const Registry> registry, std::ostream& out);
    virtual ~HostRuntime() = default;

    HostRuntime(const HostRuntime&) = delete;
    HostRuntime& operator=(const HostRuntime&) = delete;

    const Registry& registry() const { return *registry_; }
    std::ostream& out() { return *out_; }

    // Selects a constructor whose parameters the arguments conform to.
    HostObjectRef instantiate(std::string_view class_name, std::span<const HostValue> args);
    // Runs a specific constructor (nullptr: the implicit no-argument one).
    HostObjectRef construct(const HostClassDescriptor& cls, const MethodDescriptor* ctor,
                            std::span<const HostValue> args);
    // Instance with initialized fields and no constructor run.
    HostObjectRef new_object(const HostClassDescriptor& cls);

    // Wrappers route through their binding first.
    HostValue invoke(const MethodDescriptor& m, const HostObjectRef& receiver,
                     std::span<const HostValue> args);
    // Runs m's body directly on receiver, ignoring any binding.
    HostValue invoke_direct(const MethodDescriptor& m, const HostObjectRef& receiver,
                            std::span<const HostValue> args);

    // Conformance-based selection among the receiver class's overloads.
    HostValue call_method(const HostObjectRef& receiver, std::string_view name,
                          std::span<const HostValue> args);
    HostValue call_static(std::string_view class_name, std::string_view name,
                          std::span<const HostValue> args);

    HostValue get_field(const HostObjectRef& owner, std::string_view field);
    void set_field(const HostObjectRef& owner, std::string_view field, HostValue v);
    HostValue get_static_field(std::string_view class_name, std::string_view field);
    void set_static_field(std::string_view class_name, std::string_view field, HostValue v);

    HostArrayRef array_new(const TypeTag& element, std::int64_t length);
    HostValue array_get(const HostArrayRef& a, std::int64_t index);
    void array_set(const HostArrayRef& a, std::int64_t index, HostValue v);
    std::int64_t array_length(const HostArrayRef& a) const;

    // Every instance field present and conforming to its tag.
    bool fields_conform(const HostObject& obj) const;

    static std::uint64_t next_id();

private:
    const MethodDescriptor* pick(const std::vector<MethodDescriptor>& cands,
                                 std::span<const HostValue> args, const std::string& what) const;
    HostValue& static_slot(const HostClassDescriptor& cls, std::string_view field);

    std::shared_ptr<const Registry> registry_;
    std::ostream* out_;
    std::map<std::pair<std::string, std::string>, HostValue> statics_;
};

}  // namespace bs
