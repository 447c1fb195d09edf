#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bs/host/registry.hpp"
#include "bs/host/runtime.hpp"
#include "bs/interpreter.hpp"
#include "bs/value.hpp"

namespace bs {

// Reserved proxy entry holding the host reference.
inline constexpr std::string_view kHostRef = "__hostref";
// Entry a class wrapper installs on its script table: a proxy of the backing instance.
inline constexpr std::string_view kBase = "__base";

// 2 = exact, 1 = coercion.
struct ConversionResult {
    std::optional<HostValue> value;
    int score = 0;
    std::string reason;

    bool ok() const { return value.has_value(); }
    static ConversionResult converted(HostValue v, int score) { return {std::move(v), score, {}}; }
    static ConversionResult incompatible(std::string why) { return {std::nullopt, 0, std::move(why)}; }
};

struct OverloadDecision {
    enum class Kind { Selected, NoMatch, Ambiguous };

    Kind kind = Kind::NoMatch;
    const MethodDescriptor* method = nullptr;
    std::vector<HostValue> args;
    std::vector<const MethodDescriptor*> tied;
    int score = 0;
};

struct DispatchStats {
    std::map<std::pair<std::uint64_t, std::string>, std::uint64_t> fallback_fires;
    std::uint64_t dispatches = 0;

    std::uint64_t fires(const TableRef& proxy, std::string_view member) const;
    std::uint64_t total_fires() const;
};

// Both directions of the script/host boundary for one interpreter: proxies
// (script -> host), wrappers (host -> script) and value conversion. Installs
// the hostNewInstance/hostBindClass/hostExport/hostNewArray builtins and
// their java* aliases. Must outlive every script call that touches a proxy.
class Bridge {
public:
    Bridge(Interpreter& interp, std::shared_ptr<const Registry> registry);
    ~Bridge();

    Bridge(const Bridge&) = delete;
    Bridge& operator=(const Bridge&) = delete;

    Interpreter& interp() { return interp_; }
    HostRuntime& runtime() { return *runtime_; }
    const Registry& registry() const { return *registry_; }
    DispatchStats& stats() { return stats_; }

    // --- conversion
    // Scoring only; never creates wrappers.
    int score_value(const Value& v, const TypeTag& tag) const;
    // Converts, creating (or reusing) a wrapper when a plain table meets an
    // interface or class tag.
    ConversionResult to_host(const Value& v, const TypeTag& tag);
    Value to_script(const HostValue& h);
    // nullopt on rejection.
    std::optional<int> score_candidate(const MethodDescriptor& m, std::span<const Value> args) const;
    OverloadDecision select_overload(std::span<const MethodDescriptor> cands,
                                     std::span<const Value> args);

    // --- outbound
    TableRef host_new_instance(std::string_view class_name, std::span<const Value> ctor_args);
    TableRef host_bind_class(std::string_view class_name);
    TableRef host_new_array(const TypeTag& element, std::int64_t length);
    TableRef proxy_for(const HostObjectRef& obj);
    TableRef proxy_for(const HostArrayRef& arr);
    Value proxy_index(const TableRef& proxy, const Value& key);
    void proxy_newindex(const TableRef& proxy, const Value& key, Value v);

    static bool is_proxy(const Value& v);
    // The host object behind an object proxy, else null.
    static HostObjectRef object_of(const Value& v);

    // --- inbound
    HostObjectRef host_export(const TableRef& t, std::string_view type_name);
    HostObjectRef auto_wrap(const TableRef& t, const TypeTag& tag);
    // The script table a wrapper forwards to, else null.
    static TableRef wrapped_table(const HostObjectRef& obj);

private:
    class TableBinding;

    FunctionRef make_dispatcher(const TableRef& proxy, const HostClassDescriptor& cls,
                                const std::string& name, const std::vector<MethodDescriptor>& cands);
    std::vector<Value> dispatch(const HostClassDescriptor& cls, const std::string& name,
                                const std::vector<MethodDescriptor>& cands,
                                std::span<const Value> args);
    TableRef make_proxy(Value hostref, std::string label);
    Value array_index(const HostArrayRef& arr, const Value& key);
    void array_newindex(const HostArrayRef& arr, const Value& key, Value v);
    void install_builtins();

    Interpreter& interp_;
    std::shared_ptr<const Registry> registry_;
    std::unique_ptr<HostRuntime> runtime_;
    DispatchStats stats_;
    FunctionRef index_handler_;
    FunctionRef newindex_handler_;

    std::unordered_map<std::uint64_t, std::weak_ptr<Table>> object_proxies_;
    std::unordered_map<std::uint64_t, std::weak_ptr<Table>> array_proxies_;
    std::map<std::string, std::weak_ptr<Table>, std::less<>> class_proxies_;
    std::map<std::pair<std::uint64_t, std::string>, std::weak_ptr<HostObject>> wrappers_;
};

}  // namespace bs
