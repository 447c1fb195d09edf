#include "bs/bridge.hpp"
#include "bs/error.hpp"

namespace bs {

// Forwards host calls on a wrapper to the fields of one script table.
class Bridge::TableBinding : public ScriptBinding {
public:
    TableBinding(Bridge& bridge, TableRef table, bool interface_target)
        : bridge_(bridge), table_(std::move(table)), interface_(interface_target) {}

    const TableRef& table() const { return table_; }

    std::optional<HostValue> dispatch(HostRuntime&, HostObject& wrapper, const MethodDescriptor& m,
                                      std::span<const HostValue> args) override {
        Interpreter& in = bridge_.interp();
        // Looked up on every call so methods added after export are seen.
        Value f = in.table_get(table_, Value(m.name));
        if (f.is_nil()) {
            if (interface_)
                throw Error(ErrorKind::UnimplementedMethod,
                            wrapper.class_name + "." + m.signature() +
                                " is not implemented by the script object");
            return std::nullopt;
        }
        if (!f.is_function())
            throw Error(ErrorKind::NotCallable,
                        "field '" + m.name + "' of the script object is a " +
                            std::string(type_name(f.type())) + ", not a function");

        std::vector<Value> script_args;
        script_args.reserve(args.size() + 1);
        script_args.emplace_back(table_);
        for (const auto& a : args)
            script_args.push_back(bridge_.to_script(a));
        std::vector<Value> results = in.call(f, script_args);

        if (m.returns.kind == TypeTag::Kind::Void)
            return HostValue{};
        Value r = results.empty() ? Value() : results.front();
        ConversionResult c = bridge_.to_host(r, m.returns);
        if (!c.ok())
            throw Error(ErrorKind::ReturnTypeMismatch,
                        wrapper.class_name + "." + m.signature() + " must return " +
                            m.returns.to_string() + ", script returned " +
                            std::string(type_name(r.type())));
        return std::move(*c.value);
    }

private:
    Bridge& bridge_;
    TableRef table_;
    bool interface_;
};

TableRef Bridge::wrapped_table(const HostObjectRef& obj) {
    if (!obj || !obj->binding)
        return nullptr;
    if (auto* b = dynamic_cast<TableBinding*>(obj->binding.get()))
        return b->table();
    return nullptr;
}

HostObjectRef Bridge::host_export(const TableRef& t, std::string_view type_name) {
    const HostClassDescriptor& cls = registry_->lookup_class(type_name);
    if (t->is_host_proxy())
        throw Error(ErrorKind::ProxyNotExportable,
                    "a host proxy cannot be exported as " + cls.name);

    auto key = std::make_pair(t->id(), cls.name);
    if (auto it = wrappers_.find(key); it != wrappers_.end()) {
        if (HostObjectRef w = it->second.lock())
            return w;
    }

    auto wrapper = std::make_shared<HostObject>();
    wrapper->class_name = cls.name;
    wrapper->id = HostRuntime::next_id();
    wrapper->binding = std::make_shared<TableBinding>(*this, t, cls.is_interface());
    if (!cls.is_interface()) {
        const MethodDescriptor* ctor = nullptr;
        bool found = cls.constructors.empty();
        for (const auto& c : cls.constructors) {
            if (c.params.empty()) {
                ctor = &c;
                found = true;
            }
        }
        if (!found)
            throw Error(ErrorKind::NoDefaultConstructor,
                        cls.name + " has no constructor without arguments");
        // A base left behind by an earlier wrapper of this table keeps its state.
        HostObjectRef previous = object_of(t->raw_get(Value(kBase)));
        if (previous && registry_->is_subclass_of(previous->class_name, cls.name)) {
            wrapper->backing = previous;
        } else {
            wrapper->backing = runtime_->construct(cls, ctor, {});
            t->raw_set(Value(kBase), Value(proxy_for(wrapper->backing)));
        }
    }
    wrappers_[key] = wrapper;
    return wrapper;
}

HostObjectRef Bridge::auto_wrap(const TableRef& t, const TypeTag& tag) {
    return host_export(t, tag.name);
}

}  // namespace bs
