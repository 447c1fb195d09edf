#include <cmath>
#include <cstdio>

#include "bs/bridge.hpp"
#include "bs/error.hpp"

namespace bs {

namespace {

const char* kBuiltinNames[] = {"hostNewInstance", "javaNewInstance", "hostBindClass",
                               "javaBindClass",   "hostExport",      "javaExport",
                               "hostNewArray"};

std::string key_text(const Value& key) {
    if (key.is_text())
        return key.as_text();
    return Interpreter::to_display(key);
}

const std::string& text_arg(std::span<const Value> args, size_t i, const char* fn) {
    if (i >= args.size() || !args[i].is_text())
        throw Error(ErrorKind::RuntimeError,
                    "bad argument #" + std::to_string(i + 1) + " to '" + fn + "' (text expected)");
    return args[i].as_text();
}

std::string hex_label(const char* prefix, const std::string& name, std::uint64_t id) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ": 0x%08llx", static_cast<unsigned long long>(id));
    return prefix + name + buf;
}

}  // namespace

std::uint64_t DispatchStats::fires(const TableRef& proxy, std::string_view member) const {
    auto it = fallback_fires.find({proxy->id(), std::string(member)});
    return it == fallback_fires.end() ? 0 : it->second;
}

std::uint64_t DispatchStats::total_fires() const {
    std::uint64_t n = 0;
    for (const auto& [key, count] : fallback_fires)
        n += count;
    return n;
}

Bridge::Bridge(Interpreter& interp, std::shared_ptr<const Registry> registry)
    : interp_(interp),
      registry_(std::move(registry)),
      runtime_(std::make_unique<HostRuntime>(registry_, interp.out())) {
    index_handler_ = make_native("proxy index", [this](Interpreter&, std::span<const Value> args) {
        return std::vector<Value>{proxy_index(args[0].as_table(), args[1])};
    });
    newindex_handler_ =
        make_native("proxy newindex", [this](Interpreter&, std::span<const Value> args) {
            proxy_newindex(args[0].as_table(), args[1], args.size() > 2 ? args[2] : Value());
            return std::vector<Value>{};
        });
    install_builtins();
}

Bridge::~Bridge() {
    for (const char* name : kBuiltinNames)
        interp_.globals().set(name, Value());
}

void Bridge::install_builtins() {
    auto new_instance = [this](Interpreter&, std::span<const Value> args) {
        const std::string& name = text_arg(args, 0, "hostNewInstance");
        return std::vector<Value>{host_new_instance(name, args.subspan(1))};
    };
    auto bind_class = [this](Interpreter&, std::span<const Value> args) {
        return std::vector<Value>{host_bind_class(text_arg(args, 0, "hostBindClass"))};
    };
    auto export_ = [this](Interpreter&, std::span<const Value> args) {
        if (args.empty() || !args[0].is_table())
            throw Error(ErrorKind::RuntimeError, "bad argument #1 to 'hostExport' (table expected)");
        return std::vector<Value>{
            Value(host_export(args[0].as_table(), text_arg(args, 1, "hostExport")))};
    };
    interp_.register_native("hostNewInstance", new_instance);
    interp_.register_native("javaNewInstance", new_instance);
    interp_.register_native("hostBindClass", bind_class);
    interp_.register_native("javaBindClass", bind_class);
    interp_.register_native("hostExport", export_);
    interp_.register_native("javaExport", export_);
    interp_.register_native("hostNewArray", [this](Interpreter&, std::span<const Value> args) {
        TypeTag tag = TypeTag::parse(text_arg(args, 0, "hostNewArray"));
        if (tag.is_reference() && tag.kind != TypeTag::Kind::Array &&
            !registry_->has_class(tag.name))
            throw Error(ErrorKind::ClassNotFound, "class '" + tag.name + "' not found");
        if (args.size() < 2 || !args[1].is_number() || args[1].as_number() < 0 ||
            std::trunc(args[1].as_number()) != args[1].as_number())
            throw Error(ErrorKind::RuntimeError,
                        "bad argument #2 to 'hostNewArray' (non-negative integer expected)");
        return std::vector<Value>{
            host_new_array(tag, static_cast<std::int64_t>(args[1].as_number()))};
    });
}

// ---------------------------------------------------------------------------
// Proxies

TableRef Bridge::make_proxy(Value hostref, std::string label) {
    TableRef t = make_table();
    t->raw_set(Value(kHostRef), std::move(hostref));
    t->mark_host_proxy(std::move(label));
    t->set_index_handler(index_handler_);
    t->set_newindex_handler(newindex_handler_);
    return t;
}

TableRef Bridge::proxy_for(const HostObjectRef& obj) {
    auto& slot = object_proxies_[obj->id];
    if (TableRef t = slot.lock())
        return t;
    TableRef t = make_proxy(Value(obj), hex_label("hostobject ", obj->class_name, obj->id));
    slot = t;
    return t;
}

TableRef Bridge::proxy_for(const HostArrayRef& arr) {
    auto& slot = array_proxies_[arr->id];
    if (TableRef t = slot.lock())
        return t;
    TableRef t = make_proxy(Value(arr), hex_label("hostarray ", arr->element.to_string() + "[]",
                                                  arr->id));
    slot = t;
    return t;
}

TableRef Bridge::host_bind_class(std::string_view class_name) {
    const HostClassDescriptor& cls = registry_->lookup_class(class_name);
    auto it = class_proxies_.find(class_name);
    if (it != class_proxies_.end()) {
        if (TableRef t = it->second.lock())
            return t;
    }
    TableRef t = make_proxy(Value(HostClassRef{cls.name}), "hostclass " + cls.name);
    class_proxies_[cls.name] = t;
    return t;
}

TableRef Bridge::host_new_instance(std::string_view class_name, std::span<const Value> ctor_args) {
    const HostClassDescriptor& cls = registry_->lookup_class(class_name);
    if (cls.is_interface())
        throw Error(ErrorKind::InterfaceNotInstantiable,
                    "cannot instantiate interface '" + cls.name + "'");
    static const MethodDescriptor implicit_ctor{"<init>", {}, TypeTag::void_(), false, {}, {}};
    std::span<const MethodDescriptor> cands =
        cls.constructors.empty() ? std::span<const MethodDescriptor>(&implicit_ctor, 1)
                                 : std::span<const MethodDescriptor>(cls.constructors);
    OverloadDecision d = select_overload(cands, ctor_args);
    if (d.kind == OverloadDecision::Kind::NoMatch)
        throw Error(ErrorKind::NoMatch, "no constructor of " + cls.name + " matches the arguments");
    if (d.kind == OverloadDecision::Kind::Ambiguous)
        throw Error(ErrorKind::Ambiguous, "constructor call of " + cls.name + " is ambiguous");
    HostObjectRef obj = runtime_->construct(cls, d.method->body ? d.method : nullptr, d.args);
    return proxy_for(obj);
}

TableRef Bridge::host_new_array(const TypeTag& element, std::int64_t length) {
    return proxy_for(runtime_->array_new(element, length));
}

Value Bridge::proxy_index(const TableRef& proxy, const Value& key) {
    const Value* ref = proxy->find(kHostRef);
    if (!ref)
        throw Error(ErrorKind::RuntimeError, "not a host proxy");
    if (ref->type() == Value::Type::HostArray)
        return array_index(ref->as_host_array(), key);

    const bool is_class = ref->type() == Value::Type::HostClass;
    const HostClassDescriptor& cls = registry_->lookup_class(
        is_class ? ref->as_host_class().name : ref->as_host_object()->class_name);
    std::string name = key_text(key);
    ++stats_.fallback_fires[{proxy->id(), name}];

    if (key.is_text()) {
        if (const FieldSpec* f = cls.find_field(name); f && f->is_static == is_class) {
            if (is_class)
                return to_script(runtime_->get_static_field(cls.name, name));
            return to_script(runtime_->get_field(ref->as_host_object(), name));
        }
        if (const auto* ms = cls.find_methods(name); ms && ms->front().is_static == is_class)
            return Value(make_dispatcher(proxy, cls, name, *ms));
    }
    throw Error(ErrorKind::NoSuchMember,
                (is_class ? "class " : "") + cls.name + " has no member '" + name + "'");
}

void Bridge::proxy_newindex(const TableRef& proxy, const Value& key, Value v) {
    if (key == Value(kHostRef))
        throw Error(ErrorKind::ReservedField, "'__hostref' of a host proxy is read-only");
    const Value* ref = proxy->find(kHostRef);
    if (!ref)
        throw Error(ErrorKind::RuntimeError, "not a host proxy");
    if (ref->type() == Value::Type::HostArray)
        return array_newindex(ref->as_host_array(), key, std::move(v));

    const bool is_class = ref->type() == Value::Type::HostClass;
    const HostClassDescriptor& cls = registry_->lookup_class(
        is_class ? ref->as_host_class().name : ref->as_host_object()->class_name);
    std::string name = key_text(key);
    if (key.is_text()) {
        if (const FieldSpec* f = cls.find_field(name); f && f->is_static == is_class) {
            ConversionResult c = to_host(v, f->type);
            if (!c.ok())
                throw Error(ErrorKind::TypeMismatch,
                            "cannot assign to " + cls.name + "." + name + ": " + c.reason);
            if (is_class)
                runtime_->set_static_field(cls.name, name, std::move(*c.value));
            else
                runtime_->set_field(ref->as_host_object(), name, std::move(*c.value));
            return;
        }
        if (const auto* ms = cls.find_methods(name); ms && ms->front().is_static == is_class)
            throw Error(ErrorKind::TypeMismatch,
                        "cannot assign to method '" + name + "' of " + cls.name);
    }
    throw Error(ErrorKind::NoSuchMember,
                (is_class ? "class " : "") + cls.name + " has no member '" + name + "'");
}

Value Bridge::array_index(const HostArrayRef& arr, const Value& key) {
    if (key == Value("length"))
        return Value(static_cast<double>(runtime_->array_length(arr)));
    if (const double* n = key.number_if(); n && std::trunc(*n) == *n && std::isfinite(*n))
        return to_script(runtime_->array_get(arr, static_cast<std::int64_t>(*n) - 1));
    throw Error(ErrorKind::NoSuchMember, "array has no member '" + key_text(key) + "'");
}

void Bridge::array_newindex(const HostArrayRef& arr, const Value& key, Value v) {
    if (key == Value("length"))
        throw Error(ErrorKind::TypeMismatch, "array length is read-only");
    if (const double* n = key.number_if(); n && std::trunc(*n) == *n && std::isfinite(*n)) {
        std::int64_t index = static_cast<std::int64_t>(*n) - 1;
        if (index < 0 || index >= runtime_->array_length(arr))
            throw Error(ErrorKind::IndexOutOfBounds,
                        "index " + number_to_text(*n) + " outside [1, " +
                            std::to_string(runtime_->array_length(arr)) + "]");
        ConversionResult c = to_host(v, arr->element);
        if (!c.ok())
            throw Error(ErrorKind::TypeMismatch, "array element: " + c.reason);
        runtime_->array_set(arr, index, std::move(*c.value));
        return;
    }
    throw Error(ErrorKind::NoSuchMember, "array has no member '" + key_text(key) + "'");
}

// ---------------------------------------------------------------------------
// Dispatch

FunctionRef Bridge::make_dispatcher(const TableRef& proxy, const HostClassDescriptor& cls,
                                    const std::string& name,
                                    const std::vector<MethodDescriptor>& cands) {
    auto fn = std::make_shared<Function>();
    fn->name = cls.name + "." + name;
    std::weak_ptr<Table> weak_proxy = proxy;
    std::weak_ptr<Function> weak_self = fn;
    const HostClassDescriptor* c = &cls;
    const std::vector<MethodDescriptor>* list = &cands;
    fn->native = [this, weak_proxy, weak_self, c, name, list](Interpreter&,
                                                             std::span<const Value> args) {
        // Step two from now on: later lookups find the dispatcher in the table.
        if (TableRef p = weak_proxy.lock(); p && !p->find(std::string_view(name))) {
            if (FunctionRef self = weak_self.lock())
                p->raw_set(Value(name), Value(self));
        }
        return dispatch(*c, name, *list, args);
    };
    return fn;
}

std::vector<Value> Bridge::dispatch(const HostClassDescriptor& cls, const std::string& name,
                                    const std::vector<MethodDescriptor>& cands,
                                    std::span<const Value> args) {
    ++stats_.dispatches;
    const bool is_static = cands.front().is_static;
    HostObjectRef receiver;
    if (is_static) {
        if (!args.empty()) {
            const Value* ref = args[0].is_table() && args[0].as_table()->is_host_proxy()
                                   ? args[0].as_table()->find(kHostRef)
                                   : nullptr;
            if (ref && ref->type() == Value::Type::HostClass &&
                registry_->is_subclass_of(ref->as_host_class().name, cls.name))
                args = args.subspan(1);
        }
    } else {
        receiver = args.empty() ? nullptr : object_of(args[0]);
        if (!receiver || !registry_->is_subclass_of(receiver->class_name, cls.name))
            throw Error(ErrorKind::ReceiverMismatch,
                        cls.name + "." + name + " needs a " + cls.name +
                            " receiver (use ':' to call methods)");
        args = args.subspan(1);
    }

    OverloadDecision d = select_overload(cands, args);
    if (d.kind == OverloadDecision::Kind::NoMatch)
        throw Error(ErrorKind::NoMatch, "no overload of " + cls.name + "." + name +
                                            " matches the arguments");
    if (d.kind == OverloadDecision::Kind::Ambiguous) {
        std::string sigs;
        for (const auto* m : d.tied)
            sigs += (sigs.empty() ? "" : ", ") + m->signature();
        throw Error(ErrorKind::Ambiguous,
                    "call to " + cls.name + "." + name + " is ambiguous between " + sigs);
    }
    HostValue result = runtime_->invoke(*d.method, receiver, d.args);
    if (d.method->returns.kind == TypeTag::Kind::Void)
        return {};
    return {to_script(result)};
}

}  // namespace bs
