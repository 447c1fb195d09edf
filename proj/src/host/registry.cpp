#include "bs/host/registry.hpp"

#include <set>
#include <sstream>

#include "bs/error.hpp"

namespace bs {

// ---------------------------------------------------------------------------
// TypeTag

TypeTag TypeTag::parse(std::string_view s) {
    if (s.size() > 2 && s.substr(s.size() - 2) == "[]")
        return array(parse(s.substr(0, s.size() - 2)));
    if (s == "boolean")
        return boolean();
    if (s == "int")
        return integer();
    if (s == "float")
        return floating();
    if (s == "text")
        return text();
    if (s == "void")
        return void_();
    if (s.empty())
        throw Error(ErrorKind::InvalidDescriptor, "empty type name");
    return object(std::string(s));
}

std::string TypeTag::to_string() const {
    switch (kind) {
    case Kind::Boolean: return "boolean";
    case Kind::Integer: return "int";
    case Kind::Float: return "float";
    case Kind::Text: return "text";
    case Kind::Void: return "void";
    case Kind::Class:
    case Kind::Interface: return name;
    case Kind::Array: return element->to_string() + "[]";
    }
    return "?";
}

bool operator==(const TypeTag& a, const TypeTag& b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case TypeTag::Kind::Class:
    case TypeTag::Kind::Interface: return a.name == b.name;
    case TypeTag::Kind::Array: return *a.element == *b.element;
    default: return true;
    }
}

std::string MethodDescriptor::signature() const {
    std::string s = name + "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i)
            s += ",";
        s += params[i].to_string();
    }
    return s + ")";
}

HostValue zero_value(const TypeTag& tag) {
    switch (tag.kind) {
    case TypeTag::Kind::Boolean: return false;
    case TypeTag::Kind::Integer: return std::int64_t{0};
    case TypeTag::Kind::Float: return 0.0;
    case TypeTag::Kind::Text: return std::string();
    default: return std::monostate{};
    }
}

std::string host_value_to_string(const HostValue& v) {
    struct Visitor {
        std::string operator()(std::monostate) const { return "null"; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const {
            std::ostringstream ss;
            ss << d;
            return ss.str();
        }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(const HostObjectRef& o) const {
            return o->class_name + "@" + std::to_string(o->id);
        }
        std::string operator()(const HostArrayRef& a) const {
            return a->element.to_string() + "[" + std::to_string(a->elements.size()) + "]@" +
                   std::to_string(a->id);
        }
    };
    return std::visit(Visitor{}, v);
}

// ---------------------------------------------------------------------------
// Descriptors

const FieldSpec* HostClassDescriptor::find_field(std::string_view field) const {
    auto it = fields.find(std::string(field));
    return it == fields.end() ? nullptr : &it->second;
}

const std::vector<MethodDescriptor>* HostClassDescriptor::find_methods(
    std::string_view method) const {
    auto it = methods.find(std::string(method));
    return it == methods.end() ? nullptr : &it->second;
}

HostClassDescriptor overlay(const HostClassDescriptor& derived, const HostClassDescriptor& base) {
    HostClassDescriptor out = derived;
    for (const auto& [name, spec] : base.fields)
        out.fields.try_emplace(name, spec);
    for (const auto& [name, base_list] : base.methods) {
        auto& list = out.methods[name];
        std::vector<MethodDescriptor> merged = base_list;
        for (const auto& m : list) {
            bool replaced = false;
            for (auto& existing : merged) {
                if (existing.params == m.params) {
                    existing = m;
                    replaced = true;
                }
            }
            if (!replaced)
                merged.push_back(m);
        }
        list = std::move(merged);
    }
    return out;
}

std::string describe_members(const HostClassDescriptor& d) {
    std::ostringstream ss;
    for (const auto& [name, f] : d.fields)
        ss << "field " << name << ':' << f.type.to_string() << (f.is_static ? " static" : "")
           << " from " << f.declaring_class << '\n';
    for (const auto& [name, list] : d.methods) {
        std::set<std::string> lines;
        for (const auto& m : list)
            lines.insert(m.signature() + "->" + m.returns.to_string() +
                         (m.is_static ? " static" : "") + " from " + m.declaring_class);
        for (const auto& l : lines)
            ss << "method " << l << '\n';
    }
    return ss.str();
}

// ---------------------------------------------------------------------------
// Registry

void Registry::register_class(HostClassDescriptor d) {
    if (frozen_)
        throw Error(ErrorKind::RegistryFrozen, "cannot register '" + d.name + "' after freeze");
    if (d.name.empty())
        throw Error(ErrorKind::InvalidDescriptor, "class name is empty");
    if (declared_.count(d.name))
        throw Error(ErrorKind::DuplicateClass, "class '" + d.name + "' is already registered");

    if (d.is_interface()) {
        if (d.base)
            throw Error(ErrorKind::InvalidDescriptor, "interface '" + d.name + "' has a base");
        if (!d.fields.empty())
            throw Error(ErrorKind::InvalidDescriptor, "interface '" + d.name + "' declares fields");
        if (!d.constructors.empty())
            throw Error(ErrorKind::InvalidDescriptor,
                        "interface '" + d.name + "' declares constructors");
    }

    if (d.base) {
        auto it = declared_.find(*d.base);
        if (it == declared_.end())
            throw Error(ErrorKind::UnknownBase,
                        "base '" + *d.base + "' of '" + d.name + "' is not registered");
        if (it->second.is_interface())
            throw Error(ErrorKind::InvalidDescriptor,
                        "base '" + *d.base + "' of '" + d.name + "' is an interface");
    }

    for (auto& [name, f] : d.fields)
        f.declaring_class = d.name;
    for (auto& [name, list] : d.methods) {
        if (list.empty())
            throw Error(ErrorKind::InvalidDescriptor, "method '" + name + "' has no overloads");
        for (size_t i = 0; i < list.size(); ++i) {
            MethodDescriptor& m = list[i];
            m.name = name;
            m.declaring_class = d.name;
            if (d.is_interface() && (m.body || m.is_static))
                throw Error(ErrorKind::InvalidDescriptor,
                            "interface method '" + m.signature() + "' must be abstract");
            if (!d.is_interface() && !m.body)
                throw Error(ErrorKind::InvalidDescriptor,
                            "method '" + d.name + "." + m.signature() + "' has no body");
            if (m.is_static != list.front().is_static)
                throw Error(ErrorKind::InvalidDescriptor,
                            "overloads of '" + name + "' mix static and instance methods");
            for (size_t j = 0; j < i; ++j) {
                if (list[j].params == m.params)
                    throw Error(ErrorKind::InvalidDescriptor,
                                "duplicate overload '" + d.name + "." + m.signature() + "'");
            }
        }
    }
    for (size_t i = 0; i < d.constructors.size(); ++i) {
        d.constructors[i].name = "<init>";
        d.constructors[i].declaring_class = d.name;
        for (size_t j = 0; j < i; ++j) {
            if (d.constructors[j].params == d.constructors[i].params)
                throw Error(ErrorKind::InvalidDescriptor,
                            "duplicate constructor '" + d.constructors[i].signature() + "'");
        }
    }

    // Field and method names share one namespace across the whole chain.
    std::set<std::string> fields, methods;
    for (const HostClassDescriptor* c = &d; c;) {
        for (const auto& [name, f] : c->fields)
            fields.insert(name);
        for (const auto& [name, list] : c->methods) {
            methods.insert(name);
            auto own = d.methods.find(name);
            if (own != d.methods.end() && own->second.front().is_static != list.front().is_static)
                throw Error(ErrorKind::InvalidDescriptor,
                            "'" + name + "' is static in one class of the chain of '" + d.name +
                                "' and an instance method in another");
        }
        if (!c->base)
            break;
        auto it = declared_.find(*c->base);
        c = it == declared_.end() ? nullptr : &it->second;
    }
    for (const auto& name : fields) {
        if (methods.count(name))
            throw Error(ErrorKind::FieldMethodNameCollision,
                        "'" + name + "' is both a field and a method in '" + d.name + "'");
    }
    std::string key = d.name;
    declared_.emplace(std::move(key), std::move(d));
}

void Registry::check_type(const TypeTag& tag, const std::string& owner) const {
    if (tag.kind == TypeTag::Kind::Array) {
        if (tag.element->kind == TypeTag::Kind::Void)
            throw Error(ErrorKind::InvalidDescriptor, "void array in '" + owner + "'");
        check_type(*tag.element, owner);
        return;
    }
    if (tag.kind == TypeTag::Kind::Class || tag.kind == TypeTag::Kind::Interface) {
        if (!declared_.count(tag.name))
            throw Error(ErrorKind::ClassNotFound,
                        "type '" + tag.name + "' used by '" + owner + "' is not registered");
    }
}

void Registry::normalize(TypeTag& tag) const {
    if (tag.kind == TypeTag::Kind::Array) {
        TypeTag element = *tag.element;
        normalize(element);
        tag.element = std::make_shared<const TypeTag>(std::move(element));
        return;
    }
    if (tag.kind == TypeTag::Kind::Class || tag.kind == TypeTag::Kind::Interface) {
        tag.kind = declared_.at(tag.name).is_interface() ? TypeTag::Kind::Interface
                                                         : TypeTag::Kind::Class;
    }
}

void Registry::freeze() {
    if (frozen_)
        return;
    for (auto& [name, d] : declared_) {
        auto fix = [&](TypeTag& t, bool value_position) {
            check_type(t, name);
            if (value_position && t.kind == TypeTag::Kind::Void)
                throw Error(ErrorKind::InvalidDescriptor, "void parameter or field in '" + name + "'");
            normalize(t);
        };
        for (auto& [fname, f] : d.fields) {
            fix(f.type, true);
            if (f.initial && !std::holds_alternative<std::monostate>(*f.initial) &&
                f.type.kind == TypeTag::Kind::Float &&
                std::holds_alternative<std::int64_t>(*f.initial))
                f.initial = static_cast<double>(std::get<std::int64_t>(*f.initial));
        }
        for (auto& [mname, list] : d.methods) {
            for (auto& m : list) {
                for (auto& p : m.params)
                    fix(p, true);
                fix(m.returns, false);
            }
        }
        for (auto& c : d.constructors) {
            for (auto& p : c.params)
                fix(p, true);
        }
    }
    // Bases are always registered before their subclasses, but map order is
    // alphabetical, so flatten on demand with memoization.
    std::function<const HostClassDescriptor&(const std::string&)> flatten =
        [&](const std::string& name) -> const HostClassDescriptor& {
        if (auto it = flattened_.find(name); it != flattened_.end())
            return it->second;
        const HostClassDescriptor& d = declared_.at(name);
        HostClassDescriptor flat = d.base ? overlay(d, flatten(*d.base)) : d;
        return flattened_.emplace(name, std::move(flat)).first->second;
    };
    for (const auto& [name, d] : declared_)
        flatten(name);
    frozen_ = true;
    // initial values must conform to their declared tags
    for (const auto& [name, d] : flattened_) {
        for (const auto& [fname, f] : d.fields) {
            if (f.initial && !conforms(*f.initial, f.type)) {
                frozen_ = false;
                flattened_.clear();
                throw Error(ErrorKind::TypeMismatch,
                            "initial value of '" + name + "." + fname + "' is not a " +
                                f.type.to_string());
            }
        }
    }
}

const HostClassDescriptor& Registry::lookup_class(std::string_view name) const {
    if (!frozen_)
        throw Error(ErrorKind::NotFrozen, "registry must be frozen before lookup");
    auto it = flattened_.find(name);
    if (it == flattened_.end())
        throw Error(ErrorKind::ClassNotFound, "class '" + std::string(name) + "' not found");
    return it->second;
}

bool Registry::has_class(std::string_view name) const { return declared_.count(name) != 0; }

std::vector<std::string> Registry::class_names() const {
    std::vector<std::string> out;
    for (const auto& [name, d] : declared_)
        out.push_back(name);
    return out;
}

bool Registry::is_subclass_of(std::string_view derived, std::string_view base) const {
    std::string_view cur = derived;
    while (true) {
        if (cur == base)
            return true;
        auto it = declared_.find(cur);
        if (it == declared_.end() || !it->second.base)
            return false;
        cur = *it->second.base;
    }
}

bool Registry::conforms(const HostValue& v, const TypeTag& tag) const {
    switch (tag.kind) {
    case TypeTag::Kind::Boolean: return std::holds_alternative<bool>(v);
    case TypeTag::Kind::Integer: return std::holds_alternative<std::int64_t>(v);
    case TypeTag::Kind::Float: return std::holds_alternative<double>(v);
    case TypeTag::Kind::Text: return std::holds_alternative<std::string>(v);
    case TypeTag::Kind::Void: return std::holds_alternative<std::monostate>(v);
    case TypeTag::Kind::Class:
    case TypeTag::Kind::Interface:
        if (std::holds_alternative<std::monostate>(v))
            return true;
        if (const auto* o = std::get_if<HostObjectRef>(&v))
            return is_subclass_of((*o)->class_name, tag.name);
        return false;
    case TypeTag::Kind::Array:
        if (std::holds_alternative<std::monostate>(v))
            return true;
        if (const auto* a = std::get_if<HostArrayRef>(&v))
            return (*a)->element == *tag.element;
        return false;
    }
    return false;
}

}  // namespace bs
