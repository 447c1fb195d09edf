#include <cmath>

#include "bs/bridge.hpp"
#include "bs/error.hpp"

namespace bs {

namespace {

constexpr double kTwo63 = 9223372036854775808.0;

bool integral(double d) { return std::isfinite(d) && std::trunc(d) == d && std::fabs(d) < kTwo63; }

const Value* hostref_of(const Value& v) {
    const TableRef* t = v.table_if();
    if (!t || !(*t)->is_host_proxy())
        return nullptr;
    return (*t)->find(kHostRef);
}

}  // namespace

bool Bridge::is_proxy(const Value& v) { return hostref_of(v) != nullptr; }

HostObjectRef Bridge::object_of(const Value& v) {
    const Value* ref = hostref_of(v);
    if (!ref || ref->type() != Value::Type::HostObject)
        return nullptr;
    return ref->as_host_object();
}

int Bridge::score_value(const Value& v, const TypeTag& tag) const {
    using K = TypeTag::Kind;
    switch (v.type()) {
    case Value::Type::Nil: return tag.is_reference() ? 1 : 0;
    case Value::Type::Boolean: return tag.kind == K::Boolean ? 2 : 0;
    case Value::Type::Number:
        if (tag.kind == K::Float)
            return 2;
        if (tag.kind == K::Integer)
            return integral(v.as_number()) ? 1 : 0;
        return 0;
    case Value::Type::Text: return tag.kind == K::Text ? 2 : 0;
    case Value::Type::HostObject: {
        if (tag.kind != K::Class && tag.kind != K::Interface)
            return 0;
        const std::string& cls = v.as_host_object()->class_name;
        if (cls == tag.name)
            return 2;
        return registry_->is_subclass_of(cls, tag.name) ? 1 : 0;
    }
    case Value::Type::HostArray:
        return tag.kind == K::Array && v.as_host_array()->element == *tag.element ? 2 : 0;
    case Value::Type::Table: {
        if (const Value* ref = hostref_of(v))
            return ref->type() == Value::Type::HostClass ? 0 : score_value(*ref, tag);
        if (tag.kind == K::Interface)
            return 1;
        if (tag.kind == K::Class) {
            // a wrapper needs a backing instance built without arguments
            const HostClassDescriptor& cls = registry_->lookup_class(tag.name);
            if (cls.constructors.empty())
                return 1;
            for (const auto& c : cls.constructors) {
                if (c.params.empty())
                    return 1;
            }
        }
        return 0;
    }
    case Value::Type::Function:
    case Value::Type::HostClass: return 0;
    }
    return 0;
}

ConversionResult Bridge::to_host(const Value& v, const TypeTag& tag) {
    int score = score_value(v, tag);
    if (score == 0)
        return ConversionResult::incompatible(std::string(type_name(v.type())) + " is not " +
                                              tag.to_string());
    switch (v.type()) {
    case Value::Type::Nil: return ConversionResult::converted(std::monostate{}, score);
    case Value::Type::Boolean: return ConversionResult::converted(v.as_bool(), score);
    case Value::Type::Number:
        if (tag.kind == TypeTag::Kind::Integer)
            return ConversionResult::converted(static_cast<std::int64_t>(v.as_number()), score);
        return ConversionResult::converted(v.as_number(), score);
    case Value::Type::Text: return ConversionResult::converted(v.as_text(), score);
    case Value::Type::HostObject: return ConversionResult::converted(v.as_host_object(), score);
    case Value::Type::HostArray: return ConversionResult::converted(v.as_host_array(), score);
    case Value::Type::Table: {
        if (const Value* ref = hostref_of(v)) {
            if (ref->type() == Value::Type::HostObject)
                return ConversionResult::converted(ref->as_host_object(), score);
            return ConversionResult::converted(ref->as_host_array(), score);
        }
        return ConversionResult::converted(auto_wrap(v.as_table(), tag), score);
    }
    default: break;
    }
    return ConversionResult::incompatible("unconvertible value");
}

Value Bridge::to_script(const HostValue& h) {
    struct Visitor {
        Bridge& b;
        Value operator()(std::monostate) const { return {}; }
        Value operator()(bool x) const { return Value(x); }
        Value operator()(std::int64_t x) const { return Value(static_cast<double>(x)); }
        Value operator()(double x) const { return Value(x); }
        Value operator()(const std::string& s) const { return Value(s); }
        Value operator()(const HostObjectRef& o) const {
            if (!o)
                return {};
            if (TableRef t = wrapped_table(o))
                return Value(t);
            return Value(b.proxy_for(o));
        }
        Value operator()(const HostArrayRef& a) const {
            return a ? Value(b.proxy_for(a)) : Value();
        }
    };
    return std::visit(Visitor{*this}, h);
}

std::optional<int> Bridge::score_candidate(const MethodDescriptor& m,
                                           std::span<const Value> args) const {
    if (m.params.size() != args.size())
        return std::nullopt;
    int total = 0;
    for (size_t i = 0; i < args.size(); ++i) {
        int s = score_value(args[i], m.params[i]);
        if (s == 0)
            return std::nullopt;
        total += s;
    }
    return total;
}

OverloadDecision Bridge::select_overload(std::span<const MethodDescriptor> cands,
                                         std::span<const Value> args) {
    OverloadDecision d;
    int best = -1;
    for (const auto& m : cands) {
        std::optional<int> s = score_candidate(m, args);
        if (!s)
            continue;
        if (*s > best) {
            best = *s;
            d.tied.assign(1, &m);
        } else if (*s == best) {
            d.tied.push_back(&m);
        }
    }
    if (d.tied.empty())
        return d;
    d.score = best;
    if (d.tied.size() > 1) {
        d.kind = OverloadDecision::Kind::Ambiguous;
        return d;
    }
    d.kind = OverloadDecision::Kind::Selected;
    d.method = d.tied.front();
    d.tied.clear();
    d.args.reserve(args.size());
    for (size_t i = 0; i < args.size(); ++i)
        d.args.push_back(*to_host(args[i], d.method->params[i]).value);
    return d;
}

}  // namespace bs
