#include "bs/host/manifest.hpp"

#include <json.hpp>

#include "bs/error.hpp"

namespace bs {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
    throw Error(ErrorKind::InvalidDescriptor, "manifest: " + what);
}

std::string text_member(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
        bad(where + " needs a string '" + key + "'");
    return it->get<std::string>();
}

HostValue initial_value(const json& j, const TypeTag& tag, const std::string& where) {
    if (j.is_null())
        return std::monostate{};
    if (j.is_boolean())
        return j.get<bool>();
    if (j.is_number_integer() && tag.kind != TypeTag::Kind::Float)
        return j.get<std::int64_t>();
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
        return j.get<std::string>();
    bad(where + " has an unsupported initial value");
}

MethodBody bind_native(const json& j, const NativeTable& natives, const std::string& where) {
    auto it = j.find("native");
    if (it == j.end() || it->is_null())
        return {};
    if (!it->is_string())
        bad(where + " native key must be a string");
    auto n = natives.find(it->get<std::string>());
    if (n == natives.end())
        bad(where + " binds unknown native '" + it->get<std::string>() + "'");
    return n->second;
}

std::vector<TypeTag> param_tags(const json& j, const std::string& where) {
    std::vector<TypeTag> out;
    if (!j.contains("params"))
        return out;
    if (!j["params"].is_array())
        bad(where + " params must be a list");
    for (const auto& p : j["params"]) {
        if (!p.is_string())
            bad(where + " param types must be strings");
        out.push_back(TypeTag::parse(p.get<std::string>()));
    }
    return out;
}

HostClassDescriptor read_class(const json& j, const NativeTable& natives) {
    HostClassDescriptor d;
    d.name = text_member(j, "name", "class record");
    const std::string where = "class '" + d.name + "'";
    std::string kind = j.value("kind", "class");
    if (kind == "interface")
        d.kind = HostClassDescriptor::Kind::Interface;
    else if (kind != "class")
        bad(where + " has unknown kind '" + kind + "'");
    if (j.contains("base") && !j["base"].is_null())
        d.base = j["base"].get<std::string>();

    for (const auto& f : j.value("fields", json::array())) {
        std::string name = text_member(f, "name", where + " field");
        FieldSpec spec;
        spec.type = TypeTag::parse(text_member(f, "type", where + " field " + name));
        spec.is_static = f.value("static", false);
        if (f.contains("initial"))
            spec.initial = initial_value(f["initial"], spec.type, where + " field " + name);
        if (!d.fields.emplace(name, std::move(spec)).second)
            bad(where + " declares field '" + name + "' twice");
    }
    for (const auto& c : j.value("constructors", json::array())) {
        MethodDescriptor m;
        m.params = param_tags(c, where + " constructor");
        m.body = bind_native(c, natives, where + " constructor");
        d.constructors.push_back(std::move(m));
    }
    for (const auto& mj : j.value("methods", json::array())) {
        MethodDescriptor m;
        m.name = text_member(mj, "name", where + " method");
        m.params = param_tags(mj, where + " method " + m.name);
        m.returns = TypeTag::parse(mj.value("returns", "void"));
        m.is_static = mj.value("static", false);
        m.body = bind_native(mj, natives, where + " method " + m.name);
        std::string name = m.name;
        d.methods[name].push_back(std::move(m));
    }
    return d;
}

}  // namespace

void load_manifest(Registry& registry, std::string_view json_text, const NativeTable& natives) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        bad(e.what());
    }
    if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_array())
        bad("expected an object with a 'classes' list");
    for (const auto& c : doc["classes"]) {
        HostClassDescriptor d;
        try {
            d = read_class(c, natives);
        } catch (const json::exception& e) {
            bad(e.what());
        }
        registry.register_class(std::move(d));
    }
}

}  // namespace bs
