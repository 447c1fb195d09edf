#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bs/error.hpp"
#include "bs/host/demo_classes.hpp"
#include "bs/host/manifest.hpp"
#include "bs/host/runtime.hpp"

using namespace bs;

namespace {

ErrorKind error_kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::RuntimeError;
}

MethodBody noop() {
    return [](HostRuntime&, const HostObjectRef&, std::span<const HostValue>) {
        return HostValue{};
    };
}

MethodBody returns_text(std::string s) {
    return [s](HostRuntime&, const HostObjectRef&, std::span<const HostValue>) {
        return HostValue{s};
    };
}

HostClassDescriptor point_descriptor() {
    HostClassDescriptor d;
    d.name = "Point";
    d.fields["x"] = FieldSpec{TypeTag::floating(), false, 0.0, {}};
    d.fields["y"] = FieldSpec{TypeTag::floating(), false, 0.0, {}};
    MethodDescriptor move;
    move.name = "move";
    move.params = {TypeTag::floating(), TypeTag::floating()};
    move.body = demo_natives().at("Point.move");
    d.methods["move"].push_back(move);
    return d;
}

HostClassDescriptor simple_class(std::string name, std::optional<std::string> base = {}) {
    HostClassDescriptor d;
    d.name = std::move(name);
    d.base = std::move(base);
    return d;
}

const MethodDescriptor& only(const HostClassDescriptor& d, const std::string& name) {
    const auto* list = d.find_methods(name);
    REQUIRE(list != nullptr);
    REQUIRE(list->size() == 1);
    return list->front();
}

}  // namespace

TEST_SUITE("register_class") {
    TEST_CASE("Point registers") {
        Registry r;
        r.register_class(point_descriptor());
        CHECK(r.has_class("Point"));
    }

    TEST_CASE("duplicates and unknown bases") {
        Registry r;
        r.register_class(point_descriptor());
        CHECK(error_kind_of([&] { r.register_class(point_descriptor()); }) ==
              ErrorKind::DuplicateClass);
        CHECK(error_kind_of([&] { r.register_class(simple_class("X", "Nope")); }) ==
              ErrorKind::UnknownBase);
    }

    TEST_CASE("field and method names may not collide, even across the chain") {
        Registry r;
        HostClassDescriptor d = point_descriptor();
        d.fields["move"] = FieldSpec{TypeTag::integer(), false, {}, {}};
        CHECK(error_kind_of([&] { r.register_class(d); }) == ErrorKind::FieldMethodNameCollision);

        r.register_class(point_descriptor());
        HostClassDescriptor sub = simple_class("Point3", "Point");
        sub.fields["move"] = FieldSpec{TypeTag::floating(), false, {}, {}};
        CHECK(error_kind_of([&] { r.register_class(sub); }) ==
              ErrorKind::FieldMethodNameCollision);
    }

    TEST_CASE("malformed descriptors") {
        Registry r;
        HostClassDescriptor iface = simple_class("I");
        iface.kind = HostClassDescriptor::Kind::Interface;
        iface.fields["f"] = FieldSpec{TypeTag::integer(), false, {}, {}};
        CHECK(error_kind_of([&] { r.register_class(iface); }) == ErrorKind::InvalidDescriptor);

        HostClassDescriptor dup = point_descriptor();
        dup.methods["move"].push_back(dup.methods["move"].front());
        CHECK(error_kind_of([&] { r.register_class(dup); }) == ErrorKind::InvalidDescriptor);

        HostClassDescriptor bodiless = simple_class("B");
        bodiless.methods["m"].push_back(MethodDescriptor{});
        CHECK(error_kind_of([&] { r.register_class(bodiless); }) == ErrorKind::InvalidDescriptor);

        HostClassDescriptor good_iface = simple_class("J");
        good_iface.kind = HostClassDescriptor::Kind::Interface;
        r.register_class(good_iface);
        CHECK(error_kind_of([&] { r.register_class(simple_class("C", "J")); }) ==
              ErrorKind::InvalidDescriptor);
    }
}

TEST_SUITE("freeze") {
    TEST_CASE("lifecycle") {
        Registry r;
        r.register_class(point_descriptor());
        CHECK(error_kind_of([&] { r.lookup_class("Point"); }) == ErrorKind::NotFrozen);
        CHECK_FALSE(r.frozen());
        r.freeze();
        CHECK(r.frozen());
        r.freeze();
        CHECK(r.frozen());
        CHECK(error_kind_of([&] { r.register_class(simple_class("Late")); }) ==
              ErrorKind::RegistryFrozen);
        // the registry is unchanged by the failed mutation
        CHECK_FALSE(r.has_class("Late"));
        CHECK(r.lookup_class("Point").name == "Point");
    }

    TEST_CASE("every mutating call fails after freeze, whatever the descriptor") {
        Registry r;
        r.freeze();
        for (auto d : {point_descriptor(), simple_class(""), simple_class("A", "Nope")})
            CHECK(error_kind_of([&] { r.register_class(d); }) == ErrorKind::RegistryFrozen);
    }

    TEST_CASE("unknown type references are reported at freeze") {
        Registry r;
        HostClassDescriptor d = simple_class("Holder");
        d.fields["ref"] = FieldSpec{TypeTag::object("ghost.Class"), false, {}, {}};
        r.register_class(d);
        CHECK(error_kind_of([&] { r.freeze(); }) == ErrorKind::ClassNotFound);
    }

    TEST_CASE("class tags naming interfaces are normalized") {
        auto reg = demo_registry();
        const auto& add = only(reg->lookup_class("demo.EventSource"), "addActionListener");
        CHECK(add.params[0].kind == TypeTag::Kind::Interface);
        const auto& f = *reg->lookup_class("demo.EventSource").find_field("listeners");
        CHECK(f.type.element->kind == TypeTag::Kind::Interface);
    }
}

TEST_SUITE("lookup_class") {
    TEST_CASE("Point and missing classes") {
        auto reg = demo_registry();
        const auto& p = reg->lookup_class("Point");
        CHECK(p.name == "Point");
        CHECK(p.find_field("x") != nullptr);
        CHECK(only(p, "move").params.size() == 2);
        CHECK(error_kind_of([&] { reg->lookup_class("ghost.Class"); }) == ErrorKind::ClassNotFound);
    }

    TEST_CASE("two-level flattening") {
        Registry r;
        HostClassDescriptor b = simple_class("B");
        MethodDescriptor f;
        f.name = "f";
        f.body = returns_text("B.f");
        b.methods["f"].push_back(f);
        r.register_class(b);
        r.register_class(simple_class("D", "B"));
        r.freeze();
        const auto& d = r.lookup_class("D");
        CHECK(only(d, "f").declaring_class == "B");
        CHECK(r.is_subclass_of("D", "B"));
        CHECK(r.is_subclass_of("D", "D"));
        CHECK_FALSE(r.is_subclass_of("B", "D"));
    }

    TEST_CASE("derived entries shadow base entries of the same signature") {
        auto reg = demo_registry();
        const auto& button = reg->lookup_class("demo.Button");
        CHECK(only(button, "fire").declaring_class == "demo.EventSource");
        CHECK(button.find_field("listeners")->declaring_class == "demo.EventSource");
        CHECK(only(button, "press").declaring_class == "demo.Button");
        CHECK(button.constructors.size() == 2);
    }
}

TEST_SUITE("flattening properties") {
    // Independent oracle: walk the chain from the most derived class and take
    // the first declaration of each (name, params) pair.
    std::string oracle_members(const std::vector<const HostClassDescriptor*>& chain) {
        std::map<std::string, std::string> fields;
        std::map<std::string, std::set<std::string>> methods;
        std::set<std::string> seen_sigs;
        for (const auto* c : chain) {
            for (const auto& [name, f] : c->fields) {
                if (!fields.count(name)) {
                    std::ostringstream ss;
                    ss << "field " << name << ':' << f.type.to_string()
                       << (f.is_static ? " static" : "") << " from " << f.declaring_class << '\n';
                    fields[name] = ss.str();
                }
            }
            for (const auto& [name, list] : c->methods) {
                for (const auto& m : list) {
                    if (seen_sigs.insert(m.signature()).second)
                        methods[name].insert(m.signature() + "->" + m.returns.to_string() +
                                             (m.is_static ? " static" : "") + " from " +
                                             m.declaring_class);
                }
            }
        }
        std::string out;
        for (const auto& [n, line] : fields)
            out += line;
        for (const auto& [n, lines] : methods)
            for (const auto& l : lines)
                out += "method " + l + '\n';
        return out;
    }

    HostClassDescriptor random_level(std::mt19937& rng, const std::string& name,
                                     std::optional<std::string> base) {
        static const std::vector<TypeTag> tags = {TypeTag::integer(), TypeTag::floating(),
                                                  TypeTag::text(), TypeTag::boolean()};
        HostClassDescriptor d = simple_class(name, std::move(base));
        std::uniform_int_distribution<int> coin(0, 1), tag(0, 3), arity(0, 2);
        // fields draw from f0..f3, methods from m0..m3, so names never collide
        for (int i = 0; i < 4; ++i) {
            if (coin(rng))
                d.fields["f" + std::to_string(i)] = FieldSpec{tags[tag(rng)], false, {}, name};
        }
        for (int i = 0; i < 4; ++i) {
            if (!coin(rng))
                continue;
            std::set<std::vector<std::string>> used;
            int overloads = 1 + coin(rng);
            for (int k = 0; k < overloads; ++k) {
                MethodDescriptor m;
                m.name = "m" + std::to_string(i);
                int n = arity(rng);
                std::vector<std::string> key;
                for (int p = 0; p < n; ++p) {
                    m.params.push_back(tags[tag(rng)]);
                    key.push_back(m.params.back().to_string());
                }
                if (!used.insert(key).second)
                    continue;
                m.returns = tags[tag(rng)];
                m.body = noop();
                m.declaring_class = name;
                d.methods[m.name].push_back(std::move(m));
            }
        }
        return d;
    }

    TEST_CASE("flattening is associative and matches the chain-walk oracle") {
        std::mt19937 rng(20240611);
        for (int trial = 0; trial < 500; ++trial) {
            CAPTURE(trial);
            HostClassDescriptor a = random_level(rng, "A", std::nullopt);
            HostClassDescriptor b = random_level(rng, "B", "A");
            HostClassDescriptor d = random_level(rng, "D", "B");

            std::string right = describe_members(overlay(d, overlay(b, a)));
            std::string left = describe_members(overlay(overlay(d, b), a));
            CHECK(left == right);
            CHECK(right == oracle_members({&d, &b, &a}));

            Registry r;
            r.register_class(a);
            r.register_class(b);
            r.register_class(d);
            r.freeze();
            CHECK(describe_members(r.lookup_class("D")) == right);
        }
    }
}

TEST_SUITE("instantiate") {
    TEST_CASE("Point starts at the origin") {
        HostRuntime rt(demo_registry());
        HostObjectRef p = rt.instantiate("Point", {});
        CHECK(std::get<double>(rt.get_field(p, "x")) == 0.0);
        CHECK(std::get<double>(rt.get_field(p, "y")) == 0.0);
        CHECK(p->fields.size() == 2);
        CHECK(rt.fields_conform(*p));
    }

    TEST_CASE("labeled button") {
        HostRuntime rt(demo_registry());
        const HostValue args[] = {std::string("Execute")};
        HostObjectRef b = rt.instantiate("demo.Button", args);
        CHECK(std::get<std::string>(rt.get_field(b, "label")) == "Execute");
        CHECK(b->fields.count("listeners") == 1);
        CHECK(rt.fields_conform(*b));
    }

    TEST_CASE("interfaces and unknown classes") {
        HostRuntime rt(demo_registry());
        CHECK(error_kind_of([&] { rt.instantiate("demo.ActionListener", {}); }) ==
              ErrorKind::InterfaceNotInstantiable);
        CHECK(error_kind_of([&] { rt.instantiate("ghost", {}); }) == ErrorKind::ClassNotFound);
        const HostValue bad[] = {std::int64_t{3}};
        CHECK(error_kind_of([&] { rt.instantiate("demo.Button", bad); }) == ErrorKind::NoMatch);
    }

    TEST_CASE("the runtime needs a frozen registry") {
        auto r = std::make_shared<Registry>();
        CHECK(error_kind_of([&] { HostRuntime rt(r); }) == ErrorKind::NotFrozen);
    }
}

TEST_SUITE("invoke") {
    TEST_CASE("move displaces the point") {
        HostRuntime rt(demo_registry());
        HostObjectRef p = rt.instantiate("Point", {});
        const auto& move = only(rt.registry().lookup_class("Point"), "move");
        const HostValue d[] = {2.0, 3.0};
        rt.invoke(move, p, d);
        CHECK(std::get<double>(rt.get_field(p, "x")) == 2.0);
        CHECK(std::get<double>(rt.get_field(p, "y")) == 3.0);
        const HostValue zero[] = {0.0, 0.0};
        CHECK(std::holds_alternative<std::monostate>(rt.invoke(move, p, zero)));
        CHECK(std::get<double>(rt.get_field(p, "x")) == 2.0);
        CHECK(std::get<double>(rt.get_field(p, "y")) == 3.0);
        CHECK(rt.fields_conform(*p));
    }

    TEST_CASE("a throwing body surfaces as HostException") {
        auto r = std::make_shared<Registry>();
        HostClassDescriptor d = simple_class("Faulty");
        MethodDescriptor m;
        m.name = "boom";
        m.body = [](HostRuntime&, const HostObjectRef&, std::span<const HostValue>) -> HostValue {
            throw std::runtime_error("kaput");
        };
        d.methods["boom"].push_back(m);
        r->register_class(d);
        r->freeze();
        HostRuntime rt(r);
        HostObjectRef o = rt.instantiate("Faulty", {});
        try {
            rt.call_method(o, "boom", {});
            FAIL("expected HostException");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::HostException);
            CHECK(e.message().find("kaput") != std::string::npos);
        }
    }

    TEST_CASE("static and instance calls by name") {
        HostRuntime rt(demo_registry());
        const HostValue three[] = {std::int64_t{3}};
        CHECK(std::get<std::int64_t>(rt.call_static("demo.MathUtil", "twice", three)) == 6);
        HostObjectRef g = rt.instantiate("demo.Greeter", {});
        const HostValue greeter[] = {g};
        CHECK(std::get<std::string>(rt.call_static("demo.Greeter", "conversation", greeter)) ==
              "hello from host / host greets you / bye from host");
        CHECK(error_kind_of([&] { rt.call_method(g, "conversation", greeter); }) ==
              ErrorKind::NoSuchMember);
    }

    TEST_CASE("event sources call their listeners") {
        HostRuntime rt(demo_registry());
        const HostValue label[] = {std::string("Go")};
        HostObjectRef b = rt.instantiate("demo.Button", label);
        CHECK(std::get<std::int64_t>(rt.call_method(b, "listenerCount", {})) == 0);
        rt.call_method(b, "press", {});
        CHECK(rt.fields_conform(*b));
    }
}

TEST_SUITE("fields") {
    TEST_CASE("instance and static fields") {
        HostRuntime rt(demo_registry());
        HostObjectRef p = rt.instantiate("Point", {});
        const HostValue d[] = {2.0, 3.0};
        rt.call_method(p, "move", d);
        CHECK(std::get<double>(rt.get_field(p, "x")) == 2.0);
        CHECK(std::get<std::string>(rt.get_static_field("demo.BorderLayout", "NORTH")) == "North");
        CHECK(error_kind_of([&] { rt.set_field(p, "x", std::string("abc")); }) ==
              ErrorKind::TypeMismatch);
        CHECK(std::get<double>(rt.get_field(p, "x")) == 2.0);
        CHECK(error_kind_of([&] { rt.get_field(p, "z"); }) == ErrorKind::NoSuchField);
        CHECK(error_kind_of([&] { rt.get_static_field("demo.BorderLayout", "UP"); }) ==
              ErrorKind::NoSuchField);
        rt.set_static_field("demo.BorderLayout", "NORTH", std::string("Up"));
        CHECK(std::get<std::string>(rt.get_static_field("demo.BorderLayout", "NORTH")) == "Up");
    }
}

TEST_SUITE("arrays") {
    TEST_CASE("zero-initialized, bounds-checked, typed") {
        HostRuntime rt(demo_registry());
        HostArrayRef a = rt.array_new(TypeTag::integer(), 3);
        CHECK(rt.array_length(a) == 3);
        CHECK(std::get<std::int64_t>(rt.array_get(a, 0)) == 0);
        rt.array_set(a, 2, std::int64_t{9});
        CHECK(std::get<std::int64_t>(rt.array_get(a, 2)) == 9);
        CHECK(error_kind_of([&] { rt.array_get(a, 3); }) == ErrorKind::IndexOutOfBounds);
        CHECK(error_kind_of([&] { rt.array_get(a, -1); }) == ErrorKind::IndexOutOfBounds);
        CHECK(error_kind_of([&] { rt.array_set(a, 0, 1.5); }) == ErrorKind::TypeMismatch);
    }

    TEST_CASE("zero values per element tag") {
        HostRuntime rt(demo_registry());
        CHECK(std::get<double>(rt.array_get(rt.array_new(TypeTag::floating(), 1), 0)) == 0.0);
        CHECK(std::get<std::string>(rt.array_get(rt.array_new(TypeTag::text(), 1), 0)).empty());
        CHECK(std::get<bool>(rt.array_get(rt.array_new(TypeTag::boolean(), 1), 0)) == false);
        CHECK(std::holds_alternative<std::monostate>(
            rt.array_get(rt.array_new(TypeTag::object("Point"), 1), 0)));
    }
}

TEST_SUITE("manifest") {
    TEST_CASE("type spellings round-trip") {
        for (const char* s : {"boolean", "int", "float", "text", "void", "Point", "int[]",
                              "demo.Component[][]"})
            CHECK(TypeTag::parse(s).to_string() == s);
    }

    TEST_CASE("malformed manifests") {
        Registry r;
        CHECK(error_kind_of([&] { load_manifest(r, "{", {}); }) == ErrorKind::InvalidDescriptor);
        CHECK(error_kind_of([&] { load_manifest(r, "[]", {}); }) == ErrorKind::InvalidDescriptor);
        CHECK(error_kind_of([&] {
                  load_manifest(r,
                                R"({"classes":[{"name":"A","methods":[{"name":"m","native":"nope"}]}]})",
                                {});
              }) == ErrorKind::InvalidDescriptor);
    }

    TEST_CASE("an interface-only manifest loads next to the demo classes") {
        Registry r;
        register_demo_classes(r);
        load_manifest(r, R"({"classes":[{"name":"user.Tick","kind":"interface",
                             "methods":[{"name":"tick","params":["int"],"returns":"int"}]}]})",
                      demo_natives());
        r.freeze();
        CHECK(r.lookup_class("user.Tick").is_interface());
    }
}
