#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bs/bridge.hpp"
#include "bs/error.hpp"
#include "bs/host/demo_classes.hpp"
#include "oracles.hpp"

using namespace bs;

namespace {

struct World {
    std::ostringstream out;
    Interpreter in{out};
    Bridge bridge{in, demo_registry()};
};

MethodDescriptor method(std::vector<TypeTag> params) {
    MethodDescriptor m;
    m.name = "f";
    m.params = std::move(params);
    return m;
}

}  // namespace

TEST_SUITE("to_host") {
    TEST_CASE("rule table examples") {
        World w;
        auto r = w.bridge.to_host(Value(3), TypeTag::integer());
        REQUIRE(r.ok());
        CHECK(std::get<std::int64_t>(*r.value) == 3);
        CHECK(r.score == 1);
        CHECK_FALSE(w.bridge.to_host(Value(2.5), TypeTag::integer()).ok());
        CHECK(w.bridge.to_host(Value(2.5), TypeTag::floating()).score == 2);
        CHECK(w.bridge.to_host(Value("x"), TypeTag::text()).score == 2);
        CHECK(w.bridge.to_host(Value(true), TypeTag::boolean()).score == 2);
        CHECK(w.bridge.to_host(Value(), TypeTag::object("Point")).score == 1);
        CHECK(w.bridge.to_host(Value(), TypeTag::array(TypeTag::integer())).score == 1);
        CHECK_FALSE(w.bridge.to_host(Value(), TypeTag::integer()).ok());
    }

    TEST_CASE("booleans and numbers never cross") {
        World w;
        CHECK_FALSE(w.bridge.to_host(Value(true), TypeTag::integer()).ok());
        CHECK_FALSE(w.bridge.to_host(Value(true), TypeTag::floating()).ok());
        CHECK_FALSE(w.bridge.to_host(Value(1), TypeTag::boolean()).ok());
        CHECK_FALSE(w.bridge.to_host(Value("1"), TypeTag::integer()).ok());
        CHECK_FALSE(w.bridge.to_host(Value(1), TypeTag::text()).ok());
    }

    TEST_CASE("plain tables wrap for interfaces and classes only") {
        World w;
        TableRef t = make_table();
        auto r = w.bridge.to_host(Value(t), TypeTag::interface("demo.ActionListener"));
        REQUIRE(r.ok());
        CHECK(r.score == 1);
        const auto& wrapper = std::get<HostObjectRef>(*r.value);
        CHECK(wrapper->class_name == "demo.ActionListener");
        CHECK(Bridge::wrapped_table(wrapper) == t);
        CHECK_FALSE(w.bridge.to_host(Value(t), TypeTag::floating()).ok());
        CHECK_FALSE(w.bridge.to_host(Value(t), TypeTag::array(TypeTag::integer())).ok());
        // no constructor without arguments, so no wrapper
        CHECK_FALSE(w.bridge.to_host(Value(t), TypeTag::object("demo.ActionEvent")).ok());
    }

    TEST_CASE("proxies score by class distance") {
        World w;
        const Value label[] = {Value("B")};
        TableRef button = w.bridge.host_new_instance("demo.Button", label);
        CHECK(w.bridge.to_host(Value(button), TypeTag::object("demo.Button")).score == 2);
        CHECK(w.bridge.to_host(Value(button), TypeTag::object("demo.EventSource")).score == 1);
        CHECK(w.bridge.to_host(Value(button), TypeTag::object("demo.Component")).score == 1);
        CHECK_FALSE(w.bridge.to_host(Value(button), TypeTag::object("Point")).ok());
        CHECK_FALSE(w.bridge.to_host(Value(w.bridge.host_bind_class("demo.Button")),
                                     TypeTag::object("demo.Button"))
                        .ok());
    }

    TEST_CASE("array proxies need the exact element tag") {
        World w;
        TableRef a = w.bridge.host_new_array(TypeTag::integer(), 2);
        CHECK(w.bridge.to_host(Value(a), TypeTag::array(TypeTag::integer())).score == 2);
        CHECK_FALSE(w.bridge.to_host(Value(a), TypeTag::array(TypeTag::floating())).ok());
        CHECK_FALSE(w.bridge.to_host(Value(a), TypeTag::object("Point")).ok());
    }
}

TEST_SUITE("to_script") {
    TEST_CASE("primitives, proxies, wrappers") {
        World w;
        CHECK(w.bridge.to_script(std::int64_t{7}) == Value(7));
        CHECK(w.bridge.to_script(std::monostate{}).is_nil());
        HostObjectRef p = w.bridge.runtime().instantiate("Point", {});
        Value first = w.bridge.to_script(p);
        CHECK(first.is_table());
        CHECK(w.bridge.to_script(p) == first);
        TableRef t = make_table();
        HostObjectRef wrapper = w.bridge.host_export(t, "demo.ActionListener");
        CHECK(w.bridge.to_script(wrapper) == Value(t));
    }
}

TEST_SUITE("score_candidate and select_overload") {
    TEST_CASE("scores") {
        World w;
        auto move = method({TypeTag::floating(), TypeTag::floating()});
        const Value two_three[] = {Value(2), Value(3)};
        CHECK(w.bridge.score_candidate(move, two_three) == 4);
        CHECK_FALSE(w.bridge.score_candidate(move, std::span(two_three, 1)).has_value());
        const Value frac[] = {Value(2.5)};
        CHECK_FALSE(w.bridge.score_candidate(method({TypeTag::integer()}), frac).has_value());
    }

    TEST_CASE("selection examples") {
        World w;
        const Value three[] = {Value(3)};
        const Value x[] = {Value("x")};
        std::vector<MethodDescriptor> int_text = {method({TypeTag::integer()}),
                                                  method({TypeTag::text()})};
        auto d = w.bridge.select_overload(int_text, three);
        REQUIRE(d.kind == OverloadDecision::Kind::Selected);
        CHECK(d.method == &int_text[0]);
        CHECK(std::get<std::int64_t>(d.args[0]) == 3);

        std::vector<MethodDescriptor> int_float = {method({TypeTag::integer()}),
                                                   method({TypeTag::floating()})};
        d = w.bridge.select_overload(int_float, three);
        REQUIRE(d.kind == OverloadDecision::Kind::Selected);
        CHECK(d.method == &int_float[1]);
        CHECK(w.bridge.select_overload(int_float, x).kind == OverloadDecision::Kind::NoMatch);

        std::vector<MethodDescriptor> crossed = {
            method({TypeTag::integer(), TypeTag::floating()}),
            method({TypeTag::floating(), TypeTag::integer()})};
        const Value ones[] = {Value(1), Value(1)};
        d = w.bridge.select_overload(crossed, ones);
        CHECK(d.kind == OverloadDecision::Kind::Ambiguous);
        CHECK(d.tied.size() == 2);
    }

    TEST_CASE("nil never beats a primitive-exact overload") {
        World w;
        std::vector<MethodDescriptor> cands = {method({TypeTag::object("Point")}),
                                               method({TypeTag::text()})};
        const Value nil[] = {Value()};
        auto d = w.bridge.select_overload(cands, nil);
        REQUIRE(d.kind == OverloadDecision::Kind::Selected);
        CHECK(d.method == &cands[0]);
    }

    TEST_CASE("scoring does not create wrappers for losing candidates") {
        World w;
        TableRef t = make_table();
        std::vector<MethodDescriptor> cands = {method({TypeTag::interface("demo.ActionListener")}),
                                               method({TypeTag::interface("bench.Callback")})};
        const Value args[] = {Value(t)};
        CHECK(w.bridge.select_overload(cands, args).kind == OverloadDecision::Kind::Ambiguous);
        CHECK(t->find(std::string_view("__base")) == nullptr);
        const Value counter[] = {Value(t)};
        w.bridge.score_candidate(method({TypeTag::object("bench.Counter")}), counter);
        CHECK(t->find(std::string_view("__base")) == nullptr);
    }

    TEST_CASE("agreement with the brute-force oracle") {
        oracle::OverloadRun run = oracle::compare_overloads(12000, 7);
        CAPTURE(run.first_failure);
        CHECK(run.instances == 12000);
        CHECK(run.agreed == run.instances);
        // every outcome is exercised
        CHECK(run.by_kind[oracle::Decision::Kind::Selected] > 1000);
        CHECK(run.by_kind[oracle::Decision::Kind::NoMatch] > 1000);
        CHECK(run.by_kind[oracle::Decision::Kind::Ambiguous] > 100);
    }
}

TEST_SUITE("conversion properties") {
    TEST_CASE("primitive round trip") {
        World w;
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> real(-1e6, 1e6);
        std::uniform_int_distribution<int> choice(0, 3), integer(-100000, 100000);
        int converted = 0;
        for (int i = 0; i < 4000; ++i) {
            Value v;
            switch (choice(rng)) {
            case 0: v = Value(real(rng)); break;
            case 1: v = Value(static_cast<double>(integer(rng))); break;
            case 2: v = Value("s" + std::to_string(integer(rng))); break;
            default: v = Value(integer(rng) % 2 == 0); break;
            }
            for (const TypeTag& tag : {TypeTag::integer(), TypeTag::floating(), TypeTag::text(),
                                       TypeTag::boolean()}) {
                ConversionResult r = w.bridge.to_host(v, tag);
                if (!r.ok())
                    continue;
                ++converted;
                CHECK(w.bridge.to_script(*r.value) == v);
            }
        }
        CHECK(converted >= 4000);
    }

    TEST_CASE("proxy identity across interleavings") {
        World w;
        std::mt19937 rng(12);
        std::vector<HostObjectRef> objects;
        std::vector<Value> first_seen;
        for (int i = 0; i < 20; ++i) {
            objects.push_back(w.bridge.runtime().instantiate("Point", {}));
            first_seen.push_back(w.bridge.to_script(objects.back()));
        }
        std::uniform_int_distribution<int> pick(0, 19);
        for (int i = 0; i < 2000; ++i) {
            int k = pick(rng);
            CHECK(w.bridge.to_script(objects[k]) == first_seen[k]);
            if (i % 7 == 0) {
                // host-side mutation does not disturb identity
                const HostValue d[] = {1.0, 1.0};
                w.bridge.runtime().call_method(objects[k], "move", d);
            }
        }
    }

    TEST_CASE("proxy involution") {
        World w;
        std::mt19937 rng(13);
        const char* classes[] = {"Point", "demo.Button", "demo.TextArea", "bench.Counter",
                                 "demo.Greeter"};
        std::uniform_int_distribution<int> pick(0, 4);
        for (int i = 0; i < 1000; ++i) {
            HostObjectRef h = w.bridge.runtime().instantiate(classes[pick(rng)], {});
            ConversionResult r =
                w.bridge.to_host(w.bridge.to_script(h), TypeTag::object(h->class_name));
            REQUIRE(r.ok());
            CHECK(r.score == 2);
            CHECK(std::get<HostObjectRef>(*r.value) == h);
        }
    }

    TEST_CASE("wrapper involution") {
        World w;
        for (int i = 0; i < 1000; ++i) {
            TableRef t = make_table();
            const char* type = i % 2 ? "demo.ActionListener" : "demo.Greeter";
            HostObjectRef wrapper = w.bridge.host_export(t, type);
            Value back = w.bridge.to_script(wrapper);
            CHECK(back == Value(t));
            ConversionResult r = w.bridge.to_host(back, TypeTag::object(type));
            REQUIRE(r.ok());
            CHECK(std::get<HostObjectRef>(*r.value) == wrapper);
        }
    }

    TEST_CASE("one-based script indices map to zero-based host slots") {
        World w;
        std::mt19937 rng(14);
        std::uniform_int_distribution<int> len(1, 40), val(-1000, 1000);
        for (int i = 0; i < 1000; ++i) {
            int n = len(rng);
            TableRef proxy = w.bridge.host_new_array(TypeTag::integer(), n);
            HostArrayRef arr = w.bridge.proxy_index(proxy, Value("length")) == Value(n)
                                   ? proxy->find(kHostRef)->as_host_array()
                                   : nullptr;
            REQUIRE(arr);
            int k = std::uniform_int_distribution<int>(1, n)(rng);
            int v = val(rng);
            w.in.table_set(proxy, Value(k), Value(v));
            CHECK(std::get<std::int64_t>(w.bridge.runtime().array_get(arr, k - 1)) == v);
            w.bridge.runtime().array_set(arr, n - 1, std::int64_t{v + 1});
            CHECK(w.in.table_get(proxy, Value(n)) == Value(v + 1));
        }
    }
}
