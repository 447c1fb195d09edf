#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bs/bridge.hpp"
#include "bs/error.hpp"
#include "bs/host/demo_classes.hpp"

using namespace bs;

namespace {

struct World {
    std::ostringstream out;
    Interpreter in{out};
    Bridge bridge{in, demo_registry()};

    Value run(std::string_view src) {
        auto r = in.dostring(src);
        return r.empty() ? Value() : r.front();
    }
    Value global(std::string_view name) { return in.globals().get(name); }
};

ErrorKind error_kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::RuntimeError;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("host_new_instance") {
    TEST_CASE("Point starts at zero") {
        World w;
        w.run("point = javaNewInstance(\"Point\")");
        CHECK(w.run("return point.x") == Value(0));
        CHECK(w.run("return type(point)") == Value("hostobject"));
        CHECK(w.run("return hostNewInstance(\"Point\") ~= point") == Value(true));
    }

    TEST_CASE("unknown classes and constructor arguments") {
        World w;
        CHECK(error_kind_of([&] { w.run("hostNewInstance(\"Nope\")"); }) ==
              ErrorKind::ClassNotFound);
        CHECK(error_kind_of([&] { w.run("hostNewInstance(\"Point\", 1)"); }) == ErrorKind::NoMatch);
        CHECK(error_kind_of([&] { w.run("hostNewInstance(\"demo.ActionListener\")"); }) ==
              ErrorKind::InterfaceNotInstantiable);
    }

    TEST_CASE("Frame title from the constructor") {
        World w;
        w.run("f = hostNewInstance(\"demo.Frame\", \"Console\")");
        CHECK(w.run("return f.title") == Value("Console"));
        CHECK(w.run("return f:getTitle()") == Value("Console"));
    }
}

TEST_SUITE("host_bind_class") {
    TEST_CASE("static fields and methods") {
        World w;
        w.run("B = javaBindClass(\"demo.BorderLayout\") M = hostBindClass(\"demo.MathUtil\")");
        CHECK(w.run("return B.NORTH") == Value("North"));
        CHECK(w.run("return M.twice(3)") == Value(6));
        CHECK(w.run("return M:twice(4)") == Value(8));
        CHECK(w.run("return hostBindClass(\"demo.BorderLayout\") == B") == Value(true));
        CHECK(error_kind_of([&] { w.run("hostBindClass(\"ghost\")"); }) ==
              ErrorKind::ClassNotFound);
        CHECK(error_kind_of([&] { w.run("return M.twice(2.5)"); }) == ErrorKind::NoMatch);
    }

    TEST_CASE("class proxies expose statics only, object proxies instance members only") {
        World w;
        w.run("P = hostBindClass(\"Point\") p = hostNewInstance(\"Point\")");
        CHECK(error_kind_of([&] { w.run("return P.x"); }) == ErrorKind::NoSuchMember);
        CHECK(error_kind_of([&] { w.run("return hostNewInstance(\"demo.MathUtil\").twice"); }) ==
              ErrorKind::NoSuchMember);
        w.run("B = hostBindClass(\"demo.BorderLayout\") B.NORTH = \"Top\"");
        CHECK(w.run("return B.NORTH") == Value("Top"));
        CHECK(error_kind_of([&] { w.run("B.NORTH = 1"); }) == ErrorKind::TypeMismatch);
    }
}

TEST_SUITE("proxy_index") {
    TEST_CASE("methods, fields, missing members") {
        World w;
        w.run("point = hostNewInstance(\"Point\")");
        TableRef p = w.global("point").as_table();
        Value move = w.bridge.proxy_index(p, Value("move"));
        CHECK(move.is_function());
        CHECK(w.bridge.proxy_index(p, Value("x")) == Value(0));
        CHECK(error_kind_of([&] { w.bridge.proxy_index(p, Value("z")); }) ==
              ErrorKind::NoSuchMember);
        // the lookup alone does not cache
        CHECK(p->find(std::string_view("move")) == nullptr);
    }
}

TEST_SUITE("dispatcher_call") {
    TEST_CASE("move, then read fields") {
        World w;
        w.run("point = hostNewInstance(\"Point\") point:move(2,3)");
        CHECK(w.run("return point.x") == Value(2));
        CHECK(w.run("return point.y") == Value(3));
    }

    TEST_CASE("the fallback fires once per proxy and method") {
        World w;
        w.run("point = hostNewInstance(\"Point\")\n"
              "for i = 1, 1000 do point:move(1, 0) end");
        TableRef p = w.global("point").as_table();
        CHECK(w.bridge.stats().fires(p, "move") == 1);
        CHECK(w.bridge.stats().dispatches == 1000);
        CHECK(w.run("return point.x") == Value(1000));
        CHECK(p->find(std::string_view("move")) != nullptr);
        // field reads are never cached
        w.run("local s = 0 for i = 1, 10 do s = s + point.y end");
        CHECK(w.bridge.stats().fires(p, "y") == 10);
    }

    TEST_CASE("argument errors") {
        World w;
        w.run("point = hostNewInstance(\"Point\")");
        CHECK(error_kind_of([&] { w.run("point:move(\"a\", 3)"); }) == ErrorKind::NoMatch);
        CHECK(error_kind_of([&] { w.run("point:move(1)"); }) == ErrorKind::NoMatch);
        CHECK(error_kind_of([&] { w.run("point.move(1, 2, 3)"); }) == ErrorKind::ReceiverMismatch);
        CHECK(error_kind_of([&] {
                  w.run("point.move(hostNewInstance(\"demo.Button\"), 1, 2)");
              }) == ErrorKind::ReceiverMismatch);
        CHECK(error_kind_of([&] { w.run("point.move({}, 1, 2)"); }) == ErrorKind::ReceiverMismatch);
    }

    TEST_CASE("a cached dispatcher serves other receivers of the class") {
        World w;
        w.run("a = hostNewInstance(\"Point\") b = hostNewInstance(\"Point\")\n"
              "a:move(1, 1) local m = a.move m(b, 5, 5)");
        CHECK(w.run("return a.x") == Value(1));
        CHECK(w.run("return b.x") == Value(5));
    }

    TEST_CASE("subclass receivers use inherited methods") {
        World w;
        w.run("b = hostNewInstance(\"demo.Button\", \"Go\") n = b:listenerCount()");
        CHECK(w.global("n") == Value(0));
        CHECK(w.run("return b:getLabel()") == Value("Go"));
    }

    TEST_CASE("overloads are selected per call") {
        World w;
        w.run("f = hostNewInstance(\"demo.Frame\", \"F\")\n"
              "t = hostNewInstance(\"demo.TextArea\", \"hi\")\n"
              "f:add(t, \"North\") f:add(hostNewInstance(\"demo.Button\", \"Go\")) f:show()");
        CHECK(w.out.str() == "== F ==\n[North] TextArea: hi\n[Center] Button: Go\n");
    }

    TEST_CASE("results are identical on the first and the Nth call") {
        World w;
        w.run("c = hostNewInstance(\"bench.Counter\")");
        std::vector<Value> results;
        for (int i = 0; i < 50; ++i) {
            w.run("c.count = 7");
            results.push_back(w.run("return c:get()"));
        }
        for (const auto& r : results)
            CHECK(r == Value(7));
    }

    TEST_CASE("random call sequences fire the fallback at most once per method") {
        World w;
        w.run("cs = {} for i = 1, 4 do cs[i] = hostNewInstance(\"bench.Counter\") end");
        std::mt19937 rng(5);
        const char* methods[] = {"inc", "empty", "get"};
        std::uniform_int_distribution<int> who(1, 4), what(0, 2);
        std::vector<int> expected(5, 0);
        for (int i = 0; i < 3000; ++i) {
            int k = who(rng);
            const char* m = methods[what(rng)];
            w.run("cs[" + std::to_string(k) + "]:" + m + "()");
            if (std::string(m) == "inc")
                ++expected[k];
        }
        for (int k = 1; k <= 4; ++k) {
            TableRef c = w.run("return cs[" + std::to_string(k) + "]").as_table();
            for (const char* m : methods)
                CHECK(w.bridge.stats().fires(c, m) <= 1);
            CHECK(w.run("return cs[" + std::to_string(k) + "]:get()") == Value(expected[k]));
        }
    }

    TEST_CASE("host exceptions reach the script as errors") {
        auto reg = std::make_shared<Registry>();
        HostClassDescriptor d;
        d.name = "Faulty";
        MethodDescriptor m;
        m.name = "boom";
        m.body = [](HostRuntime&, const HostObjectRef&, std::span<const HostValue>) -> HostValue {
            throw std::runtime_error("kaput");
        };
        d.methods["boom"].push_back(m);
        reg->register_class(d);
        reg->freeze();
        std::ostringstream out;
        Interpreter in(out);
        Bridge bridge(in, reg);
        try {
            in.dostring("x = 1\nlocal f = hostNewInstance(\"Faulty\")\nf:boom()");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::HostException);
            CHECK(e.line() == 3);
            CHECK(e.message().find("kaput") != std::string::npos);
        }
        // the interpreter is still usable
        CHECK(in.dostring("return x + 1").front() == Value(2));
    }
}

TEST_SUITE("proxy_newindex") {
    TEST_CASE("field writes go to the host") {
        World w;
        w.run("point = hostNewInstance(\"Point\") point.x = point.x + 1");
        HostObjectRef p = Bridge::object_of(w.global("point"));
        CHECK(std::get<double>(w.bridge.runtime().get_field(p, "x")) == 1.0);
        CHECK(error_kind_of([&] { w.run("point.z = 1"); }) == ErrorKind::NoSuchMember);
        CHECK(error_kind_of([&] { w.run("point.x = \"abc\""); }) == ErrorKind::TypeMismatch);
        CHECK(error_kind_of([&] { w.run("point.move = nil"); }) == ErrorKind::TypeMismatch);
        // nothing landed in the proxy itself
        CHECK(w.global("point").as_table()->size() == 1);
    }

    TEST_CASE("arrays are one-based in scripts") {
        World w;
        w.run("arr = hostNewArray(\"int\", 3) arr[1] = 10 n = arr.length");
        HostArrayRef a = w.global("arr").as_table()->find(kHostRef)->as_host_array();
        CHECK(std::get<std::int64_t>(w.bridge.runtime().array_get(a, 0)) == 10);
        CHECK(w.global("n") == Value(3));
        CHECK(w.run("return arr[1] + arr[3]") == Value(10));
        CHECK(error_kind_of([&] { w.run("return arr[0]"); }) == ErrorKind::IndexOutOfBounds);
        CHECK(error_kind_of([&] { w.run("arr[4] = 1"); }) == ErrorKind::IndexOutOfBounds);
        CHECK(error_kind_of([&] { w.run("arr[1] = 1.5"); }) == ErrorKind::TypeMismatch);
        CHECK(error_kind_of([&] { w.run("arr.length = 1"); }) == ErrorKind::TypeMismatch);
    }

    TEST_CASE("object arrays hold proxies") {
        World w;
        w.run("ps = hostNewArray(\"Point\", 2) ps[2] = hostNewInstance(\"Point\") ps[2]:move(4, 0)");
        CHECK(w.run("return ps[2].x") == Value(4));
        CHECK(w.run("return ps[1]") == Value());
    }
}

TEST_SUITE("proxy invariants") {
    TEST_CASE("the reserved field cannot be overwritten") {
        World w;
        w.run("point = hostNewInstance(\"Point\")");
        CHECK(error_kind_of([&] { w.run("point.__hostref = 1"); }) == ErrorKind::ReservedField);
        CHECK(error_kind_of([&] { w.run("rawset(point, \"__hostref\", 1)"); }) ==
              ErrorKind::ReservedField);
        CHECK(error_kind_of([&] { w.run("setfallback(point, \"index\", nil)"); }) ==
              ErrorKind::RuntimeError);
        w.run("point:move(1, 2)");
        CHECK(w.run("return point.y") == Value(2));
        CHECK(Bridge::object_of(w.global("point")) != nullptr);
    }

    TEST_CASE("field reads are live after host-side mutation") {
        World w;
        w.run("point = hostNewInstance(\"Point\")");
        HostObjectRef p = Bridge::object_of(w.global("point"));
        for (int i = 1; i <= 20; ++i) {
            const HostValue d[] = {1.0, 2.0};
            w.bridge.runtime().call_method(p, "move", d);
            CHECK(w.run("return point.x") == Value(i));
            CHECK(w.run("return point.y") == Value(2 * i));
        }
    }

    TEST_CASE("the point program prints the same against a proxy and a table") {
        std::string host = read_file(std::filesystem::path(BS_DEMO_DIR) / "point.bs");
        std::string native = read_file(std::filesystem::path(BS_DEMO_DIR) / "native_point.bs");
        REQUIRE(host.find("javaNewInstance(\"Point\")") != std::string::npos);
        World a, b;
        a.in.dostring(host);
        b.in.dostring(native);
        CHECK(a.out.str() == "3\t4\n");
        CHECK(b.out.str() == a.out.str());
    }
}
