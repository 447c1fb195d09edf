#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bs/cli.hpp"
#include "bs/error.hpp"
#include "oracles.hpp"

using namespace bs;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_temp(const std::string& name, const std::string& body) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p, std::ios::binary) << body;
    return p;
}

std::string console(const std::string& input, std::string* errors = nullptr) {
    std::istringstream in(input);
    std::ostringstream out, err;
    repl(in, out, err, load_registry(std::nullopt), false);
    if (errors)
        *errors = err.str();
    return out.str();
}

}  // namespace

TEST_SUITE("run_file") {
    TEST_CASE("every demo with a golden file reproduces it byte for byte") {
        int checked = 0;
        for (const auto& entry : fs::directory_iterator(BS_DEMO_DIR)) {
            if (entry.path().extension() != ".bs")
                continue;
            fs::path golden = entry.path();
            golden.replace_extension(".out");
            if (!fs::exists(golden))
                continue;
            CAPTURE(entry.path().string());
            std::ostringstream out, err;
            CHECK(run_file(entry.path().string(), out, err, load_registry(std::nullopt)) == 0);
            CHECK(err.str().empty());
            CHECK(out.str() == read_file(golden));
            ++checked;
        }
        CHECK(checked >= 2);
    }

    TEST_CASE("exit codes") {
        std::ostringstream out, err;
        CHECK(run_file("/nonexistent/nothing.bs", out, err, load_registry(std::nullopt)) == 2);
        CHECK(err.str().find("cannot open") != std::string::npos);

        fs::path bad = write_temp("bs_cli_bad.bs", "point = hostNewInstance(\"Point\")\n"
                                                   "print(\"before\")\n"
                                                   "point:move(\"a\", 1)\n");
        std::ostringstream out2, err2;
        CHECK(run_file(bad.string(), out2, err2, load_registry(std::nullopt)) == 1);
        CHECK(out2.str() == "before\n");
        CHECK(err2.str().find("NoMatch") != std::string::npos);
        CHECK(err2.str().find("line 3") != std::string::npos);
        fs::remove(bad);
    }

    TEST_CASE("eval prints expression results") {
        std::ostringstream out, err;
        CHECK(eval_source("1 + 2, \"x\"", out, err, load_registry(std::nullopt)) == 0);
        CHECK(out.str() == "3\tx\n");
        std::ostringstream out2, err2;
        CHECK(eval_source("x = 5 print(x * 2)", out2, err2, load_registry(std::nullopt)) == 0);
        CHECK(out2.str() == "10\n");
        std::ostringstream out3, err3;
        CHECK(eval_source("nosuch()", out3, err3, load_registry(std::nullopt)) == 1);
        CHECK_FALSE(err3.str().empty());
    }
}

TEST_SUITE("manifest") {
    TEST_CASE("extra classes load from a file") {
        fs::path m = write_temp("bs_cli_manifest.json", R"({"classes": [
            {"name": "extra.Tally", "fields": [{"name": "count", "type": "int", "initial": 7}],
             "methods": [{"name": "inc", "params": [], "returns": "void", "native": "Counter.inc"}]}
        ]})");
        auto reg = load_registry(m.string());
        CHECK(reg->has_class("extra.Tally"));
        std::ostringstream out, err;
        CHECK(eval_source("local t = hostNewInstance(\"extra.Tally\") t:inc() print(t.count)", out,
                          err, reg) == 0);
        CHECK(out.str() == "8\n");
        fs::remove(m);
    }

    TEST_CASE("bad manifests are rejected") {
        fs::path m = write_temp("bs_cli_bad_manifest.json", "{\"classes\": [{\"name\": 3}]}");
        CHECK_THROWS_AS(load_registry(m.string()), Error);
        fs::remove(m);
        CHECK_THROWS(load_registry(std::string("/nonexistent/manifest.json")));
    }
}

TEST_SUITE("repl") {
    TEST_CASE("globals persist across lines and errors do not end the session") {
        std::string err;
        std::string out = console("x = 20\n"
                                  "(((\n"
                                  "nosuch()\n"
                                  "x + 22\n"
                                  "exit\n"
                                  "print(\"never\")\n",
                                  &err);
        CHECK(out == "42\n");
        CHECK(err.find("ParseError") != std::string::npos);
        CHECK(err.find("NotCallable") != std::string::npos);
    }

    TEST_CASE("the console demo: type into the buffer, press, read the result") {
        std::string err;
        std::string out = console("demo()\n"
                                  "text:setText(\"x=42\")\n"
                                  "press\n"
                                  "print(x)\n",
                                  &err);
        CHECK(err.empty());
        CHECK(out.find("== Console ==") != std::string::npos);
        CHECK(out.substr(out.size() - 3) == "42\n");
    }

    TEST_CASE("end of input quits") {
        CHECK(console("print(1)") == "1\n");
        CHECK(console("").empty());
    }
}

TEST_SUITE("bench") {
    TEST_CASE("per-call arithmetic agrees with the oracle") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> d(0.0, 2.0);
        for (int i = 0; i < 1000; ++i) {
            double e = d(rng), o = e + d(rng), t = o + d(rng);
            long n = 1000 + static_cast<long>(rng() % 1000000);
            double expected = oracle::per_call(e, o, t, n);
            CHECK(per_call(e, o, t, n) == doctest::Approx(expected).epsilon(1e-12));
            // the two differences telescope
            CHECK(per_call(e, o, t, n) == doctest::Approx((t - e) / (2.0 * n)).epsilon(1e-9));
        }
        CHECK(per_call(1.0, 3.0, 5.0, 1000) == doctest::Approx(0.002));
    }

    TEST_CASE("too few iterations") {
        try {
            run_bench(999, load_registry(std::nullopt));
            FAIL("expected IterationsTooSmall");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::IterationsTooSmall);
        }
    }

    TEST_CASE("a short run reports every key and the expected ordering") {
        BenchReport r = run_bench(20000, load_registry(std::nullopt));
        CHECK(r.order_holds());
        CHECK(r.perCallInbound > 0);
        CHECK(r.fallbackFires == 1);
        CHECK(r.cachedCalls == 9999);
        auto j = nlohmann::json::parse(report_json(r));
        for (const char* key : {"iterations", "emptyLoop", "oneCall", "twoCalls", "nativeOneCall",
                                "nativeTwoCalls", "perCallOutbound", "perCallNative", "ratio",
                                "hostEmptyLoop", "inboundOneCall", "inboundTwoCalls",
                                "perCallInbound", "firstCall", "cachedCall", "fallbackFires",
                                "orderHolds"})
            CHECK_MESSAGE(j.contains(key), key);
        CHECK(j["iterations"] == 20000);
        CHECK(format_report(r).find("holds") != std::string::npos);
    }
}
