#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "bs/cli.hpp"
#include "bs/error.hpp"

namespace bs {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::string_view kLoops = R"bs(
function loop0(o, n) for i = 1, n do end end
function loop1(o, n) for i = 1, n do o:empty() end end
function loop2(o, n) for i = 1, n do o:empty() o:empty() end end
function once(o) o:empty() end
native = {}
function native:empty() end
callback = {}
function callback:empty() end
)bs";

double seconds_of(const std::function<void()>& fn) {
    auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

// Discards the warm-ups, reports the median of the measured runs.
double measure(const std::function<void()>& fn) {
    for (int i = 0; i < kBenchWarmups; ++i)
        fn();
    std::vector<double> runs;
    for (int i = 0; i < kBenchRuns; ++i)
        runs.push_back(seconds_of(fn));
    return median(runs);
}

std::string fmt_time(double s) {
    char buf[32];
    if (s >= 1.0)
        std::snprintf(buf, sizeof buf, "%.3f s", s);
    else if (s >= 1e-3)
        std::snprintf(buf, sizeof buf, "%.3f ms", s * 1e3);
    else if (s >= 1e-6)
        std::snprintf(buf, sizeof buf, "%.3f us", s * 1e6);
    else
        std::snprintf(buf, sizeof buf, "%.1f ns", s * 1e9);
    return buf;
}

}  // namespace

double per_call(double empty_loop, double one_call, double two_calls, long iterations) {
    return ((two_calls - one_call) + (one_call - empty_loop)) / (2.0 * static_cast<double>(iterations));
}

BenchReport run_bench(long iterations, std::shared_ptr<const Registry> registry) {
    if (iterations < kMinBenchIterations)
        throw Error(ErrorKind::IterationsTooSmall,
                    "bench needs at least " + std::to_string(kMinBenchIterations) +
                        " iterations, got " + std::to_string(iterations));
    std::ostringstream sink;
    Session s(sink, std::move(registry));
    Interpreter& in = s.interp();
    Bridge& bridge = s.bridge();
    in.dostring(kLoops, "bench");

    BenchReport r;
    r.iterations = iterations;
    const Value n(static_cast<double>(iterations));
    const Value loop0 = in.globals().get("loop0");
    const Value loop1 = in.globals().get("loop1");
    const Value loop2 = in.globals().get("loop2");
    const Value native = in.globals().get("native");
    const Value counter(bridge.host_new_instance("bench.Counter", {}));

    auto timed = [&](const Value& loop, const Value& target) {
        const Value args[] = {target, n};
        return measure([&] { in.call(loop, args); });
    };
    r.emptyLoop = timed(loop0, counter);
    r.oneCall = timed(loop1, counter);
    r.twoCalls = timed(loop2, counter);
    r.nativeOneCall = timed(loop1, native);
    r.nativeTwoCalls = timed(loop2, native);
    r.perCallOutbound = per_call(r.emptyLoop, r.oneCall, r.twoCalls, iterations);
    r.perCallNative = per_call(r.emptyLoop, r.nativeOneCall, r.nativeTwoCalls, iterations);
    r.ratio = r.perCallNative > 0 ? r.perCallOutbound / r.perCallNative : 0;

    // Host -> script: the same three loops, written on the host side.
    HostRuntime& rt = bridge.runtime();
    HostObjectRef cb = bridge.host_export(in.globals().get("callback").as_table(), "bench.Callback");
    const MethodDescriptor& empty = rt.registry().lookup_class("bench.Callback").methods.at("empty")[0];
    volatile long sink_counter = 0;
    r.hostEmptyLoop = measure([&] {
        for (long i = 0; i < iterations; ++i)
            sink_counter = sink_counter + 1;
    });
    r.inboundOneCall = measure([&] {
        for (long i = 0; i < iterations; ++i) {
            sink_counter = sink_counter + 1;
            rt.invoke(empty, cb, {});
        }
    });
    r.inboundTwoCalls = measure([&] {
        for (long i = 0; i < iterations; ++i) {
            sink_counter = sink_counter + 1;
            rt.invoke(empty, cb, {});
            rt.invoke(empty, cb, {});
        }
    });
    r.perCallInbound = per_call(r.hostEmptyLoop, r.inboundOneCall, r.inboundTwoCalls, iterations);

    // First call through a fresh proxy (fallback + closure) against calls 2..N.
    const Value once = in.globals().get("once");
    r.cachedCalls = std::min<long>(iterations, 10000) - 1;
    std::vector<double> firsts, cached;
    for (int run = 0; run < kBenchWarmups + kBenchRuns; ++run) {
        TableRef fresh = bridge.host_new_instance("bench.Counter", {});
        const Value args[] = {Value(fresh)};
        double first = seconds_of([&] { in.call(once, args); });
        double total = 0;
        for (long i = 0; i < r.cachedCalls; ++i)
            total += seconds_of([&] { in.call(once, args); });
        if (run >= kBenchWarmups) {
            firsts.push_back(first);
            cached.push_back(total / static_cast<double>(r.cachedCalls));
            r.fallbackFires = std::max(r.fallbackFires, bridge.stats().fires(fresh, "empty"));
        }
    }
    r.firstCall = median(firsts);
    r.cachedCall = median(cached);
    return r;
}

std::string format_report(const BenchReport& r) {
    std::ostringstream o;
    o << "three-loop benchmark, " << r.iterations << " iterations, median of " << kBenchRuns
      << " runs after " << kBenchWarmups << " warm-ups\n";
    o << "  empty loop                 " << fmt_time(r.emptyLoop) << '\n';
    o << "  script -> host   one call  " << fmt_time(r.oneCall) << ", two calls "
      << fmt_time(r.twoCalls) << ", per call " << fmt_time(r.perCallOutbound) << '\n';
    o << "  script -> script one call  " << fmt_time(r.nativeOneCall) << ", two calls "
      << fmt_time(r.nativeTwoCalls) << ", per call " << fmt_time(r.perCallNative) << '\n';
    o << "  host -> script   one call  " << fmt_time(r.inboundOneCall) << ", two calls "
      << fmt_time(r.inboundTwoCalls) << " (host empty loop " << fmt_time(r.hostEmptyLoop)
      << "), per call " << fmt_time(r.perCallInbound) << '\n';
    char ratio[64];
    std::snprintf(ratio, sizeof ratio, "%.2fx", r.ratio);
    char reference[64];
    std::snprintf(reference, sizeof reference, "%.0f us vs %.0f us, about %.0fx", kReferenceOutboundSeconds * 1e6,
                  kReferenceNativeSeconds * 1e6, kReferenceOutboundSeconds / kReferenceNativeSeconds);
    o << "  ratio host/script per call " << ratio << " (published reference: " << reference << ")\n";
    o << "  first call on a fresh proxy " << fmt_time(r.firstCall) << ", calls 2.."
      << (r.cachedCalls + 1) << " " << fmt_time(r.cachedCall) << " each, fallback fired "
      << r.fallbackFires << " time(s)\n";
    o << "  perCallOutbound > perCallNative > 0: " << (r.order_holds() ? "holds" : "VIOLATED")
      << '\n';
    return o.str();
}

std::string report_json(const BenchReport& r) {
    auto ns = [](double s) { return s * 1e9; };
    nlohmann::ordered_json j;
    j["iterations"] = r.iterations;
    j["emptyLoop"] = ns(r.emptyLoop);
    j["oneCall"] = ns(r.oneCall);
    j["twoCalls"] = ns(r.twoCalls);
    j["nativeOneCall"] = ns(r.nativeOneCall);
    j["nativeTwoCalls"] = ns(r.nativeTwoCalls);
    j["perCallOutbound"] = ns(r.perCallOutbound);
    j["perCallNative"] = ns(r.perCallNative);
    j["ratio"] = r.ratio;
    j["hostEmptyLoop"] = ns(r.hostEmptyLoop);
    j["inboundOneCall"] = ns(r.inboundOneCall);
    j["inboundTwoCalls"] = ns(r.inboundTwoCalls);
    j["perCallInbound"] = ns(r.perCallInbound);
    j["firstCall"] = ns(r.firstCall);
    j["cachedCall"] = ns(r.cachedCall);
    j["fallbackFires"] = r.fallbackFires;
    j["referenceOutbound"] = ns(kReferenceOutboundSeconds);
    j["referenceNative"] = ns(kReferenceNativeSeconds);
    j["referenceRatio"] = kReferenceOutboundSeconds / kReferenceNativeSeconds;
    j["orderHolds"] = r.order_holds();
    return j.dump();
}

}  // namespace bs
