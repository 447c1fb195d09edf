#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "bs/bridge.hpp"
#include "bs/host/registry.hpp"
#include "bs/interpreter.hpp"

namespace bs {

// An interpreter wired to a bridge, plus the console's demo() builtin.
class Session {
public:
    Session(std::ostream& out, std::shared_ptr<const Registry> registry);

    Interpreter& interp() { return interp_; }
    Bridge& bridge() { return bridge_; }

private:
    Interpreter interp_;
    Bridge bridge_;
};

// Demo classes plus, optionally, the classes of a JSON manifest file.
// Throws Error (InvalidDescriptor, ...) or std::runtime_error on unreadable files.
std::shared_ptr<const Registry> load_registry(const std::optional<std::string>& manifest_path);

// 0 ok, 1 script error (reported on err with its line), 2 unreadable file.
int run_file(const std::string& path, std::ostream& out, std::ostream& err,
             std::shared_ptr<const Registry> registry);

// Evaluates one expression (or, failing that, a statement list) and prints
// any results. Same exit codes as run_file.
int eval_source(std::string_view source, std::ostream& out, std::ostream& err,
                std::shared_ptr<const Registry> registry);

// Line-based console. `exit` or end of input quits, `press` fires the demo
// button, anything else is evaluated; errors are printed and the loop goes on.
void repl(std::istream& in, std::ostream& out, std::ostream& err,
          std::shared_ptr<const Registry> registry, bool prompt = true);

// Evaluates one console line in `s`; returns false for `exit`.
bool repl_line(Session& s, const std::string& line, std::ostream& out, std::ostream& err);

// All times in seconds.
struct BenchReport {
    long iterations = 0;
    double emptyLoop = 0;
    double oneCall = 0;   // outbound
    double twoCalls = 0;  // outbound
    double nativeOneCall = 0;
    double nativeTwoCalls = 0;
    double hostEmptyLoop = 0;
    double inboundOneCall = 0;
    double inboundTwoCalls = 0;
    double perCallOutbound = 0;
    double perCallNative = 0;
    double perCallInbound = 0;
    double ratio = 0;
    // first call through a fresh proxy vs the mean of calls 2..N
    double firstCall = 0;
    double cachedCall = 0;
    long cachedCalls = 0;
    std::uint64_t fallbackFires = 0;

    bool order_holds() const { return perCallOutbound > perCallNative && perCallNative > 0; }
};

inline constexpr long kMinBenchIterations = 1000;
inline constexpr int kBenchWarmups = 3;
inline constexpr int kBenchRuns = 5;
// The published reference point: 49 us per call into the host, 3 us per in-script call.
inline constexpr double kReferenceOutboundSeconds = 49e-6;
inline constexpr double kReferenceNativeSeconds = 3e-6;

// The average of the two loop differences, divided by the iteration count.
double per_call(double empty_loop, double one_call, double two_calls, long iterations);

// Throws IterationsTooSmall below kMinBenchIterations.
BenchReport run_bench(long iterations, std::shared_ptr<const Registry> registry);

std::string format_report(const BenchReport& r);
// Flat JSON object, times in nanoseconds.
std::string report_json(const BenchReport& r);

// The `bs` command line.
int cli_main(int argc, char** argv);

}  // namespace bs
