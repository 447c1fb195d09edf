#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "bs/cli.hpp"
#include "bs/error.hpp"
#include "bs/host/demo_classes.hpp"
#include "bs/host/manifest.hpp"
#include "bs/parser.hpp"

namespace bs {

namespace {

// The console of the line-based demo: a frame with a text buffer and an
// Execute button whose listener runs whatever the buffer holds.
constexpr std::string_view kConsoleScript = R"bs(
window = hostNewInstance("demo.Frame", "Console")
text = hostNewInstance("demo.TextArea")
button = hostNewInstance("demo.Button", "Execute")

BorderLayout = hostBindClass("demo.BorderLayout")

window:add(text, BorderLayout.NORTH)
window:add(button, BorderLayout.SOUTH)
window:pack()
window:show()

button_cb = {}

function button_cb:actionPerformed(ev)
  dostring(text:getText())
end

button:addActionListener(button_cb)
)bs";

void print_values(std::ostream& out, const std::vector<Value>& values) {
    if (values.empty())
        return;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i)
            out << '\t';
        out << Interpreter::to_display(values[i]);
    }
    out << '\n';
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// `return <source>` when that parses, else the source itself.
std::vector<Value> eval_line(Interpreter& in, std::string_view source, const std::string& name) {
    std::string as_expr = "return " + std::string(source);
    Chunk chunk;
    try {
        chunk = parse_source(as_expr, name);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ParseError && e.kind() != ErrorKind::LexError)
            throw;
        return in.dostring(source, name);
    }
    return in.eval(chunk);
}

}  // namespace

Session::Session(std::ostream& out, std::shared_ptr<const Registry> registry)
    : interp_(out), bridge_(interp_, std::move(registry)) {
    interp_.register_native("demo", [](Interpreter& in, std::span<const Value>) {
        in.dostring(kConsoleScript, "demo");
        return std::vector<Value>{};
    });
}

std::shared_ptr<const Registry> load_registry(const std::optional<std::string>& manifest_path) {
    auto r = std::make_shared<Registry>();
    register_demo_classes(*r);
    if (manifest_path)
        load_manifest(*r, read_file(*manifest_path), demo_natives());
    r->freeze();
    return r;
}

int run_file(const std::string& path, std::ostream& out, std::ostream& err,
             std::shared_ptr<const Registry> registry) {
    std::string source;
    try {
        source = read_file(path);
    } catch (const std::exception& e) {
        err << "bs: " << e.what() << '\n';
        return 2;
    }
    Session s(out, std::move(registry));
    try {
        s.interp().dostring(source, path);
    } catch (const Error& e) {
        out.flush();
        err << path << ':' << e.what() << '\n';
        return 1;
    }
    return 0;
}

int eval_source(std::string_view source, std::ostream& out, std::ostream& err,
                std::shared_ptr<const Registry> registry) {
    Session s(out, std::move(registry));
    try {
        print_values(out, eval_line(s.interp(), source, "eval"));
    } catch (const Error& e) {
        out.flush();
        err << e.what() << '\n';
        return 1;
    }
    return 0;
}

bool repl_line(Session& s, const std::string& raw, std::ostream& out, std::ostream& err) {
    std::string line = raw;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    line = start == std::string::npos ? std::string() : line.substr(start);
    if (line == "exit")
        return false;
    if (line.empty())
        return true;
    if (line == "press")
        line = "button:press()";
    try {
        print_values(out, eval_line(s.interp(), line, "stdin"));
    } catch (const Error& e) {
        out.flush();
        err << e.what() << '\n';
    }
    out.flush();
    return true;
}

void repl(std::istream& in, std::ostream& out, std::ostream& err,
          std::shared_ptr<const Registry> registry, bool prompt) {
    Session s(out, std::move(registry));
    std::string line;
    while (true) {
        if (prompt)
            out << "> " << std::flush;
        if (!std::getline(in, line))
            break;
        if (!repl_line(s, line, out, err))
            break;
    }
    if (prompt)
        out << '\n';
}

}  // namespace bs
