#include "bs/host/demo_classes.hpp"

#include <ostream>
#include <stdexcept>

#include "bs/host/runtime.hpp"

namespace bs {

namespace {

constexpr std::string_view kManifest = R"json({
  "classes": [
    {"name": "Point",
     "fields": [{"name": "x", "type": "float", "initial": 0},
                {"name": "y", "type": "float", "initial": 0}],
     "methods": [{"name": "move", "params": ["float", "float"], "native": "Point.move"}]},

    {"name": "demo.Component"},

    {"name": "demo.TextArea", "base": "demo.Component",
     "fields": [{"name": "text", "type": "text"}],
     "constructors": [{"params": []},
                      {"params": ["text"], "native": "TextArea.<init>(text)"}],
     "methods": [{"name": "setText", "params": ["text"], "native": "TextArea.setText"},
                 {"name": "getText", "returns": "text", "native": "TextArea.getText"}]},

    {"name": "demo.ActionEvent",
     "fields": [{"name": "command", "type": "text"}],
     "constructors": [{"params": ["text"], "native": "ActionEvent.<init>(text)"}],
     "methods": [{"name": "getActionCommand", "returns": "text",
                  "native": "ActionEvent.getActionCommand"}]},

    {"name": "demo.ActionListener", "kind": "interface",
     "methods": [{"name": "actionPerformed", "params": ["demo.ActionEvent"]}]},

    {"name": "demo.EventSource", "base": "demo.Component",
     "fields": [{"name": "listeners", "type": "demo.ActionListener[]"}],
     "methods": [{"name": "addActionListener", "params": ["demo.ActionListener"],
                  "native": "EventSource.addActionListener"},
                 {"name": "fire", "params": ["text"], "native": "EventSource.fire"},
                 {"name": "listenerCount", "returns": "int",
                  "native": "EventSource.listenerCount"}]},

    {"name": "demo.Button", "base": "demo.EventSource",
     "fields": [{"name": "label", "type": "text"}],
     "constructors": [{"params": []},
                      {"params": ["text"], "native": "Button.<init>(text)"}],
     "methods": [{"name": "press", "native": "Button.press"},
                 {"name": "getLabel", "returns": "text", "native": "Button.getLabel"}]},

    {"name": "demo.Frame",
     "fields": [{"name": "title", "type": "text"},
                {"name": "children", "type": "demo.Component[]"},
                {"name": "regions", "type": "text[]"},
                {"name": "visible", "type": "boolean", "initial": false}],
     "constructors": [{"params": []},
                      {"params": ["text"], "native": "Frame.<init>(text)"}],
     "methods": [{"name": "add", "params": ["demo.Component", "text"], "native": "Frame.add(c,r)"},
                 {"name": "add", "params": ["demo.Component"], "native": "Frame.add(c)"},
                 {"name": "pack", "native": "Frame.pack"},
                 {"name": "show", "native": "Frame.show"},
                 {"name": "getTitle", "returns": "text", "native": "Frame.getTitle"}]},

    {"name": "demo.BorderLayout",
     "fields": [{"name": "NORTH", "type": "text", "static": true, "initial": "North"},
                {"name": "SOUTH", "type": "text", "static": true, "initial": "South"},
                {"name": "EAST", "type": "text", "static": true, "initial": "East"},
                {"name": "WEST", "type": "text", "static": true, "initial": "West"},
                {"name": "CENTER", "type": "text", "static": true, "initial": "Center"}]},

    {"name": "demo.MathUtil",
     "methods": [{"name": "twice", "params": ["int"], "returns": "int", "static": true,
                  "native": "MathUtil.twice"}]},

    {"name": "demo.Greeter",
     "fields": [{"name": "name", "type": "text", "initial": "host"}],
     "constructors": [{"params": []}],
     "methods": [{"name": "hello", "returns": "text", "native": "Greeter.hello"},
                 {"name": "bye", "returns": "text", "native": "Greeter.bye"},
                 {"name": "greet", "params": ["text"], "returns": "text",
                  "native": "Greeter.greet"},
                 {"name": "conversation", "params": ["demo.Greeter"], "returns": "text",
                  "static": true, "native": "Greeter.conversation"}]},

    {"name": "bench.Counter",
     "fields": [{"name": "count", "type": "int", "initial": 0}],
     "methods": [{"name": "inc", "native": "Counter.inc"},
                 {"name": "empty", "native": "Counter.empty"},
                 {"name": "get", "returns": "int", "native": "Counter.get"}]},

    {"name": "bench.Callback", "kind": "interface",
     "methods": [{"name": "empty"}]}
  ]
})json";

std::string text_of(HostRuntime& rt, const HostObjectRef& self, const char* field) {
    return std::get<std::string>(rt.get_field(self, field));
}

// Grows an array field by one element (arrays have fixed length).
void append(HostRuntime& rt, const HostObjectRef& self, const char* field, const TypeTag& element,
            HostValue v) {
    HostValue current = rt.get_field(self, field);
    std::int64_t n = 0;
    if (auto* a = std::get_if<HostArrayRef>(&current))
        n = rt.array_length(*a);
    HostArrayRef grown = rt.array_new(element, n + 1);
    for (std::int64_t i = 0; i < n; ++i)
        rt.array_set(grown, i, rt.array_get(std::get<HostArrayRef>(current), i));
    rt.array_set(grown, n, std::move(v));
    rt.set_field(self, field, grown);
}

std::string describe_component(HostRuntime& rt, const HostObjectRef& c) {
    const Registry& reg = rt.registry();
    if (reg.is_subclass_of(c->class_name, "demo.TextArea"))
        return "TextArea: " + text_of(rt, c, "text");
    if (reg.is_subclass_of(c->class_name, "demo.Button"))
        return "Button: " + text_of(rt, c, "label");
    return c->class_name;
}

NativeTable build_natives() {
    NativeTable n;
    n["Point.move"] = [](HostRuntime& rt, const HostObjectRef& self, std::span<const HostValue> a) {
        rt.set_field(self, "x", std::get<double>(rt.get_field(self, "x")) + std::get<double>(a[0]));
        rt.set_field(self, "y", std::get<double>(rt.get_field(self, "y")) + std::get<double>(a[1]));
        return HostValue{};
    };

    n["TextArea.<init>(text)"] = [](HostRuntime& rt, const HostObjectRef& self,
                                    std::span<const HostValue> a) {
        rt.set_field(self, "text", a[0]);
        return HostValue{};
    };
    n["TextArea.setText"] = n["TextArea.<init>(text)"];
    n["TextArea.getText"] = [](HostRuntime& rt, const HostObjectRef& self,
                               std::span<const HostValue>) { return rt.get_field(self, "text"); };

    n["ActionEvent.<init>(text)"] = [](HostRuntime& rt, const HostObjectRef& self,
                                       std::span<const HostValue> a) {
        rt.set_field(self, "command", a[0]);
        return HostValue{};
    };
    n["ActionEvent.getActionCommand"] = [](HostRuntime& rt, const HostObjectRef& self,
                                           std::span<const HostValue>) {
        return rt.get_field(self, "command");
    };

    n["EventSource.addActionListener"] = [](HostRuntime& rt, const HostObjectRef& self,
                                            std::span<const HostValue> a) {
        append(rt, self, "listeners", TypeTag::interface("demo.ActionListener"), a[0]);
        return HostValue{};
    };
    n["EventSource.fire"] = [](HostRuntime& rt, const HostObjectRef& self,
                               std::span<const HostValue> a) {
        HostValue listeners = rt.get_field(self, "listeners");
        auto* arr = std::get_if<HostArrayRef>(&listeners);
        if (!arr)
            return HostValue{};
        HostArrayRef snapshot = *arr;
        const HostValue ctor_args[] = {a[0]};
        HostValue event = rt.instantiate("demo.ActionEvent", ctor_args);
        for (std::int64_t i = 0; i < rt.array_length(snapshot); ++i) {
            HostValue l = rt.array_get(snapshot, i);
            if (auto* obj = std::get_if<HostObjectRef>(&l)) {
                const HostValue call_args[] = {event};
                rt.call_method(*obj, "actionPerformed", call_args);
            }
        }
        return HostValue{};
    };
    n["EventSource.listenerCount"] = [](HostRuntime& rt, const HostObjectRef& self,
                                        std::span<const HostValue>) {
        HostValue listeners = rt.get_field(self, "listeners");
        auto* arr = std::get_if<HostArrayRef>(&listeners);
        return HostValue{arr ? rt.array_length(*arr) : std::int64_t{0}};
    };

    n["Button.<init>(text)"] = [](HostRuntime& rt, const HostObjectRef& self,
                                  std::span<const HostValue> a) {
        rt.set_field(self, "label", a[0]);
        return HostValue{};
    };
    n["Button.press"] = [](HostRuntime& rt, const HostObjectRef& self, std::span<const HostValue>) {
        const HostValue args[] = {rt.get_field(self, "label")};
        return rt.call_method(self, "fire", args);
    };
    n["Button.getLabel"] = [](HostRuntime& rt, const HostObjectRef& self,
                              std::span<const HostValue>) { return rt.get_field(self, "label"); };

    n["Frame.<init>(text)"] = [](HostRuntime& rt, const HostObjectRef& self,
                                 std::span<const HostValue> a) {
        rt.set_field(self, "title", a[0]);
        return HostValue{};
    };
    n["Frame.add(c,r)"] = [](HostRuntime& rt, const HostObjectRef& self,
                             std::span<const HostValue> a) {
        append(rt, self, "children", TypeTag::object("demo.Component"), a[0]);
        append(rt, self, "regions", TypeTag::text(), a[1]);
        return HostValue{};
    };
    n["Frame.add(c)"] = [](HostRuntime& rt, const HostObjectRef& self,
                           std::span<const HostValue> a) {
        append(rt, self, "children", TypeTag::object("demo.Component"), a[0]);
        append(rt, self, "regions", TypeTag::text(), std::string("Center"));
        return HostValue{};
    };
    n["Frame.pack"] = [](HostRuntime&, const HostObjectRef&, std::span<const HostValue>) {
        return HostValue{};
    };
    n["Frame.show"] = [](HostRuntime& rt, const HostObjectRef& self, std::span<const HostValue>) {
        rt.set_field(self, "visible", true);
        std::ostream& out = rt.out();
        out << "== " << text_of(rt, self, "title") << " ==\n";
        HostValue children = rt.get_field(self, "children");
        HostValue regions = rt.get_field(self, "regions");
        if (auto* c = std::get_if<HostArrayRef>(&children)) {
            const auto& r = std::get<HostArrayRef>(regions);
            for (std::int64_t i = 0; i < rt.array_length(*c); ++i) {
                HostValue child = rt.array_get(*c, i);
                out << '[' << std::get<std::string>(rt.array_get(r, i)) << "] ";
                if (auto* o = std::get_if<HostObjectRef>(&child))
                    out << describe_component(rt, *o) << '\n';
                else
                    out << "null\n";
            }
        }
        out.flush();
        return HostValue{};
    };
    n["Frame.getTitle"] = [](HostRuntime& rt, const HostObjectRef& self,
                             std::span<const HostValue>) { return rt.get_field(self, "title"); };

    n["MathUtil.twice"] = [](HostRuntime&, const HostObjectRef&, std::span<const HostValue> a) {
        return HostValue{std::get<std::int64_t>(a[0]) * 2};
    };

    n["Greeter.hello"] = [](HostRuntime& rt, const HostObjectRef& self,
                            std::span<const HostValue>) {
        return HostValue{"hello from " + text_of(rt, self, "name")};
    };
    n["Greeter.bye"] = [](HostRuntime& rt, const HostObjectRef& self, std::span<const HostValue>) {
        return HostValue{"bye from " + text_of(rt, self, "name")};
    };
    n["Greeter.greet"] = [](HostRuntime& rt, const HostObjectRef& self,
                            std::span<const HostValue> a) {
        return HostValue{text_of(rt, self, "name") + " greets " + std::get<std::string>(a[0])};
    };
    n["Greeter.conversation"] = [](HostRuntime& rt, const HostObjectRef&,
                                   std::span<const HostValue> a) {
        const auto& g = std::get<HostObjectRef>(a[0]);
        if (!g)
            throw std::invalid_argument("conversation needs a greeter");
        const HostValue who[] = {std::string("you")};
        std::string s = std::get<std::string>(rt.call_method(g, "hello", {}));
        s += " / " + std::get<std::string>(rt.call_method(g, "greet", who));
        s += " / " + std::get<std::string>(rt.call_method(g, "bye", {}));
        return HostValue{s};
    };

    n["Counter.inc"] = [](HostRuntime& rt, const HostObjectRef& self, std::span<const HostValue>) {
        rt.set_field(self, "count", std::get<std::int64_t>(rt.get_field(self, "count")) + 1);
        return HostValue{};
    };
    n["Counter.empty"] = [](HostRuntime&, const HostObjectRef&, std::span<const HostValue>) {
        return HostValue{};
    };
    n["Counter.get"] = [](HostRuntime& rt, const HostObjectRef& self, std::span<const HostValue>) {
        return rt.get_field(self, "count");
    };
    return n;
}

}  // namespace

std::string_view demo_manifest() { return kManifest; }

const NativeTable& demo_natives() {
    static const NativeTable natives = build_natives();
    return natives;
}

void register_demo_classes(Registry& registry) {
    load_manifest(registry, kManifest, demo_natives());
}

std::shared_ptr<const Registry> demo_registry() {
    auto r = std::make_shared<Registry>();
    register_demo_classes(*r);
    r->freeze();
    return r;
}

}  // namespace bs
