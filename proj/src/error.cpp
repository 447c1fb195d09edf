#include "bs/error.hpp"

namespace bs {

std::string_view kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::LexError: return "LexError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RuntimeError: return "RuntimeError";
    case ErrorKind::KeyIsNil: return "KeyIsNil";
    case ErrorKind::NotCallable: return "NotCallable";
    case ErrorKind::DuplicateClass: return "DuplicateClass";
    case ErrorKind::UnknownBase: return "UnknownBase";
    case ErrorKind::FieldMethodNameCollision: return "FieldMethodNameCollision";
    case ErrorKind::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorKind::RegistryFrozen: return "RegistryFrozen";
    case ErrorKind::NotFrozen: return "NotFrozen";
    case ErrorKind::ClassNotFound: return "ClassNotFound";
    case ErrorKind::InterfaceNotInstantiable: return "InterfaceNotInstantiable";
    case ErrorKind::NoSuchField: return "NoSuchField";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
    case ErrorKind::HostException: return "HostException";
    case ErrorKind::NoMatch: return "NoMatch";
    case ErrorKind::Ambiguous: return "Ambiguous";
    case ErrorKind::NoSuchMember: return "NoSuchMember";
    case ErrorKind::ReceiverMismatch: return "ReceiverMismatch";
    case ErrorKind::ReservedField: return "ReservedField";
    case ErrorKind::ProxyNotExportable: return "ProxyNotExportable";
    case ErrorKind::NoDefaultConstructor: return "NoDefaultConstructor";
    case ErrorKind::UnimplementedMethod: return "UnimplementedMethod";
    case ErrorKind::ReturnTypeMismatch: return "ReturnTypeMismatch";
    case ErrorKind::IterationsTooSmall: return "IterationsTooSmall";
    }
    return "Error";
}

Error::Error(ErrorKind kind, std::string message, int line)
    : std::runtime_error(format(kind, message, line)), kind_(kind), message_(std::move(message)),
      line_(line) {}

void Error::set_line(int line) {
    if (line_ != 0)
        return;
    line_ = line;
    static_cast<std::runtime_error&>(*this) = std::runtime_error(format(kind_, message_, line_));
}

std::string Error::format(ErrorKind kind, const std::string& message, int line) {
    std::string out;
    if (line > 0)
        out = "line " + std::to_string(line) + ": ";
    out += kind_name(kind);
    out += ": ";
    out += message;
    return out;
}

}  // namespace bs
