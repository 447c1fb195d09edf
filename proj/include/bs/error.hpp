#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bs {

enum class ErrorKind {
    LexError,
    ParseError,
    RuntimeError,
    KeyIsNil,
    NotCallable,
    // host registry
    DuplicateClass,
    UnknownBase,
    FieldMethodNameCollision,
    InvalidDescriptor,
    RegistryFrozen,
    NotFrozen,
    ClassNotFound,
    InterfaceNotInstantiable,
    NoSuchField,
    TypeMismatch,
    IndexOutOfBounds,
    HostException,
    // conversion / bridges
    NoMatch,
    Ambiguous,
    NoSuchMember,
    ReceiverMismatch,
    ReservedField,
    ProxyNotExportable,
    NoDefaultConstructor,
    UnimplementedMethod,
    ReturnTypeMismatch,
    // cli
    IterationsTooSmall,
};

std::string_view kind_name(ErrorKind kind);

// Every failure in the system is one of these: a kind, a message and the
// script line it was raised on (0 when no script line applies).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, int line = 0);

    ErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    const std::string& message() const { return message_; }

    void set_line(int line);

private:
    static std::string format(ErrorKind kind, const std::string& message, int line);

    ErrorKind kind_;
    std::string message_;
    int line_;
};

}  // namespace bs
